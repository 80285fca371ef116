#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pas {

/// Probability mass function over an opaque, index-addressed support.
/// Construction checks nonnegativity and that the mass sums to one within
/// kInputTolerance, then renormalizes so the stored mass is exact to 1e-12.
class Pmf {
public:
    static constexpr double kInputTolerance = 1e-9;

    Pmf() = default;
    explicit Pmf(std::vector<double> probs);

    static Pmf uniform(std::size_t size);
    static Pmf point_mass(std::size_t size, std::size_t index);

    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    std::span<const double> probs() const noexcept { return p_; }

    bool operator==(const Pmf&) const = default;

private:
    std::vector<double> p_;
};

/// Row-stochastic matrix, used both as a DMC law p(y|x) and as a generic
/// transition p(v|u).
class StochasticMatrix {
public:
    static constexpr double kRowTolerance = 1e-12;

    StochasticMatrix() = default;
    /// Rows must each sum to one within 1e-9; they are renormalized so the
    /// stored rows meet kRowTolerance.
    StochasticMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    static StochasticMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t r, std::size_t c) const { return w_[r * cols_ + c]; }
    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(w_).subspan(r * cols_, cols_);
    }
    std::span<const double> values() const noexcept { return w_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> w_;
};

/// Joint distribution p(x, y) stored row-major over input x output.
class JointPmf {
public:
    JointPmf() = default;
    JointPmf(std::size_t rows, std::size_t cols, std::vector<double> values);
    static JointPmf product(const Pmf& input, const StochasticMatrix& law);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t x, std::size_t y) const { return p_[x * cols_ + y]; }
    std::span<const double> values() const noexcept { return p_; }

    Pmf row_marginal() const;
    Pmf col_marginal() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> p_;
};

/// -sum p log2 p over the given masses with 0 log 0 = 0. No validation.
double entropy_bits(std::span<const double> masses) noexcept;

}  // namespace pas
