#include "pas/pmf.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "pas/errors.hpp"

namespace pas {

namespace {

double checked_sum(std::span<const double> v, const char* what) {
    double s = 0.0;
    for (double x : v) {
        if (!std::isfinite(x) || x < 0.0) throw DomainError(std::string(what) + ": negative or non-finite mass");
        s += x;
    }
    return s;
}

// Already-normalized input is kept bit-exact so serialized tables round trip.
constexpr double kRenormalizeThreshold = 1e-13;

}  // namespace

Pmf::Pmf(std::vector<double> probs) : p_(std::move(probs)) {
    if (p_.empty()) throw SizeError("pmf: empty support");
    double s = checked_sum(p_, "pmf");
    if (std::abs(s - 1.0) > kInputTolerance) throw DomainError("pmf: mass sums to " + std::to_string(s));
    if (std::abs(s - 1.0) > kRenormalizeThreshold)
        for (double& x : p_) x /= s;
}

Pmf Pmf::uniform(std::size_t size) {
    if (size == 0) throw SizeError("pmf: empty support");
    return Pmf(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

Pmf Pmf::point_mass(std::size_t size, std::size_t index) {
    if (index >= size) throw DomainError("pmf: point mass index out of range");
    std::vector<double> p(size, 0.0);
    p[index] = 1.0;
    return Pmf(std::move(p));
}

StochasticMatrix::StochasticMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), w_(std::move(values)) {
    if (rows == 0 || cols == 0) throw SizeError("stochastic matrix: empty dimension");
    if (w_.size() != rows * cols) throw ShapeError("stochastic matrix: value count does not match rows*cols");
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = std::span<double>(w_).subspan(r * cols, cols);
        double s = checked_sum(row, "stochastic matrix");
        if (std::abs(s - 1.0) > 1e-9)
            throw DomainError("stochastic matrix: row " + std::to_string(r) + " sums to " + std::to_string(s));
        if (std::abs(s - 1.0) > kRenormalizeThreshold)
            for (double& x : row) x /= s;
    }
}

StochasticMatrix StochasticMatrix::identity(std::size_t n) {
    std::vector<double> w(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) w[i * n + i] = 1.0;
    return StochasticMatrix(n, n, std::move(w));
}

JointPmf::JointPmf(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), p_(std::move(values)) {
    if (rows == 0 || cols == 0) throw SizeError("joint pmf: empty dimension");
    if (p_.size() != rows * cols) throw ShapeError("joint pmf: value count does not match rows*cols");
    double s = checked_sum(p_, "joint pmf");
    if (std::abs(s - 1.0) > Pmf::kInputTolerance) throw DomainError("joint pmf: mass sums to " + std::to_string(s));
    for (double& x : p_) x /= s;
}

JointPmf JointPmf::product(const Pmf& input, const StochasticMatrix& law) {
    if (input.size() != law.rows()) throw ShapeError("joint pmf: input size does not match channel rows");
    std::vector<double> v(law.rows() * law.cols());
    for (std::size_t x = 0; x < law.rows(); ++x)
        for (std::size_t y = 0; y < law.cols(); ++y) v[x * law.cols() + y] = input[x] * law(x, y);
    return JointPmf(law.rows(), law.cols(), std::move(v));
}

Pmf JointPmf::row_marginal() const {
    std::vector<double> m(rows_, 0.0);
    for (std::size_t x = 0; x < rows_; ++x)
        for (std::size_t y = 0; y < cols_; ++y) m[x] += p_[x * cols_ + y];
    return Pmf(std::move(m));
}

Pmf JointPmf::col_marginal() const {
    std::vector<double> m(cols_, 0.0);
    for (std::size_t x = 0; x < rows_; ++x)
        for (std::size_t y = 0; y < cols_; ++y) m[y] += p_[x * cols_ + y];
    return Pmf(std::move(m));
}

double entropy_bits(std::span<const double> masses) noexcept {
    double h = 0.0;
    for (double p : masses)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

}  // namespace pas
