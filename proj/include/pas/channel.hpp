#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pas/alphabets.hpp"
#include "pas/pmf.hpp"

namespace pas {

/// Output quantizer for the AWGN channel: num_bins cells centered on evenly
/// spaced levels spanning [min point - clip_sigmas*sigma, max point +
/// clip_sigmas*sigma], the two outermost cells unbounded.
struct Quantizer {
    int num_bins = 2000;
    double clip_sigmas = 6.0;

    void validate() const;
};

struct AwgnSpec {
    double snr_db = 0.0;
    int num_bins = 2000;
    double clip_sigmas = 6.0;

    Quantizer quantizer() const { return {num_bins, clip_sigmas}; }
};

/// Discrete memoryless channel p(y|x) with the constellation points it is
/// driven by.
class Dmc {
public:
    Dmc() = default;
    Dmc(StochasticMatrix law, std::vector<double> input_points);

    std::size_t nin() const noexcept { return law_.rows(); }
    std::size_t nout() const noexcept { return law_.cols(); }
    double operator()(std::size_t x, std::size_t y) const { return law_(x, y); }
    std::span<const double> row(std::size_t x) const { return law_.row(x); }
    const StochasticMatrix& law() const noexcept { return law_; }
    const std::vector<double>& input_points() const noexcept { return points_; }

private:
    StochasticMatrix law_;
    std::vector<double> points_;
};

/// Noise standard deviation, in units of the integer constellation grid, for
/// which E[X^2]/sigma^2 equals the SNR under `power_pmf`.
double noise_sigma(const AskConstellation& c, const Pmf& power_pmf, double snr_db);

Dmc quantize_awgn(const AskConstellation& c, const AwgnSpec& spec, const Pmf& power_pmf);
Dmc quantize_awgn_sigma(const AskConstellation& c, double sigma, const Quantizer& q);

/// Identity channel over the constellation (y index == x index).
Dmc noiseless_dmc(const AskConstellation& c);

double sequence_likelihood(const Dmc& dmc, std::span<const std::uint32_t> x, std::span<const std::uint32_t> y);
/// log2 of the sequence likelihood; -infinity when any factor is zero.
double sequence_log2_likelihood(const Dmc& dmc, std::span<const std::uint32_t> x,
                                std::span<const std::uint32_t> y);

/// Level channel obtained by marginalizing p(x)p(y|x) onto one label bit.
struct BitChannel {
    Pmf prior;                  // p(c_i) over {0, 1}
    std::size_t nout = 0;
    std::vector<double> law;    // 2 x nout, p(y | c_i); zero row where p(c_i) = 0

    double operator()(int bit, std::size_t y) const { return law[static_cast<std::size_t>(bit) * nout + y]; }
};

BitChannel bit_channel(const Dmc& dmc, const LabelMap& labels, const Pmf& input, std::size_t level);

/// Inverse-CDF sampler over the rows of a DMC.
class DmcSampler {
public:
    explicit DmcSampler(const Dmc& dmc);
    /// u must lie in [0, 1).
    std::uint32_t sample(std::size_t x, double u) const;

private:
    std::size_t nout_ = 0;
    std::vector<double> cdf_;
};

}  // namespace pas
