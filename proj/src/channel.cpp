#include "pas/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pas/errors.hpp"

namespace pas {

namespace {

double qfunc(double t) { return 0.5 * std::erfc(t / std::sqrt(2.0)); }

// Standard normal mass of (a, b), evaluated on the tail side to keep relative
// accuracy far from the mean.
double normal_mass(double a, double b) {
    if (a >= 0.0) return qfunc(a) - qfunc(b);
    if (b <= 0.0) return qfunc(-b) - qfunc(-a);
    return 1.0 - qfunc(-a) - qfunc(b);
}

void check_sequences(const Dmc& dmc, std::span<const std::uint32_t> x, std::span<const std::uint32_t> y) {
    if (x.size() != y.size())
        throw ShapeError("sequence lengths differ: " + std::to_string(x.size()) + " vs " + std::to_string(y.size()));
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] >= dmc.nin() || y[i] >= dmc.nout()) throw DomainError("sequence symbol out of range");
}

}  // namespace

void Quantizer::validate() const {
    if (num_bins < 2) throw SizeError("num_bins must be at least 2");
    if (!(clip_sigmas > 0.0) || !std::isfinite(clip_sigmas)) throw DomainError("clip_sigmas must be positive");
}

Dmc::Dmc(StochasticMatrix law, std::vector<double> input_points) : law_(std::move(law)), points_(std::move(input_points)) {
    if (points_.size() != law_.rows()) throw ShapeError("input point count does not match channel rows");
}

double noise_sigma(const AskConstellation& c, const Pmf& power_pmf, double snr_db) {
    if (power_pmf.size() != c.size()) throw ShapeError("power pmf size does not match constellation");
    double e2 = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) e2 += power_pmf[i] * c.points[i] * c.points[i];
    double sigma = std::sqrt(e2 / std::pow(10.0, snr_db / 10.0));
    if (!std::isfinite(sigma) || sigma <= 0.0) throw DomainError("noise sigma is not finite and positive");
    return sigma;
}

Dmc quantize_awgn_sigma(const AskConstellation& c, double sigma, const Quantizer& q) {
    q.validate();
    if (!std::isfinite(sigma) || sigma <= 0.0) throw DomainError("noise sigma is not finite and positive");
    const std::size_t nin = c.size();
    const std::size_t nout = static_cast<std::size_t>(q.num_bins);
    const double lo = c.points.front() - q.clip_sigmas * sigma;
    const double hi = c.points.back() + q.clip_sigmas * sigma;
    const double h = (hi - lo) / static_cast<double>(nout - 1);
    std::vector<double> edges(nout + 1);
    edges.front() = -std::numeric_limits<double>::infinity();
    edges.back() = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < nout; ++k) edges[k] = lo + (static_cast<double>(k) - 0.5) * h;

    std::vector<double> w(nin * nout);
    for (std::size_t x = 0; x < nin; ++x) {
        double sum = 0.0;
        for (std::size_t y = 0; y < nout; ++y) {
            double a = (edges[y] - c.points[x]) / sigma;
            double b = (edges[y + 1] - c.points[x]) / sigma;
            double v = std::max(0.0, normal_mass(a, b));
            w[x * nout + y] = v;
            sum += v;
        }
        for (std::size_t y = 0; y < nout; ++y) w[x * nout + y] /= sum;
    }
    std::vector<double> pts(c.points.begin(), c.points.end());
    return Dmc(StochasticMatrix(nin, nout, std::move(w)), std::move(pts));
}

Dmc quantize_awgn(const AskConstellation& c, const AwgnSpec& spec, const Pmf& power_pmf) {
    spec.quantizer().validate();
    return quantize_awgn_sigma(c, noise_sigma(c, power_pmf, spec.snr_db), spec.quantizer());
}

Dmc noiseless_dmc(const AskConstellation& c) {
    std::vector<double> pts(c.points.begin(), c.points.end());
    return Dmc(StochasticMatrix::identity(c.size()), std::move(pts));
}

double sequence_likelihood(const Dmc& dmc, std::span<const std::uint32_t> x, std::span<const std::uint32_t> y) {
    double l = sequence_log2_likelihood(dmc, x, y);
    return std::isinf(l) ? 0.0 : std::exp2(l);
}

double sequence_log2_likelihood(const Dmc& dmc, std::span<const std::uint32_t> x,
                                std::span<const std::uint32_t> y) {
    check_sequences(dmc, x, y);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double w = dmc(x[i], y[i]);
        if (w <= 0.0) return -std::numeric_limits<double>::infinity();
        s += std::log2(w);
    }
    return s;
}

BitChannel bit_channel(const Dmc& dmc, const LabelMap& labels, const Pmf& input, std::size_t level) {
    if (level >= labels.num_levels()) throw DomainError("label level out of range");
    if (input.size() != dmc.nin()) throw ShapeError("input pmf size does not match channel rows");
    if (dmc.nin() != (std::size_t{2} << labels.m())) throw ShapeError("label map does not match channel inputs");
    const std::size_t nout = dmc.nout();
    std::vector<double> prior(2, 0.0);
    std::vector<double> law(2 * nout, 0.0);
    for (std::size_t x = 0; x < dmc.nin(); ++x) {
        if (input[x] <= 0.0) continue;
        int b = labels.level_bit(x, level);
        prior[b] += input[x];
        auto row = dmc.row(x);
        for (std::size_t y = 0; y < nout; ++y) law[b * nout + y] += input[x] * row[y];
    }
    for (int b = 0; b < 2; ++b)
        if (prior[b] > 0.0)
            for (std::size_t y = 0; y < nout; ++y) law[b * nout + y] /= prior[b];
    BitChannel bc;
    bc.prior = Pmf(prior);
    bc.nout = nout;
    bc.law = std::move(law);
    return bc;
}

DmcSampler::DmcSampler(const Dmc& dmc) : nout_(dmc.nout()), cdf_(dmc.nin() * dmc.nout()) {
    for (std::size_t x = 0; x < dmc.nin(); ++x) {
        auto row = dmc.row(x);
        double acc = 0.0;
        std::size_t last = 0;
        for (std::size_t y = 0; y < nout_; ++y) {
            acc += row[y];
            cdf_[x * nout_ + y] = acc;
            if (row[y] > 0.0) last = y;
        }
        for (std::size_t y = last; y < nout_; ++y) cdf_[x * nout_ + y] = 1.0;
    }
}

std::uint32_t DmcSampler::sample(std::size_t x, double u) const {
    auto first = cdf_.begin() + static_cast<std::ptrdiff_t>(x * nout_);
    auto it = std::upper_bound(first, first + static_cast<std::ptrdiff_t>(nout_), u);
    if (it == first + static_cast<std::ptrdiff_t>(nout_)) --it;
    return static_cast<std::uint32_t>(it - first);
}

}  // namespace pas
