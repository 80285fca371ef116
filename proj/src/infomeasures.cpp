#include "pas/infomeasures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pas/errors.hpp"

namespace pas {

namespace {

void check_input(const Pmf& input, const Dmc& dmc) {
    if (input.size() != dmc.nin())
        throw ShapeError("input pmf size " + std::to_string(input.size()) + " does not match channel inputs " +
                         std::to_string(dmc.nin()));
}

void check_levels(const Dmc& dmc, const LabelMap& labels) {
    if (dmc.nin() != (std::size_t{2} << labels.m())) throw ShapeError("label map does not match channel inputs");
}

std::vector<double> output_pmf(const Pmf& input, const Dmc& dmc) {
    std::vector<double> q(dmc.nout(), 0.0);
    for (std::size_t x = 0; x < dmc.nin(); ++x) {
        if (input[x] <= 0.0) continue;
        auto row = dmc.row(x);
        for (std::size_t y = 0; y < dmc.nout(); ++y) q[y] += input[x] * row[y];
    }
    return q;
}

void check_metric(const Pmf& input, const Dmc& dmc, const DecodingMetric& metric) {
    check_input(input, dmc);
    if (metric.nin != dmc.nin() || metric.nout != dmc.nout() || metric.q.size() != metric.nin * metric.nout)
        throw ShapeError("metric shape does not match channel");
    for (std::size_t x = 0; x < dmc.nin(); ++x)
        for (std::size_t y = 0; y < dmc.nout(); ++y) {
            double v = metric(x, y);
            if (!std::isfinite(v) || v < 0.0) throw DomainError("metric entries must be finite and nonnegative");
            if (v == 0.0 && input[x] > 0.0 && dmc(x, y) > 0.0)
                throw DomainError("metric is zero on a support point");
        }
}

// Expectation of log2(q^s r(x) / sum_x' p(x') q(x',Y)^s r(x')) over p(x,y).
double tilted_expectation(const Pmf& input, const Dmc& dmc, const DecodingMetric& metric, double s,
                          const std::vector<double>& r) {
    const std::size_t nin = dmc.nin();
    const std::size_t nout = dmc.nout();
    double total = 0.0;
    for (std::size_t y = 0; y < nout; ++y) {
        double denom = 0.0;
        double py = 0.0;
        for (std::size_t x = 0; x < nin; ++x) {
            if (input[x] <= 0.0) continue;
            double q = metric(x, y);
            if (q > 0.0 && r[x] > 0.0) denom += input[x] * std::exp2(s * std::log2(q)) * r[x];
            py += input[x] * dmc(x, y);
        }
        if (py <= 0.0) continue;
        double ld = std::log2(denom);
        for (std::size_t x = 0; x < nin; ++x) {
            double pxy = input[x] * dmc(x, y);
            if (pxy <= 0.0) continue;
            total += pxy * (s * std::log2(metric(x, y)) + std::log2(r[x]) - ld);
        }
    }
    return total;
}

}  // namespace

double entropy(const Pmf& pmf) { return entropy_bits(pmf.probs()); }

double mutual_information(const Pmf& input, const Dmc& dmc) {
    check_input(input, dmc);
    auto q = output_pmf(input, dmc);
    double mi = 0.0;
    for (std::size_t x = 0; x < dmc.nin(); ++x) {
        if (input[x] <= 0.0) continue;
        auto row = dmc.row(x);
        double d = 0.0;
        for (std::size_t y = 0; y < dmc.nout(); ++y)
            if (row[y] > 0.0) d += row[y] * std::log2(row[y] / q[y]);
        mi += input[x] * d;
    }
    return std::max(0.0, mi);
}

double output_entropy(const Pmf& input, const Dmc& dmc) {
    check_input(input, dmc);
    return entropy_bits(output_pmf(input, dmc));
}

double equivocation(const Pmf& input, const Dmc& dmc) {
    return std::max(0.0, entropy(input) - mutual_information(input, dmc));
}

double conditional_level_entropy(const Pmf& input, const Dmc& dmc, const LabelMap& labels, std::size_t level) {
    check_input(input, dmc);
    check_levels(dmc, labels);
    if (level >= labels.num_levels()) throw DomainError("label level out of range");
    const std::size_t nout = dmc.nout();
    std::vector<double> joint(2 * nout, 0.0);
    for (std::size_t x = 0; x < dmc.nin(); ++x) {
        if (input[x] <= 0.0) continue;
        int b = labels.level_bit(x, level);
        auto row = dmc.row(x);
        for (std::size_t y = 0; y < nout; ++y) joint[b * nout + y] += input[x] * row[y];
    }
    double h = 0.0;
    for (std::size_t y = 0; y < nout; ++y) {
        double p0 = joint[y];
        double p1 = joint[nout + y];
        double py = p0 + p1;
        if (p0 > 0.0) h -= p0 * std::log2(p0 / py);
        if (p1 > 0.0) h -= p1 * std::log2(p1 / py);
    }
    return std::max(0.0, h);
}

double level_mutual_information(const Pmf& input, const Dmc& dmc, const LabelMap& labels, std::size_t level) {
    BitChannel bc = bit_channel(dmc, labels, input, level);
    return std::max(0.0, entropy(bc.prior) - conditional_level_entropy(input, dmc, labels, level));
}

double r_bmd_unclipped(const Pmf& input, const Dmc& dmc, const LabelMap& labels) {
    double r = entropy(input);
    for (std::size_t i = 0; i < labels.num_levels(); ++i) r -= conditional_level_entropy(input, dmc, labels, i);
    return r;
}

double r_bmd(const Pmf& input, const Dmc& dmc, const LabelMap& labels) {
    return std::max(0.0, r_bmd_unclipped(input, dmc, labels));
}

DecodingMetric matched_metric(const Dmc& dmc) {
    auto v = dmc.law().values();
    return {dmc.nin(), dmc.nout(), std::vector<double>(v.begin(), v.end())};
}

DecodingMetric constant_metric(std::size_t nin, std::size_t nout, double value) {
    if (!std::isfinite(value) || value < 0.0) throw DomainError("metric value must be finite and nonnegative");
    return {nin, nout, std::vector<double>(nin * nout, value)};
}

DecodingMetric bit_metric(const Pmf& input, const Dmc& dmc, const LabelMap& labels) {
    check_input(input, dmc);
    check_levels(dmc, labels);
    DecodingMetric m = constant_metric(dmc.nin(), dmc.nout(), 1.0);
    for (std::size_t i = 0; i < labels.num_levels(); ++i) {
        BitChannel bc = bit_channel(dmc, labels, input, i);
        for (std::size_t x = 0; x < dmc.nin(); ++x) {
            int b = labels.level_bit(x, i);
            for (std::size_t y = 0; y < dmc.nout(); ++y) m.q[x * dmc.nout() + y] *= bc(b, y);
        }
    }
    return m;
}

CostFunction unit_cost(std::size_t nin) { return {std::vector<double>(nin, 1.0)}; }

CostFunction bmd_cost(const Pmf& input, const LabelMap& labels) {
    if (input.size() != (std::size_t{2} << labels.m())) throw ShapeError("label map does not match input pmf");
    std::vector<std::vector<double>> level_prior(labels.num_levels(), std::vector<double>(2, 0.0));
    for (std::size_t x = 0; x < input.size(); ++x)
        for (std::size_t i = 0; i < labels.num_levels(); ++i) level_prior[i][labels.level_bit(x, i)] += input[x];
    CostFunction c{std::vector<double>(input.size(), 0.0)};
    for (std::size_t x = 0; x < input.size(); ++x) {
        if (input[x] <= 0.0) continue;
        double prod = 1.0;
        for (std::size_t i = 0; i < labels.num_levels(); ++i) prod *= level_prior[i][labels.level_bit(x, i)];
        c.r[x] = prod / input[x];
    }
    return c;
}

double gmi_objective(const Pmf& input, const Dmc& dmc, const DecodingMetric& metric, double s) {
    check_metric(input, dmc, metric);
    if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("tilt s must be finite and nonnegative");
    return tilted_expectation(input, dmc, metric, s, std::vector<double>(dmc.nin(), 1.0));
}

GmiResult gmi(const Pmf& input, const Dmc& dmc, const DecodingMetric& metric) {
    check_metric(input, dmc, metric);
    const std::vector<double> ones(dmc.nin(), 1.0);
    auto f = [&](double s) { return tilted_expectation(input, dmc, metric, s, ones); };

    constexpr double kMaxS = 16.0;
    constexpr int kGrid = 32;
    double best_s = 1.0;
    double best = f(1.0);
    int best_k = -1;
    double grid_best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= kGrid; ++k) {
        double s = kMaxS * k / kGrid;
        double v = f(s);
        if (v > grid_best) {
            grid_best = v;
            best_k = k;
        }
    }
    double a = kMaxS * std::max(0, best_k - 1) / kGrid;
    double b = kMaxS * std::min(kGrid, best_k + 1) / kGrid;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > 1e-6) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    double s_mid = 0.5 * (a + b);
    double v_mid = f(s_mid);
    if (v_mid > best) {
        best = v_mid;
        best_s = s_mid;
    }
    double s_grid = kMaxS * best_k / kGrid;
    if (grid_best > best) {
        best = grid_best;
        best_s = s_grid;
    }
    return {std::max(0.0, best), best, best_s};
}

double lm_rate_eval(const Pmf& input, const Dmc& dmc, const DecodingMetric& metric, double s,
                    const CostFunction& cost) {
    check_metric(input, dmc, metric);
    if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("tilt s must be finite and nonnegative");
    if (cost.r.size() != dmc.nin()) throw ShapeError("cost size does not match channel inputs");
    for (std::size_t x = 0; x < cost.r.size(); ++x) {
        if (!std::isfinite(cost.r[x]) || cost.r[x] < 0.0) throw DomainError("cost must be finite and nonnegative");
        if (cost.r[x] == 0.0 && input[x] > 0.0) throw DomainError("cost is zero on a support point");
    }
    return tilted_expectation(input, dmc, metric, s, cost.r);
}

MiChain mi_inequality_chain(const Pmf& input, const Dmc& dmc) {
    check_input(input, dmc);
    const auto& pts = dmc.input_points();
    const std::size_t n = pts.size();
    if (n % 2 != 0) throw DomainError("alphabet does not factorize into sign and amplitude");
    for (std::size_t i = 0; i < n; ++i) {
        if (pts[i] != -pts[n - 1 - i] || pts[i] == 0.0) throw DomainError("alphabet does not factorize into sign and amplitude");
        if (i > 0 && !(pts[i] > pts[i - 1])) throw DomainError("input points must be strictly increasing");
    }
    const std::size_t half = n / 2;
    auto pos = [&](std::size_t k) { return half + k; };
    auto neg = [&](std::size_t k) { return half - 1 - k; };

    MiChain r;
    r.mi_xy = mutual_information(input, dmc);
    std::vector<double> pa(half), ps(2, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
        pa[k] = input[pos(k)] + input[neg(k)];
        ps[0] += input[neg(k)];
        ps[1] += input[pos(k)];
    }
    r.h_a = entropy_bits(pa);
    double h_s_given_a = 0.0;
    for (std::size_t k = 0; k < half; ++k) {
        if (pa[k] <= 0.0) continue;
        double c[2] = {input[neg(k)] / pa[k], input[pos(k)] / pa[k]};
        h_s_given_a += pa[k] * entropy_bits(c);
        std::size_t xs[2] = {neg(k), pos(k)};
        double d = 0.0;
        for (std::size_t y = 0; y < dmc.nout(); ++y) {
            double q = c[0] * dmc(xs[0], y) + c[1] * dmc(xs[1], y);
            for (int b = 0; b < 2; ++b) {
                double w = dmc(xs[b], y);
                if (c[b] > 0.0 && w > 0.0) d += c[b] * w * std::log2(w / q);
            }
        }
        r.i_s_y_given_a += pa[k] * std::max(0.0, d);
    }
    r.i_s_a = std::max(0.0, entropy_bits(ps) - h_s_given_a);
    r.i_s_ay = r.i_s_a + r.i_s_y_given_a;
    r.holds = r.mi_xy - r.h_a <= r.i_s_ay + 1e-9;
    return r;
}

}  // namespace pas
