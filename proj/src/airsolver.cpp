#include "pas/airsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pas/errors.hpp"
#include "pas/infomeasures.hpp"

namespace pas {

namespace {

constexpr double kFeasibleSlack = 1e-12;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double second_moment(const AskConstellation& c, std::span<const double> p) {
    double e = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) e += p[i] * c.points[i] * c.points[i];
    return e;
}

void symmetrize(std::vector<double>& p) {
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        double v = 0.5 * (p[i] + p[n - 1 - i]);
        p[i] = v;
        p[n - 1 - i] = v;
    }
}

void normalize(std::vector<double>& p) {
    double s = 0.0;
    for (double v : p) s += v;
    for (double& v : p) v /= s;
}

struct ScaleEval {
    double u = 0.0;
    double sigma = 0.0;
    ScaledSolution sol;
};

}  // namespace

ScaledSolution solve_power_constrained(const AskConstellation& c, const Dmc& dmc, double budget,
                                       const SolverOptions& opts, const Pmf* start) {
    const std::size_t nin = c.size();
    const std::size_t nout = dmc.nout();
    if (dmc.nin() != nin) throw ShapeError("channel inputs do not match constellation");
    const double min_power = 1.0;
    if (!(budget > 0.0)) throw DomainError("power budget must be positive");

    std::vector<double> x2(nin);
    for (std::size_t i = 0; i < nin; ++i) x2[i] = static_cast<double>(c.points[i]) * c.points[i];

    if (budget <= min_power * (1.0 + 1e-12) || nin == 2) {
        std::vector<double> p(nin, 0.0);
        p[c.point_index(1, 0)] = 0.5;
        p[c.point_index(-1, 0)] = 0.5;
        Pmf px(p);
        return {amplitude_marginal(c, px), mutual_information(px, dmc), 0};
    }

    std::vector<double> wlw(nin, 0.0);
    for (std::size_t x = 0; x < nin; ++x) {
        auto row = dmc.row(x);
        for (std::size_t y = 0; y < nout; ++y)
            if (row[y] > 0.0) wlw[x] += row[y] * std::log2(row[y]);
    }

    std::vector<double> p(nin, 1.0 / static_cast<double>(nin));
    if (start != nullptr && start->size() == c.num_amplitudes()) {
        auto sp = mirror_amplitudes(c, *start);
        for (std::size_t i = 0; i < nin; ++i) p[i] = 0.9 * sp[i] + 0.1 / static_cast<double>(nin);
    }

    // Over-relaxed update p * 2^(mu (d - lambda x^2)). The relaxation mu grows
    // while the MI keeps increasing and falls back to the plain step (mu = 1,
    // monotone) otherwise, which matters at low SNR where plain steps crawl.
    constexpr double kMaxRelaxation = 64.0;
    double mu = 1.0;
    std::vector<double> q(nout), lq(nout), d(nin), w(nin), accepted = p;
    auto update = [&](double lambda) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nin; ++i) mx = std::max(mx, mu * (d[i] - lambda * x2[i]));
        for (std::size_t i = 0; i < nin; ++i) w[i] = p[i] * std::exp2(mu * (d[i] - lambda * x2[i]) - mx);
        symmetrize(w);
        normalize(w);
        double e = 0.0;
        for (std::size_t i = 0; i < nin; ++i) e += w[i] * x2[i];
        return e;
    };

    double prev = -std::numeric_limits<double>::infinity();
    bool reverted = false;
    for (int it = 0; it < opts.max_iterations; ++it) {
        std::fill(q.begin(), q.end(), 0.0);
        for (std::size_t x = 0; x < nin; ++x) {
            if (p[x] <= 0.0) continue;
            auto row = dmc.row(x);
            for (std::size_t y = 0; y < nout; ++y) q[y] += p[x] * row[y];
        }
        for (std::size_t y = 0; y < nout; ++y) lq[y] = q[y] > 0.0 ? std::log2(q[y]) : 0.0;
        double mi = 0.0;
        for (std::size_t x = 0; x < nin; ++x) {
            auto row = dmc.row(x);
            double cross = 0.0;
            for (std::size_t y = 0; y < nout; ++y) cross += row[y] * lq[y];
            d[x] = wlw[x] - cross;
            mi += p[x] * d[x];
        }
        if (mu > 1.0 && mi < prev) {
            p = accepted;
            mu = 1.0;
            reverted = true;
            continue;
        }
        if (!reverted && std::abs(mi - prev) < opts.tolerance) {
            Pmf px(p);
            return {amplitude_marginal(c, px), std::max(0.0, mi), it};
        }
        if (!reverted && it > 0) mu = std::min(2.0 * mu, kMaxRelaxation);
        reverted = false;
        prev = mi;
        accepted = p;

        double lambda = 0.0;
        if (update(0.0) > budget) {
            double lo = 0.0;
            double hi = 1.0;
            while (update(hi) > budget) hi *= 2.0;
            while (hi - lo > opts.multiplier_tolerance * std::max(1.0, hi)) {
                double mid = 0.5 * (lo + hi);
                if (update(mid) > budget) lo = mid;
                else hi = mid;
            }
            lambda = hi;
        }
        update(lambda);
        p = w;
    }
    Pmf px(p);
    auto pa = amplitude_marginal(c, px);
    throw ConvergenceError("capacity iteration did not converge in " + std::to_string(opts.max_iterations) +
                               " iterations",
                           std::vector<double>(pa.probs().begin(), pa.probs().end()));
}

AirPoint optimize_capacity(const AskConstellation& c, double snr_db, const Quantizer& q, const SolverOptions& opts) {
    q.validate();
    if (!std::isfinite(snr_db)) throw DomainError("snr_db must be finite");
    const double power = db_to_linear(snr_db);
    const double order = static_cast<double>(c.order());
    const double u_min = 1.0 / (order - 1.0);

    Pmf warm;
    auto eval = [&](double u) {
        ScaleEval e;
        e.u = u;
        e.sigma = 1.0 / (u * std::sqrt(power));
        Dmc dmc = quantize_awgn_sigma(c, e.sigma, q);
        e.sol = solve_power_constrained(c, dmc, 1.0 / (u * u), opts, warm.size() ? &warm : nullptr);
        warm = e.sol.p_a;
        return e;
    };

    ScaleEval best;
    if (c.m == 0) {
        best = eval(1.0);
    } else {
        constexpr int kGrid = 24;
        std::vector<ScaleEval> grid;
        grid.reserve(kGrid + 1);
        std::size_t bi = 0;
        for (int k = 0; k <= kGrid; ++k) {
            grid.push_back(eval(u_min + (1.0 - u_min) * k / kGrid));
            if (grid.back().sol.mi > grid[bi].sol.mi) bi = grid.size() - 1;
        }
        best = grid[bi];
        double a = grid[bi == 0 ? 0 : bi - 1].u;
        double b = grid[std::min(bi + 1, grid.size() - 1)].u;
        const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
        ScaleEval ec = eval(b - phi * (b - a));
        ScaleEval ed = eval(a + phi * (b - a));
        while (b - a > 1e-6) {
            if (ec.sol.mi >= ed.sol.mi) {
                b = ed.u;
                ed = ec;
                ec = eval(b - phi * (b - a));
            } else {
                a = ec.u;
                ec = ed;
                ed = eval(a + phi * (b - a));
            }
        }
        for (const ScaleEval* e : {&ec, &ed})
            if (e->sol.mi > best.sol.mi) best = *e;
    }

    AirPoint pt;
    pt.snr_db = snr_db;
    pt.capacity = best.sol.mi;
    pt.p_a_star = best.sol.p_a;
    pt.h_a = entropy(pt.p_a_star);
    pt.gamma = std::clamp(pt.capacity - pt.h_a, 0.0, std::nextafter(1.0, 0.0));
    pt.mi_uniform = uniform_mi(c, snr_db, q);
    pt.scale = best.u * std::sqrt(power);
    pt.sigma = best.sigma;
    Pmf px = mirror_amplitudes(c, pt.p_a_star);
    pt.power = pt.scale * pt.scale * second_moment(c, px.probs());
    pt.r_bmd_star = r_bmd(px, quantize_awgn_sigma(c, pt.sigma, q), brgc_label(c));
    pt.iterations = best.sol.iterations;
    return pt;
}

Pmf mb_family(const AskConstellation& c, double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be finite and nonnegative");
    std::vector<double> p(c.num_amplitudes());
    double a0 = c.amplitudes.front();
    for (std::size_t k = 0; k < p.size(); ++k) {
        double a = c.amplitudes[k];
        p[k] = std::exp(-lambda * (a * a - a0 * a0));
    }
    normalize(p);
    return Pmf(std::move(p));
}

double shaped_mi(const AskConstellation& c, const Pmf& amplitude_pmf, double snr_db, const Quantizer& q) {
    Pmf px = mirror_amplitudes(c, amplitude_pmf);
    AwgnSpec spec{snr_db, q.num_bins, q.clip_sigmas};
    return mutual_information(px, quantize_awgn(c, spec, px));
}

double uniform_mi(const AskConstellation& c, double snr_db, const Quantizer& q) {
    return shaped_mi(c, Pmf::uniform(c.num_amplitudes()), snr_db, q);
}

BasicPoint find_basic_point(const AskConstellation& c, const Quantizer& q, double snr_lo, double snr_hi,
                            const SolverOptions& opts) {
    if (!(snr_lo < snr_hi)) throw BracketError("snr bracket must satisfy lo < hi");
    auto excess = [](const AirPoint& p) { return p.h_a - p.capacity; };
    AirPoint lo = optimize_capacity(c, snr_lo, q, opts);
    AirPoint hi = optimize_capacity(c, snr_hi, q, opts);
    double flo = excess(lo);
    double fhi = excess(hi);
    if ((flo > 0.0) == (fhi > 0.0))
        throw BracketError("H(A*) - C does not change sign on [" + std::to_string(snr_lo) + ", " +
                           std::to_string(snr_hi) + "] dB");
    // Keep `infeasible` on the H(A*) > C side and `feasible` on the other.
    AirPoint infeasible = flo > 0.0 ? lo : hi;
    AirPoint feasible = flo > 0.0 ? hi : lo;
    for (int it = 0; it < 80 && std::abs(excess(feasible)) >= 1e-4; ++it) {
        if (std::abs(feasible.snr_db - infeasible.snr_db) < 1e-9) break;
        AirPoint mid = optimize_capacity(c, 0.5 * (feasible.snr_db + infeasible.snr_db), q, opts);
        if (excess(mid) > 0.0) infeasible = mid;
        else feasible = mid;
    }
    return {feasible.snr_db, feasible.capacity, feasible.h_a, feasible};
}

GammaSplit gamma_split(const AskConstellation& c, double snr_db, const Quantizer& q, const SolverOptions& opts) {
    AirPoint pt = optimize_capacity(c, snr_db, q, opts);
    GammaSplit g;
    g.h_a = pt.h_a;
    g.capacity = pt.capacity;
    g.gamma = pt.capacity - pt.h_a;
    g.below_basic_point = g.gamma < 0.0;
    g.point = pt;
    if (g.gamma >= 1.0)
        throw RangeError("gamma = " + std::to_string(g.gamma) + " >= 1 is outside modified sign-coding");
    return g;
}

ShapingGap shaping_gap(const AskConstellation& c, double rate, const Quantizer& q, const SolverOptions& opts) {
    const double max_rate = std::log2(static_cast<double>(c.order()));
    constexpr double kRateMargin = 1e-2;
    if (!(rate > 0.0) || rate >= max_rate - kRateMargin)
        throw RangeError("rate " + std::to_string(rate) + " outside (0, " + std::to_string(max_rate - kRateMargin) + ")");
    constexpr double kPrecision = 1e-3;
    const double shannon = 10.0 * std::log10(std::exp2(2.0 * rate) - 1.0);

    double lo = shannon;
    double hi = shannon + 1.0;
    while (uniform_mi(c, hi, q) < rate) {
        lo = hi;
        hi += 2.0 * (hi - shannon);
        if (hi > 120.0) throw RangeError("uniform input does not reach the target rate");
    }
    while (hi - lo > kPrecision) {
        double mid = 0.5 * (lo + hi);
        if (uniform_mi(c, mid, q) < rate) lo = mid;
        else hi = mid;
    }
    const double snr_u = 0.5 * (lo + hi);

    lo = shannon;
    hi = snr_u;
    while (hi - lo > kPrecision) {
        double mid = 0.5 * (lo + hi);
        if (optimize_capacity(c, mid, q, opts).capacity < rate) lo = mid;
        else hi = mid;
    }
    const double snr_c = 0.5 * (lo + hi);
    return {std::max(0.0, snr_u - snr_c), snr_u, snr_c};
}

FeasibilityReport theorem_feasibility(const Pmf& amplitude_pmf, double gamma, const Dmc& dmc, const LabelMap& labels) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw RangeError("gamma must lie in [0, 1)");
    AskConstellation c = make_ask(labels.m());
    if (dmc.nin() != c.size()) throw ShapeError("channel inputs do not match label map");
    Pmf px = mirror_amplitudes(c, amplitude_pmf);
    const double h_a = entropy(amplitude_pmf);
    const double mi = mutual_information(px, dmc);
    FeasibilityReport r;
    r.slack_smd = mi - h_a - gamma;
    r.slack_bmd = r_bmd(px, dmc, labels) - h_a - gamma;
    r.slack_equivocation = 1.0 - gamma - equivocation(px, dmc);
    r.smd_ok = r.slack_smd >= -kFeasibleSlack;
    r.bmd_ok = r.slack_bmd >= -kFeasibleSlack;
    r.smd_ok_equivocation = r.slack_equivocation >= -kFeasibleSlack;
    return r;
}

}  // namespace pas
