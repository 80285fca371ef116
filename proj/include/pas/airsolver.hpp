#pragma once

#include <vector>

#include "pas/alphabets.hpp"
#include "pas/channel.hpp"
#include "pas/pmf.hpp"

namespace pas {

struct SolverOptions {
    double tolerance = 1e-9;      // stop when the MI improvement falls below this
    int max_iterations = 10000;
    double multiplier_tolerance = 1e-10;
};

/// One optimized operating point. Power is normalized to sigma^2 = 1 with
/// P = 10^(snr_db/10); `scale` is the constellation spacing in those units
/// and `sigma` the noise deviation measured on the integer grid.
struct AirPoint {
    double snr_db = 0.0;
    double capacity = 0.0;
    Pmf p_a_star;
    double h_a = 0.0;
    double gamma = 0.0;  // capacity - h_a clamped to [0, 1)
    double mi_uniform = 0.0;
    double r_bmd_star = 0.0;
    double power = 0.0;
    double scale = 0.0;
    double sigma = 0.0;
    int iterations = 0;
};

/// Maximizes I(X;Y) over symmetric inputs p(x) = p(a)/2 and over the
/// constellation scale subject to E[X^2] <= P.
AirPoint optimize_capacity(const AskConstellation& c, double snr_db, const Quantizer& q,
                           const SolverOptions& opts = {});

struct ScaledSolution {
    Pmf p_a;
    double mi = 0.0;
    int iterations = 0;
};

/// Inner problem at fixed integer-grid noise deviation: Blahut-Arimoto over
/// symmetric inputs with E[x^2] <= budget on the integer grid.
ScaledSolution solve_power_constrained(const AskConstellation& c, const Dmc& dmc, double budget,
                                       const SolverOptions& opts = {}, const Pmf* start = nullptr);

/// p(a) proportional to exp(-lambda a^2).
Pmf mb_family(const AskConstellation& c, double lambda);

/// MI of a fixed amplitude pmf with sigma set so that the pmf meets the SNR.
double shaped_mi(const AskConstellation& c, const Pmf& amplitude_pmf, double snr_db, const Quantizer& q);
double uniform_mi(const AskConstellation& c, double snr_db, const Quantizer& q);

struct BasicPoint {
    double snr_db = 0.0;
    double rate = 0.0;  // capacity at snr_db
    double h_a = 0.0;
    AirPoint point;
};

/// Bisects snr_db until |H(A*) - C| < 1e-4 and returns the endpoint on the
/// side where H(A*) <= C.
BasicPoint find_basic_point(const AskConstellation& c, const Quantizer& q, double snr_lo = -2.0,
                            double snr_hi = 4.0, const SolverOptions& opts = {});

struct GammaSplit {
    double h_a = 0.0;
    double gamma = 0.0;  // capacity - h_a, unclamped
    double capacity = 0.0;
    bool below_basic_point = false;
    AirPoint point;
};

GammaSplit gamma_split(const AskConstellation& c, double snr_db, const Quantizer& q, const SolverOptions& opts = {});

struct ShapingGap {
    double gap_db = 0.0;
    double snr_uniform_db = 0.0;
    double snr_capacity_db = 0.0;
};

ShapingGap shaping_gap(const AskConstellation& c, double rate, const Quantizer& q, const SolverOptions& opts = {});

struct FeasibilityReport {
    bool smd_ok = false;
    bool bmd_ok = false;
    double slack_smd = 0.0;  // I(X;Y) - H(A) - gamma
    double slack_bmd = 0.0;  // R_BMD - H(A) - gamma
    bool smd_ok_equivocation = false;
    double slack_equivocation = 0.0;  // 1 - gamma - H(X|Y)
};

FeasibilityReport theorem_feasibility(const Pmf& amplitude_pmf, double gamma, const Dmc& dmc, const LabelMap& labels);

}  // namespace pas
