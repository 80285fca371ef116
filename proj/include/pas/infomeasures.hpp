#pragma once

#include <cstddef>
#include <vector>

#include "pas/alphabets.hpp"
#include "pas/channel.hpp"
#include "pas/pmf.hpp"

namespace pas {

// All quantities are in bits. Terms with p(x, y) = 0 are skipped.

double entropy(const Pmf& pmf);

double mutual_information(const Pmf& input, const Dmc& dmc);
double output_entropy(const Pmf& input, const Dmc& dmc);
/// H(X|Y)
double equivocation(const Pmf& input, const Dmc& dmc);

/// H(C_i | Y) for label level i (0 = sign bit).
double conditional_level_entropy(const Pmf& input, const Dmc& dmc, const LabelMap& labels, std::size_t level);
/// I(C_i ; Y)
double level_mutual_information(const Pmf& input, const Dmc& dmc, const LabelMap& labels, std::size_t level);

/// H(C) - sum_i H(C_i | Y) without clipping; may be negative.
double r_bmd_unclipped(const Pmf& input, const Dmc& dmc, const LabelMap& labels);
double r_bmd(const Pmf& input, const Dmc& dmc, const LabelMap& labels);

/// Symbol decoding metric q(x, y) >= 0, nin x nout row-major.
struct DecodingMetric {
    std::size_t nin = 0;
    std::size_t nout = 0;
    std::vector<double> q;

    double operator()(std::size_t x, std::size_t y) const { return q[x * nout + y]; }
};

DecodingMetric matched_metric(const Dmc& dmc);
DecodingMetric constant_metric(std::size_t nin, std::size_t nout, double value = 1.0);
/// Product of level metrics q_i(c_i, y) = p(y | c_i).
DecodingMetric bit_metric(const Pmf& input, const Dmc& dmc, const LabelMap& labels);

/// Cost r(x) >= 0 for the LM rate.
struct CostFunction {
    std::vector<double> r;
};

CostFunction unit_cost(std::size_t nin);
/// r(c) = prod_i p(c_i) / p(c); zero where p(c) = 0.
CostFunction bmd_cost(const Pmf& input, const LabelMap& labels);

/// Expectation of log2(q^s / sum_x' p(x') q(x', Y)^s) under p(x, y).
double gmi_objective(const Pmf& input, const Dmc& dmc, const DecodingMetric& metric, double s);

struct GmiResult {
    double value = 0.0;      // clipped at zero
    double unclipped = 0.0;
    double s_star = 0.0;
};

GmiResult gmi(const Pmf& input, const Dmc& dmc, const DecodingMetric& metric);

double lm_rate_eval(const Pmf& input, const Dmc& dmc, const DecodingMetric& metric, double s,
                    const CostFunction& cost);

struct MiChain {
    double mi_xy = 0.0;          // I(X;Y)
    double h_a = 0.0;            // H(A)
    double i_s_a = 0.0;          // I(S;A)
    double i_s_y_given_a = 0.0;  // I(S;Y|A)
    double i_s_ay = 0.0;         // I(S;AY)
    bool holds = false;          // I(X;Y) - H(A) <= I(S;AY) + 1e-9
};

/// Evaluates the sign/amplitude mutual-information chain. The DMC input
/// points must form a symmetric ASK alphabet.
MiChain mi_inequality_chain(const Pmf& input, const Dmc& dmc);

}  // namespace pas
