#pragma once

// Independent reference computations used by the unit and acceptance tests.
// They deliberately avoid the library's algorithms and work from dense
// tables, closed forms and brute-force enumeration.

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace oracle {

using Table = std::vector<std::vector<double>>;  // rows x cols
using Counts = std::vector<std::uint32_t>;

inline constexpr double kSlack = 1e-12;

double h2(double p);
double entropy(const std::vector<double>& p);

/// I(X;Y) from the dense joint.
double mutual_information(const std::vector<double>& px, const Table& w);
/// H(C|Y) for a labeling bit table bit[x] over the dense joint.
double conditional_bit_entropy(const std::vector<double>& px, const Table& w, const std::vector<int>& bit);
/// H(X) - sum_i H(C_i|Y), unclipped, with label bits bits[level][x].
double bmd_rate_unclipped(const std::vector<double>& px, const Table& w, const std::vector<std::vector<int>>& bits);

/// 8-ASK BRGC fixture: rows A, S, X, B1, B2 over the eight points.
struct Brgc8Table {
    std::vector<int> a, s, x, b1, b2;
};
Brgc8Table brgc8_table();

/// Every composition of n into k nonnegative parts.
void for_each_composition(int n, int k, const std::function<void(const Counts&)>& f);
double multinomial(const Counts& c);
double log2_multinomial(const Counts& c);

/// Weak typicality of a composition under p.
bool typical_counts(const Counts& c, const std::vector<double>& p, int n, double eps);

struct SetSummary {
    double count = 0.0;
    double mass = 0.0;
};

/// Size and probability of the weak typical set by composition classes.
SetSummary typical_set_by_composition(const std::vector<double>& p, int n, double eps);

/// Pair test from the joint type with the three conditions (x, y, xy).
bool jointly_typical_pair(const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y, const Table& joint,
                          double eps);

/// Conditional probability that (u, V) is jointly typical (x, y, xy
/// conditions) given the composition of u, summed over per-symbol
/// conditional compositions of v.
double conditional_prob_by_composition(const Counts& u_counts, const std::vector<double>& pu, const Table& w, int n,
                                       double eps);

/// Same quantity by direct enumeration of all |V|^n sequences.
double conditional_prob_direct(const std::vector<std::uint32_t>& u, const std::vector<double>& pu, const Table& w,
                               double eps);

struct BSummary {
    double count = 0.0;
    double mass = 0.0;
    std::map<Counts, double> member_compositions;  // composition -> conditional probability
};

/// B-typical set by u compositions.
BSummary b_typical_by_composition(const std::vector<double>& pu, const Table& w, int n, double eps);

/// Joint typical set size |A(UV)| and max over typical u of |A(V|u)|.
struct JointSummary {
    double count = 0.0;
    double mass = 0.0;
    double max_conditional = 0.0;
};
JointSummary joint_set_by_composition(const std::vector<double>& pu, const Table& w, int n, double eps);

}  // namespace oracle
