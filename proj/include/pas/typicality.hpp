#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pas/pmf.hpp"

namespace pas {

/// Absolute slack added to every typicality inequality (log domain).
inline constexpr double kTypicalitySlack = 1e-12;

struct TypConfig {
    int n = 1;
    double eps = 0.1;
    double budget = 1e7;                 // max sequences / composition classes enumerated
    std::uint64_t mc_samples = 100000;   // Monte Carlo fallback for conditional probabilities
    std::uint64_t seed = 0;

    void validate() const;
};

using Sequence = std::vector<std::uint32_t>;

/// Weak typicality of a single sequence under an iid source.
bool is_typical(std::span<const std::uint32_t> seq, const Pmf& pmf, const TypConfig& config);

struct TypicalSet {
    TypConfig config;
    Pmf pmf;
    double h = 0.0;
    std::vector<Sequence> members;  // lexicographic order
    double mass = 0.0;              // total probability of the members
    bool upper_ok = false;          // |A| <= 2^{n(H+eps)}
    bool large_n = false;           // mass >= 1 - eps
    bool lower_ok = false;          // |A| >= (1-eps) 2^{n(H-eps)}, meaningful when large_n
    bool member_bounds_ok = false;  // 2^{-n(H+eps)} <= p(x) <= 2^{-n(H-eps)} for every member
};

TypicalSet enumerate_typical(const Pmf& pmf, const TypConfig& config);

/// Sparse joint type: (joint symbol, count) pairs.
using JointType = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

/// Typicality over a collection of component variables with a joint pmf on
/// their product alphabet (mixed radix, first component most significant).
/// A tuple of sequences is typical when every nonempty subset of components
/// passes the weak-typicality test under its marginal.
class JointTypicality {
public:
    JointTypicality() = default;
    JointTypicality(std::vector<std::size_t> dims, std::vector<double> joint);

    std::size_t num_components() const noexcept { return dims_.size(); }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return size_; }
    unsigned full_mask() const noexcept { return (1u << dims_.size()) - 1u; }
    /// Every nonempty mask, largest subsets first.
    const std::vector<unsigned>& all_masks() const noexcept { return all_masks_; }
    /// The pairwise triple {a, b}, {a}, {b} for two disjoint masks.
    static std::vector<unsigned> pair_masks(unsigned a, unsigned b) { return {a | b, a, b}; }

    double joint_prob(std::uint32_t index) const { return joint_[index]; }
    double entropy(unsigned mask) const { return h_[mask]; }
    /// log2 of the marginal of `mask` at the projection of a full index.
    double log_marginal(unsigned mask, std::uint32_t index) const;

    std::uint32_t flatten(std::span<const std::uint32_t> digits) const;
    void digits(std::uint32_t index, std::span<std::uint32_t> out) const;

    bool typical(std::span<const std::uint32_t> seq, double eps, std::span<const unsigned> masks) const;
    bool typical(std::span<const std::uint32_t> seq, double eps) const { return typical(seq, eps, all_masks_); }
    bool typical_type(const JointType& type, int n, double eps, std::span<const unsigned> masks) const;
    bool typical_type(const JointType& type, int n, double eps) const { return typical_type(type, n, eps, all_masks_); }

private:
    std::uint32_t project(unsigned mask, std::uint32_t index) const;

    std::vector<std::size_t> dims_;
    std::size_t size_ = 0;
    std::vector<double> joint_;
    std::vector<unsigned> all_masks_;
    std::vector<double> h_;                       // by mask
    std::vector<std::vector<double>> marg_log_;   // by mask, over the projected alphabet
    std::vector<std::vector<double>> full_log_;   // by mask, over the full alphabet (when affordable)
};

/// Pairs (x, y) tested against the three marginal/joint conditions.
bool is_jointly_typical(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y, const JointPmf& joint,
                        const TypConfig& config);

/// Component layout of U and V; flattened U index is the high part of the
/// joint index, i.e. joint = u * |V| + v.
struct CompositeShape {
    std::vector<std::size_t> u_dims;
    std::vector<std::size_t> v_dims;
};

/// p(u, v) = p(u) p(v|u) on (possibly composite) alphabets.
class UvModel {
public:
    UvModel(Pmf pu, StochasticMatrix transition);
    UvModel(Pmf pu, StochasticMatrix transition, CompositeShape shape);

    const Pmf& pu() const noexcept { return pu_; }
    const StochasticMatrix& transition() const noexcept { return w_; }
    const CompositeShape& shape() const noexcept { return shape_; }
    const JointTypicality& joint() const noexcept { return joint_; }
    std::size_t nu() const noexcept { return pu_.size(); }
    std::size_t nv() const noexcept { return w_.cols(); }
    unsigned u_mask() const noexcept { return u_mask_; }
    unsigned v_mask() const noexcept { return joint_.full_mask() & ~u_mask_; }
    /// Masks that involve U components only.
    const std::vector<unsigned>& u_masks() const noexcept { return u_masks_; }
    std::uint32_t joint_index(std::uint32_t u, std::uint32_t v) const {
        return u * static_cast<std::uint32_t>(nv()) + v;
    }
    double h_u() const { return joint_.entropy(u_mask_); }
    double h_uv() const { return joint_.entropy(joint_.full_mask()); }

    bool u_typical(std::span<const std::uint32_t> u, double eps) const;

private:
    Pmf pu_;
    StochasticMatrix w_;
    CompositeShape shape_;
    JointTypicality joint_;
    unsigned u_mask_ = 0;
    std::vector<unsigned> u_masks_;
};

struct ConditionalProb {
    double probability = 0.0;
    double std_error = 0.0;
    bool exact = true;
    std::uint64_t samples = 0;  // Monte Carlo samples, 0 when exact
};

/// Pr{(u, V) in A(UV) | U = u}; exact over joint types when the number of
/// conditional composition classes fits the budget, else Monte Carlo.
ConditionalProb conditional_typical_prob(std::span<const std::uint32_t> u, const UvModel& model,
                                         const TypConfig& config);
/// Number of v sequences jointly typical with u (exact; budget error otherwise).
double conditional_typical_count(std::span<const std::uint32_t> u, const UvModel& model, const TypConfig& config);

bool is_b_typical(std::span<const std::uint32_t> u, const UvModel& model, const TypConfig& config);

struct BTypicalSet {
    TypConfig config;
    std::vector<Sequence> members;   // lexicographic order
    std::vector<double> cond_prob;   // per member
    std::vector<double> std_error;   // per member, 0 when exact
    bool exact = true;               // every conditional probability computed exactly
    std::size_t typical_count = 0;   // |A(U)|
    double typical_mass = 0.0;       // sum over A(U) of p(u)
    double b_mass = 0.0;             // sum over B of p(u)
    double joint_mass = 0.0;         // sum over A(U) of p(u) Pr{(u,V) in A | u}
    double h_u = 0.0;
};

BTypicalSet enumerate_b_typical(const UvModel& model, const TypConfig& config);

struct Lemma1Report {
    bool p1_ok = false;
    double p2_mass = 0.0;          // sum over u not in B of p(u)
    bool p2_within_eps = false;    // p2_mass <= eps (measured)
    bool large_n = false;          // joint typical mass >= 1 - eps^2
    bool p3_upper_ok = false;      // |B| <= 2^{n(H(U)+eps)}
    bool p3_lower_ok = false;      // |B| >= (1-eps) 2^{n(H(U)-eps)} (measured)
    bool conditional_bound_ok = false;  // |A(V|u)| <= 2^{n(H(V|U)+2eps)} for typical u
    double joint_mass = 0.0;
    std::size_t b_count = 0;
    std::size_t a_count = 0;
    double h_u = 0.0;
    bool exact = true;
};

Lemma1Report lemma1_report(const UvModel& model, const TypConfig& config);

struct JointSetReport {
    double count = 0.0;          // |A(UV)|
    double mass = 0.0;           // Pr{(U,V) in A(UV)}
    double h_uv = 0.0;
    double h_v_given_u = 0.0;
    bool joint_upper_ok = false;      // |A(UV)| <= 2^{n(H(U,V)+eps)}
    bool member_bounds_ok = false;    // 2^{-n(H(U,V)+eps)} <= p(u,v) <= 2^{-n(H(U,V)-eps)}
    bool conditional_ok = false;      // |A(V|u)| <= 2^{n(H(V|U)+2eps)} for every typical u
    double max_conditional_count = 0.0;
};

/// Counts the joint typical set by composition classes.
JointSetReport joint_set_bounds(const UvModel& model, const TypConfig& config);

}  // namespace pas
