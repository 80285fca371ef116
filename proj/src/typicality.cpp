#include "pas/typicality.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>

#include "pas/errors.hpp"
#include "pas/rng.hpp"

namespace pas {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kFullTableLimit = std::size_t{1} << 22;

bool within(double log2_prob_sum, int n, double h, double eps) {
    if (!std::isfinite(log2_prob_sum)) return false;
    return std::abs(-log2_prob_sum / n - h) <= eps + kTypicalitySlack;
}

double pow_count(std::size_t base, int n) { return std::pow(static_cast<double>(base), n); }

void check_budget(double required, double budget, const std::string& what) {
    if (required > budget) throw BudgetError(what + " needs " + std::to_string(required) + " > budget " +
                                                 std::to_string(budget), required, budget);
}

// Advances a lexicographic odometer; false after the last sequence.
bool advance(Sequence& s, std::size_t base) {
    for (std::size_t i = s.size(); i-- > 0;) {
        if (++s[i] < base) return true;
        s[i] = 0;
    }
    return false;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

std::vector<std::uint32_t> composition(std::span<const std::uint32_t> seq, std::size_t size) {
    std::vector<std::uint32_t> c(size, 0);
    for (auto s : seq) ++c[s];
    return c;
}

std::uint64_t hash_counts(const std::vector<std::uint32_t>& counts) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto c : counts) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Enumerates joint types of (u, v) for a fixed u composition. The callback
// receives (typical, number of v sequences, conditional probability, joint
// log2-probability of one member).
class ConditionalEnumerator {
public:
    using Leaf = std::function<void(bool, double, double, double)>;

    ConditionalEnumerator(const UvModel& model, const std::vector<std::uint32_t>& counts, int n, double eps)
        : model_(model), counts_(counts), n_(n), eps_(eps), masks_(model.joint().all_masks()) {
        for (std::size_t a = 0; a < counts.size(); ++a) {
            if (counts[a] == 0) continue;
            Group g;
            g.u = static_cast<std::uint32_t>(a);
            g.count = static_cast<int>(counts[a]);
            for (std::size_t v = 0; v < model.nv(); ++v)
                if (model.transition()(a, v) > 0.0) g.support.push_back(static_cast<std::uint32_t>(v));
            groups_.push_back(std::move(g));
        }
    }

    double classes() const {
        double c = 1.0;
        for (const auto& g : groups_) {
            if (g.support.empty()) return 0.0;
            c *= binomial(g.count + static_cast<int>(g.support.size()) - 1, static_cast<int>(g.support.size()) - 1);
        }
        return c;
    }

    void run(const Leaf& leaf) {
        for (const auto& g : groups_)
            if (g.support.empty()) return;
        leaf_ = &leaf;
        std::vector<double> sums(masks_.size(), 0.0);
        recurse(0, 0, groups_.empty() ? 0 : groups_[0].count, sums, 1.0, 0.0);
    }

private:
    struct Group {
        std::uint32_t u = 0;
        int count = 0;
        std::vector<std::uint32_t> support;
    };

    void recurse(std::size_t g, std::size_t j, int remaining, std::vector<double>& sums, double count_w,
                 double log_w) {
        if (g == groups_.size()) {
            bool typ = true;
            for (std::size_t i = 0; i < masks_.size() && typ; ++i)
                typ = within(sums[i], n_, model_.joint().entropy(masks_[i]), eps_);
            double full = sums.empty() ? 0.0 : sums[0];
            (*leaf_)(typ, count_w, count_w * std::exp(log_w), full);
            return;
        }
        const Group& grp = groups_[g];
        const std::size_t s = grp.support.size();
        std::uint32_t v = grp.support[j];
        std::uint32_t idx = model_.joint_index(grp.u, v);
        double lw = std::log(model_.transition()(grp.u, v));
        int kmin = (j + 1 == s) ? remaining : 0;
        for (int k = kmin; k <= remaining; ++k) {
            std::vector<double> next = sums;
            if (k > 0)
                for (std::size_t i = 0; i < masks_.size(); ++i) {
                    double l = model_.joint().log_marginal(masks_[i], idx);
                    next[i] = std::isfinite(l) ? next[i] + k * l : kNegInf;
                }
            double cw = count_w * binomial(remaining, k);
            double lwn = log_w + k * lw;
            if (j + 1 == s) {
                int next_rem = g + 1 < groups_.size() ? groups_[g + 1].count : 0;
                recurse(g + 1, 0, next_rem, next, cw, lwn);
            } else {
                recurse(g, j + 1, remaining - k, next, cw, lwn);
            }
        }
    }

    const UvModel& model_;
    std::vector<std::uint32_t> counts_;
    int n_;
    double eps_;
    const std::vector<unsigned>& masks_;
    std::vector<Group> groups_;
    const Leaf* leaf_ = nullptr;
};

ConditionalProb monte_carlo(const UvModel& model, const std::vector<std::uint32_t>& counts,
                            const TypConfig& config) {
    Sequence u;
    for (std::size_t a = 0; a < counts.size(); ++a) u.insert(u.end(), counts[a], static_cast<std::uint32_t>(a));
    const std::size_t nv = model.nv();
    std::map<std::uint32_t, std::vector<double>> cdf;
    for (auto a : u) {
        if (cdf.count(a)) continue;
        std::vector<double> c(nv);
        double acc = 0.0;
        for (std::size_t v = 0; v < nv; ++v) c[v] = acc += model.transition()(a, v);
        cdf.emplace(a, std::move(c));
    }
    Rng rng(stream_seed(config.seed, hash_counts(counts)));
    std::vector<std::uint32_t> seq(u.size());
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < config.mc_samples; ++s) {
        for (std::size_t t = 0; t < u.size(); ++t) {
            const auto& c = cdf.at(u[t]);
            double r = rng.uniform() * c.back();
            auto it = std::upper_bound(c.begin(), c.end(), r);
            if (it == c.end()) {
                --it;
                while (model.transition()(u[t], static_cast<std::size_t>(it - c.begin())) <= 0.0) --it;
            }
            seq[t] = model.joint_index(u[t], static_cast<std::uint32_t>(it - c.begin()));
        }
        if (model.joint().typical(seq, config.eps)) ++hits;
    }
    ConditionalProb cp;
    cp.exact = false;
    cp.samples = config.mc_samples;
    cp.probability = static_cast<double>(hits) / static_cast<double>(config.mc_samples);
    cp.std_error = std::sqrt(cp.probability * (1.0 - cp.probability) / static_cast<double>(config.mc_samples));
    return cp;
}

ConditionalProb conditional_from_counts(const UvModel& model, const std::vector<std::uint32_t>& counts, int n,
                                        const TypConfig& config) {
    ConditionalEnumerator en(model, counts, n, config.eps);
    double classes = en.classes();
    if (classes <= config.budget) {
        double p = 0.0;
        en.run([&](bool typ, double, double prob, double) {
            if (typ) p += prob;
        });
        return {std::clamp(p, 0.0, 1.0), 0.0, true, 0};
    }
    if (config.mc_samples == 0) check_budget(classes, config.budget, "conditional typical probability");
    return monte_carlo(model, counts, config);
}

bool u_counts_typical(const UvModel& model, const std::vector<std::uint32_t>& counts, int n, double eps) {
    for (unsigned mask : model.u_masks()) {
        double s = 0.0;
        for (std::size_t a = 0; a < counts.size(); ++a) {
            if (counts[a] == 0) continue;
            double l = model.joint().log_marginal(mask, model.joint_index(static_cast<std::uint32_t>(a), 0));
            if (!std::isfinite(l)) return false;
            s += counts[a] * l;
        }
        if (!within(s, n, model.joint().entropy(mask), eps)) return false;
    }
    return true;
}

double log2_prob_counts(const Pmf& p, const std::vector<std::uint32_t>& counts) {
    double s = 0.0;
    for (std::size_t a = 0; a < counts.size(); ++a) {
        if (counts[a] == 0) continue;
        if (p[a] <= 0.0) return kNegInf;
        s += counts[a] * std::log2(p[a]);
    }
    return s;
}

void check_u(std::span<const std::uint32_t> u, const UvModel& model, const TypConfig& config) {
    config.validate();
    if (u.size() != static_cast<std::size_t>(config.n))
        throw ShapeError("sequence length " + std::to_string(u.size()) + " differs from n=" + std::to_string(config.n));
    for (auto s : u)
        if (s >= model.nu()) throw DomainError("u symbol out of range");
}

void for_each_composition(std::size_t k, int n, const std::function<void(const std::vector<std::uint32_t>&)>& f) {
    std::vector<std::uint32_t> c(k, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int rem) {
        if (i + 1 == k) {
            c[i] = static_cast<std::uint32_t>(rem);
            f(c);
            return;
        }
        for (int v = rem; v >= 0; --v) {
            c[i] = static_cast<std::uint32_t>(v);
            rec(i + 1, rem - v);
        }
    };
    rec(0, n);
}

double multinomial(const std::vector<std::uint32_t>& counts) {
    int total = 0;
    double r = 1.0;
    for (auto c : counts) {
        total += static_cast<int>(c);
        r *= binomial(total, static_cast<int>(c));
    }
    return r;
}

}  // namespace

void TypConfig::validate() const {
    if (n < 1) throw SizeError("n must be at least 1");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be positive");
    if (!(budget >= 1.0)) throw DomainError("budget must be at least 1");
}

bool is_typical(std::span<const std::uint32_t> seq, const Pmf& pmf, const TypConfig& config) {
    config.validate();
    if (seq.size() != static_cast<std::size_t>(config.n))
        throw ShapeError("sequence length " + std::to_string(seq.size()) + " differs from n=" + std::to_string(config.n));
    double s = 0.0;
    for (auto x : seq) {
        if (x >= pmf.size()) throw DomainError("symbol out of range");
        if (pmf[x] <= 0.0) return false;
        s += std::log2(pmf[x]);
    }
    return within(s, config.n, entropy_bits(pmf.probs()), config.eps);
}

TypicalSet enumerate_typical(const Pmf& pmf, const TypConfig& config) {
    config.validate();
    check_budget(pow_count(pmf.size(), config.n), config.budget, "typical set enumeration");
    TypicalSet ts;
    ts.config = config;
    ts.pmf = pmf;
    ts.h = entropy_bits(pmf.probs());
    const int n = config.n;
    const double eps = config.eps;
    ts.member_bounds_ok = true;
    Sequence s(static_cast<std::size_t>(n), 0);
    do {
        double lp = 0.0;
        for (auto x : s) lp += pmf[x] > 0.0 ? std::log2(pmf[x]) : kNegInf;
        if (!within(lp, n, ts.h, eps)) continue;
        ts.members.push_back(s);
        ts.mass += std::exp2(lp);
        if (lp < -n * (ts.h + eps) - kTypicalitySlack || lp > -n * (ts.h - eps) + kTypicalitySlack)
            ts.member_bounds_ok = false;
    } while (advance(s, pmf.size()));
    const double count = static_cast<double>(ts.members.size());
    ts.upper_ok = count <= std::exp2(n * (ts.h + eps)) * (1.0 + 1e-12);
    ts.large_n = ts.mass >= 1.0 - eps;
    ts.lower_ok = count >= (1.0 - eps) * std::exp2(n * (ts.h - eps)) * (1.0 - 1e-12);
    return ts;
}

JointTypicality::JointTypicality(std::vector<std::size_t> dims, std::vector<double> joint)
    : dims_(std::move(dims)), joint_(std::move(joint)) {
    if (dims_.empty() || dims_.size() > 16) throw SizeError("component count must be in [1, 16]");
    size_ = 1;
    for (auto d : dims_) {
        if (d == 0) throw SizeError("component alphabet is empty");
        size_ *= d;
    }
    if (joint_.size() != size_) throw ShapeError("joint pmf size does not match component alphabets");
    double total = 0.0;
    for (double p : joint_) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("joint pmf has negative or non-finite mass");
        total += p;
    }
    if (std::abs(total - 1.0) > Pmf::kInputTolerance) throw DomainError("joint pmf does not sum to one");
    for (double& p : joint_) p /= total;

    const unsigned full = full_mask();
    for (unsigned m = 1; m <= full; ++m) all_masks_.push_back(m);
    std::stable_sort(all_masks_.begin(), all_masks_.end(),
                     [](unsigned a, unsigned b) { return std::popcount(a) > std::popcount(b); });

    h_.assign(full + 1, 0.0);
    marg_log_.assign(full + 1, {});
    for (unsigned m = 1; m <= full; ++m) {
        std::size_t msize = 1;
        for (std::size_t c = 0; c < dims_.size(); ++c)
            if (m & (1u << c)) msize *= dims_[c];
        std::vector<double> marg(msize, 0.0);
        for (std::uint32_t i = 0; i < size_; ++i) marg[project(m, i)] += joint_[i];
        h_[m] = entropy_bits(marg);
        for (double& p : marg) p = p > 0.0 ? std::log2(p) : kNegInf;
        marg_log_[m] = std::move(marg);
    }
    if (size_ * full <= kFullTableLimit) {
        full_log_.assign(full + 1, {});
        for (unsigned m = 1; m <= full; ++m) {
            full_log_[m].resize(size_);
            for (std::uint32_t i = 0; i < size_; ++i) full_log_[m][i] = marg_log_[m][project(m, i)];
        }
    }
}

std::uint32_t JointTypicality::project(unsigned mask, std::uint32_t index) const {
    std::uint32_t digit[16];
    for (std::size_t c = dims_.size(); c-- > 0;) {
        digit[c] = static_cast<std::uint32_t>(index % dims_[c]);
        index = static_cast<std::uint32_t>(index / dims_[c]);
    }
    std::uint32_t r = 0;
    for (std::size_t c = 0; c < dims_.size(); ++c)
        if (mask & (1u << c)) r = static_cast<std::uint32_t>(r * dims_[c] + digit[c]);
    return r;
}

double JointTypicality::log_marginal(unsigned mask, std::uint32_t index) const {
    if (!full_log_.empty()) return full_log_[mask][index];
    return marg_log_[mask][project(mask, index)];
}

std::uint32_t JointTypicality::flatten(std::span<const std::uint32_t> digits) const {
    if (digits.size() != dims_.size()) throw ShapeError("digit count does not match components");
    std::uint32_t r = 0;
    for (std::size_t c = 0; c < dims_.size(); ++c) {
        if (digits[c] >= dims_[c]) throw DomainError("component symbol out of range");
        r = static_cast<std::uint32_t>(r * dims_[c] + digits[c]);
    }
    return r;
}

void JointTypicality::digits(std::uint32_t index, std::span<std::uint32_t> out) const {
    if (out.size() != dims_.size()) throw ShapeError("digit count does not match components");
    for (std::size_t c = dims_.size(); c-- > 0;) {
        out[c] = static_cast<std::uint32_t>(index % dims_[c]);
        index = static_cast<std::uint32_t>(index / dims_[c]);
    }
}

bool JointTypicality::typical(std::span<const std::uint32_t> seq, double eps, std::span<const unsigned> masks) const {
    const int n = static_cast<int>(seq.size());
    if (n == 0) throw SizeError("empty sequence");
    for (unsigned m : masks) {
        double s = 0.0;
        if (!full_log_.empty()) {
            const auto& tab = full_log_[m];
            for (auto i : seq) s += tab[i];
        } else {
            for (auto i : seq) s += marg_log_[m][project(m, i)];
        }
        if (!within(s, n, h_[m], eps)) return false;
    }
    return true;
}

bool JointTypicality::typical_type(const JointType& type, int n, double eps, std::span<const unsigned> masks) const {
    for (unsigned m : masks) {
        double s = 0.0;
        for (auto [i, k] : type)
            if (k > 0) s += k * log_marginal(m, i);
        if (!within(s, n, h_[m], eps)) return false;
    }
    return true;
}

bool is_jointly_typical(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y, const JointPmf& joint,
                        const TypConfig& config) {
    config.validate();
    if (x.size() != y.size()) throw ShapeError("sequence lengths differ");
    if (x.size() != static_cast<std::size_t>(config.n)) throw ShapeError("sequence length differs from n");
    auto v = joint.values();
    JointTypicality jt({joint.rows(), joint.cols()}, std::vector<double>(v.begin(), v.end()));
    Sequence seq(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (x[t] >= joint.rows() || y[t] >= joint.cols()) throw DomainError("symbol out of range");
        seq[t] = static_cast<std::uint32_t>(x[t] * joint.cols() + y[t]);
    }
    return jt.typical(seq, config.eps);
}

UvModel::UvModel(Pmf pu, StochasticMatrix transition)
    : UvModel(pu, transition, CompositeShape{{pu.size()}, {transition.cols()}}) {}

UvModel::UvModel(Pmf pu, StochasticMatrix transition, CompositeShape shape)
    : pu_(std::move(pu)), w_(std::move(transition)), shape_(std::move(shape)) {
    if (pu_.size() != w_.rows()) throw ShapeError("input pmf size does not match transition rows");
    auto product = [](const std::vector<std::size_t>& d) {
        std::size_t p = 1;
        for (auto x : d) p *= x;
        return p;
    };
    if (shape_.u_dims.empty() || shape_.v_dims.empty() || product(shape_.u_dims) != pu_.size() ||
        product(shape_.v_dims) != w_.cols())
        throw ShapeError("composite shape does not match alphabets");
    std::vector<std::size_t> dims = shape_.u_dims;
    dims.insert(dims.end(), shape_.v_dims.begin(), shape_.v_dims.end());
    std::vector<double> joint(pu_.size() * w_.cols());
    for (std::size_t u = 0; u < pu_.size(); ++u)
        for (std::size_t v = 0; v < w_.cols(); ++v) joint[u * w_.cols() + v] = pu_[u] * w_(u, v);
    joint_ = JointTypicality(std::move(dims), std::move(joint));
    u_mask_ = (1u << shape_.u_dims.size()) - 1u;
    for (unsigned m : joint_.all_masks())
        if ((m & ~u_mask_) == 0) u_masks_.push_back(m);
}

bool UvModel::u_typical(std::span<const std::uint32_t> u, double eps) const {
    for (auto s : u)
        if (s >= nu()) throw DomainError("u symbol out of range");
    return u_counts_typical(*this, composition(u, nu()), static_cast<int>(u.size()), eps);
}

ConditionalProb conditional_typical_prob(std::span<const std::uint32_t> u, const UvModel& model,
                                         const TypConfig& config) {
    check_u(u, model, config);
    return conditional_from_counts(model, composition(u, model.nu()), config.n, config);
}

double conditional_typical_count(std::span<const std::uint32_t> u, const UvModel& model, const TypConfig& config) {
    check_u(u, model, config);
    ConditionalEnumerator en(model, composition(u, model.nu()), config.n, config.eps);
    check_budget(en.classes(), config.budget, "conditional typical count");
    double count = 0.0;
    en.run([&](bool typ, double c, double, double) {
        if (typ) count += c;
    });
    return count;
}

bool is_b_typical(std::span<const std::uint32_t> u, const UvModel& model, const TypConfig& config) {
    check_u(u, model, config);
    auto counts = composition(u, model.nu());
    if (!u_counts_typical(model, counts, config.n, config.eps)) return false;
    return conditional_from_counts(model, counts, config.n, config).probability >= 1.0 - config.eps - kTypicalitySlack;
}

BTypicalSet enumerate_b_typical(const UvModel& model, const TypConfig& config) {
    config.validate();
    check_budget(pow_count(model.nu(), config.n), config.budget, "B-typical set enumeration");
    struct ClassInfo {
        bool typical = false;
        double log2p = 0.0;
        ConditionalProb cp;
    };
    std::map<std::vector<std::uint32_t>, ClassInfo> cache;
    BTypicalSet bs;
    bs.config = config;
    bs.h_u = model.h_u();
    Sequence u(static_cast<std::size_t>(config.n), 0);
    std::vector<std::uint32_t> counts(model.nu(), 0);
    do {
        std::fill(counts.begin(), counts.end(), 0u);
        for (auto s : u) ++counts[s];
        auto it = cache.find(counts);
        if (it == cache.end()) {
            ClassInfo ci;
            ci.typical = u_counts_typical(model, counts, config.n, config.eps);
            ci.log2p = log2_prob_counts(model.pu(), counts);
            if (ci.typical) ci.cp = conditional_from_counts(model, counts, config.n, config);
            it = cache.emplace(counts, ci).first;
        }
        const ClassInfo& ci = it->second;
        if (!ci.typical) continue;
        double p = std::exp2(ci.log2p);
        ++bs.typical_count;
        bs.typical_mass += p;
        bs.joint_mass += p * ci.cp.probability;
        if (!ci.cp.exact) bs.exact = false;
        if (ci.cp.probability >= 1.0 - config.eps - kTypicalitySlack) {
            bs.members.push_back(u);
            bs.cond_prob.push_back(ci.cp.probability);
            bs.std_error.push_back(ci.cp.std_error);
            bs.b_mass += p;
        }
    } while (advance(u, model.nu()));
    return bs;
}

Lemma1Report lemma1_report(const UvModel& model, const TypConfig& config) {
    BTypicalSet bs = enumerate_b_typical(model, config);
    const int n = config.n;
    const double eps = config.eps;
    const double h = bs.h_u;
    Lemma1Report r;
    r.h_u = h;
    r.b_count = bs.members.size();
    r.a_count = bs.typical_count;
    r.joint_mass = bs.joint_mass;
    r.exact = bs.exact;
    r.p1_ok = true;
    for (const auto& u : bs.members) {
        double lp = log2_prob_counts(model.pu(), composition(u, model.nu()));
        if (lp < -n * (h + eps) - kTypicalitySlack || lp > -n * (h - eps) + kTypicalitySlack) r.p1_ok = false;
    }
    r.p2_mass = std::max(0.0, 1.0 - bs.b_mass);
    r.p2_within_eps = r.p2_mass <= eps;
    r.large_n = bs.joint_mass >= 1.0 - eps * eps;
    const double count = static_cast<double>(r.b_count);
    r.p3_upper_ok = count <= std::exp2(n * (h + eps)) * (1.0 + 1e-12);
    r.p3_lower_ok = count >= (1.0 - eps) * std::exp2(n * (h - eps)) * (1.0 - 1e-12);

    r.conditional_bound_ok = true;
    const double bound = std::exp2(n * (model.h_uv() - h + 2.0 * eps)) * (1.0 + 1e-12);
    for_each_composition(model.nu(), n, [&](const std::vector<std::uint32_t>& counts) {
        if (!u_counts_typical(model, counts, n, eps)) return;
        ConditionalEnumerator en(model, counts, n, eps);
        if (en.classes() > config.budget) {
            r.exact = false;
            return;
        }
        double c = 0.0;
        en.run([&](bool typ, double w, double, double) {
            if (typ) c += w;
        });
        if (c > bound) r.conditional_bound_ok = false;
    });
    return r;
}

JointSetReport joint_set_bounds(const UvModel& model, const TypConfig& config) {
    config.validate();
    const int n = config.n;
    const double eps = config.eps;
    JointSetReport r;
    r.h_uv = model.h_uv();
    r.h_v_given_u = r.h_uv - model.h_u();
    r.member_bounds_ok = true;
    r.conditional_ok = true;
    const double cond_bound = std::exp2(n * (r.h_v_given_u + 2.0 * eps)) * (1.0 + 1e-12);
    double classes = 0.0;
    for_each_composition(model.nu(), n, [&](const std::vector<std::uint32_t>& counts) {
        if (!u_counts_typical(model, counts, n, eps)) return;
        ConditionalEnumerator en(model, counts, n, eps);
        classes += en.classes();
        check_budget(classes, config.budget, "joint typical set enumeration");
        const double mult = multinomial(counts);
        const double pu = std::exp2(log2_prob_counts(model.pu(), counts));
        double c = 0.0;
        en.run([&](bool typ, double w, double prob, double full) {
            if (!typ) return;
            c += w;
            r.mass += mult * pu * prob;
            if (full < -n * (r.h_uv + eps) - kTypicalitySlack || full > -n * (r.h_uv - eps) + kTypicalitySlack)
                r.member_bounds_ok = false;
        });
        r.count += mult * c;
        r.max_conditional_count = std::max(r.max_conditional_count, c);
        if (c > cond_bound) r.conditional_ok = false;
    });
    r.joint_upper_ok = r.count <= std::exp2(n * (r.h_uv + eps)) * (1.0 + 1e-12);
    return r;
}

}  // namespace pas
