#include "pas/signcode.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <thread>

#include "pas/errors.hpp"
#include "pas/rng.hpp"

namespace pas {

namespace {

constexpr std::uint64_t kCodebookStream = 0x5eed5c0debee5ULL;

std::uint64_t low_mask(int bits) {
    if (bits <= 0) return 0;
    if (bits >= 64) return ~std::uint64_t{0};
    return (std::uint64_t{1} << bits) - 1;
}

bool passes(double log2_sum, int n, double h, double eps) {
    if (!std::isfinite(log2_sum)) return false;
    return std::abs(-log2_sum / n - h) <= eps + kTypicalitySlack;
}

void check_dmc(const AskConstellation& c, const Dmc& dmc) {
    if (dmc.nin() != c.size())
        throw ShapeError("channel has " + std::to_string(dmc.nin()) + " inputs, constellation has " +
                         std::to_string(c.size()));
}

UvModel sign_output_model(const AskConstellation& c, const Pmf& pu, const Dmc& dmc, std::vector<std::size_t> u_dims,
                          const std::vector<std::size_t>& amplitude_of_u) {
    check_dmc(c, dmc);
    const std::size_t nout = dmc.nout();
    const std::size_t nu = pu.size();
    std::vector<double> w(nu * 2 * nout);
    for (std::size_t u = 0; u < nu; ++u)
        for (int s = 0; s < 2; ++s) {
            std::size_t x = c.point_index(bit_to_sign(s), amplitude_of_u[u]);
            for (std::size_t y = 0; y < nout; ++y) w[u * 2 * nout + s * nout + y] = 0.5 * dmc(x, y);
        }
    return UvModel(pu, StochasticMatrix(nu, 2 * nout, std::move(w)), CompositeShape{std::move(u_dims), {2, nout}});
}

ShapingLayer finish_layer(DecoderKind kind, const UvModel& model, const Pmf& source, int m, const TypConfig& config,
                          const std::vector<std::size_t>& amplitude_of_u) {
    BTypicalSet bs = enumerate_b_typical(model, config);
    if (bs.members.empty())
        throw ConfigError("B-typical set is empty at n=" + std::to_string(config.n) + ", eps=" +
                          std::to_string(config.eps) + "; eps is too small for this n");
    ShapingLayer layer;
    layer.kind = kind;
    layer.n = config.n;
    layer.eps = config.eps;
    layer.m = m;
    layer.source = source;
    layer.h_u = bs.h_u;
    layer.b_mass = bs.b_mass;
    layer.exact = bs.exact;
    layer.large_n = bs.b_mass >= 1.0 - config.eps && (1.0 - config.eps) >= std::exp2(-config.n * config.eps);
    layer.sequences = std::move(bs.members);
    layer.amplitudes.reserve(layer.sequences.size());
    for (const auto& u : layer.sequences) {
        Sequence a(u.size());
        for (std::size_t t = 0; t < u.size(); ++t) a[t] = static_cast<std::uint32_t>(amplitude_of_u[u[t]]);
        layer.amplitudes.push_back(std::move(a));
    }
    return layer;
}

std::vector<std::size_t> identity_map(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

std::vector<std::size_t> bits_to_amplitude(const LabelMap& labels) {
    std::vector<std::size_t> v(std::size_t{1} << labels.m());
    for (std::size_t b = 0; b < v.size(); ++b) v[b] = labels.amplitude_from_bits(static_cast<std::uint32_t>(b));
    return v;
}

std::vector<std::size_t> bit_dims(int m) { return m == 0 ? std::vector<std::size_t>{1} : std::vector<std::size_t>(m, 2); }

int parity(const BitString& a, const BitString& b) {
    return (std::popcount(a.w[0] & b.w[0]) + std::popcount(a.w[1] & b.w[1])) & 1;
}

}  // namespace

const char* to_string(DecoderKind k) noexcept { return k == DecoderKind::Smd ? "smd" : "bmd"; }
const char* to_string(CoderMode k) noexcept { return k == CoderMode::Iid ? "iid" : "linear"; }

const char* to_string(DecodeResult::Status s) noexcept {
    switch (s) {
        case DecodeResult::Status::Unique: return "unique";
        case DecodeResult::Status::None: return "none";
        case DecodeResult::Status::Multiple: return "multiple";
    }
    return "unknown";
}

UvModel smd_model(const AskConstellation& c, const Pmf& amplitude_pmf, const Dmc& dmc) {
    if (amplitude_pmf.size() != c.num_amplitudes()) throw ShapeError("amplitude pmf size does not match constellation");
    return sign_output_model(c, amplitude_pmf, dmc, {c.num_amplitudes()}, identity_map(c.num_amplitudes()));
}

UvModel bmd_model(const AskConstellation& c, const Pmf& bit_pmf, const LabelMap& labels, const Dmc& dmc) {
    if (labels.m() != c.m) throw ShapeError("label map does not match constellation");
    if (bit_pmf.size() != c.num_amplitudes()) throw ShapeError("bit pmf size does not match label count");
    return sign_output_model(c, bit_pmf, dmc, bit_dims(c.m), bits_to_amplitude(labels));
}

Pmf bit_pmf_from_amplitudes(const LabelMap& labels, const Pmf& amplitude_pmf) {
    std::vector<double> p(amplitude_pmf.size());
    if (p.size() != (std::size_t{1} << labels.m())) throw ShapeError("amplitude pmf size does not match label map");
    for (std::size_t k = 0; k < p.size(); ++k) p[labels.amplitude_bits(k)] = amplitude_pmf[k];
    return Pmf(std::move(p));
}

ShapingLayer build_shaping_layer_smd(const AskConstellation& c, const Pmf& amplitude_pmf, const Dmc& dmc,
                                     const TypConfig& config) {
    UvModel model = smd_model(c, amplitude_pmf, dmc);
    return finish_layer(DecoderKind::Smd, model, amplitude_pmf, c.m, config, identity_map(c.num_amplitudes()));
}

ShapingLayer build_shaping_layer_bmd(const AskConstellation& c, const Pmf& bit_pmf, const LabelMap& labels,
                                     const Dmc& dmc, const TypConfig& config) {
    UvModel model = bmd_model(c, bit_pmf, labels, dmc);
    return finish_layer(DecoderKind::Bmd, model, bit_pmf, c.m, config, bits_to_amplitude(labels));
}

BitString amplitude_bits(const LabelMap& labels, const Sequence& amplitude_indices) {
    const int m = labels.m();
    const int len = m * static_cast<int>(amplitude_indices.size());
    if (len > 128) throw SizeError("amplitude bit string longer than 128 bits");
    BitString b;
    b.length = len;
    for (std::size_t t = 0; t < amplitude_indices.size(); ++t) {
        std::uint32_t bits = labels.amplitude_bits(amplitude_indices[t]);
        for (int j = 0; j < m; ++j) b.set(static_cast<int>(t) * m + j, static_cast<int>((bits >> (m - 1 - j)) & 1u));
    }
    return b;
}

std::uint64_t SignCodebook::information(std::uint64_t m_s) const {
    std::uint64_t w = 0;
    for (int t = 0; t < n1_; ++t) w |= ((m_s >> (n1_ - 1 - t)) & 1u) << t;
    return w;
}

std::uint64_t SignCodebook::redundant(std::size_t m_a, std::uint64_t m_s) const {
    if (mode_ == CoderMode::Iid) return table_[m_a * ms_ + m_s];
    return amp_part_[m_a] ^ info_part_[m_s] ^ offset_;
}

std::uint64_t SignCodebook::apply(const BitString& input) const {
    if (mode_ != CoderMode::Linear) throw ConfigError("apply is defined for linear codebooks only");
    std::uint64_t out = 0;
    for (int r = 0; r < n2_; ++r) out |= static_cast<std::uint64_t>(parity(rows_[r], input)) << r;
    return out;
}

BitString SignCodebook::linear_input(std::size_t m_a, std::uint64_t m_s) const {
    if (mode_ != CoderMode::Linear) throw ConfigError("linear_input is defined for linear codebooks only");
    BitString b = amp_keys_[m_a];
    std::uint64_t info = information(m_s);
    for (int t = 0; t < n1_; ++t) b.set(b.length + t, static_cast<int>((info >> t) & 1u));
    b.length += n1_;
    return b;
}

SignCodebook draw_sign_codebook(std::size_t ma, int n1, int n2, CoderMode mode, std::uint64_t seed,
                                const std::vector<BitString>& amplitude_keys) {
    if (ma == 0) throw SizeError("codebook needs at least one amplitude sequence");
    if (n1 < 0 || n2 < 0 || n1 + n2 < 1 || n1 + n2 > kMaxBlockLength)
        throw SizeError("sign block length must lie in [1, " + std::to_string(kMaxBlockLength) + "]");
    if (n1 > 40) throw SizeError("too many information signs");
    const std::uint64_t ms = std::uint64_t{1} << n1;
    const double candidates = static_cast<double>(ma) * static_cast<double>(ms);
    if (candidates > kCandidateBudget)
        throw BudgetError("codebook needs " + std::to_string(candidates) + " candidates", candidates, kCandidateBudget);

    SignCodebook book;
    book.mode_ = mode;
    book.ma_ = ma;
    book.ms_ = ms;
    book.n1_ = n1;
    book.n2_ = n2;
    book.seed_ = seed;
    Rng rng(seed);
    const std::uint64_t mask = low_mask(n2);
    if (mode == CoderMode::Iid) {
        book.table_.resize(ma * ms);
        for (auto& w : book.table_) w = rng.next() & mask;
        return book;
    }

    if (amplitude_keys.size() != ma) throw ConfigError("linear codebook needs one amplitude bit string per sequence");
    const int amp_len = amplitude_keys.front().length;
    for (const auto& k : amplitude_keys)
        if (k.length != amp_len) throw ConfigError("amplitude bit strings differ in length");
    const int L = amp_len + n1;
    if (L > 128) throw SizeError("linear code input length " + std::to_string(L) + " exceeds 128 bits");
    book.amp_keys_ = amplitude_keys;
    book.rows_.resize(static_cast<std::size_t>(n2));
    for (auto& r : book.rows_) {
        r.length = L;
        r.w[0] = rng.next() & low_mask(std::min(L, 64));
        r.w[1] = rng.next() & low_mask(L - 64);
    }
    book.offset_ = rng.next() & mask;
    book.amp_part_.resize(ma);
    for (std::size_t a = 0; a < ma; ++a) book.amp_part_[a] = book.apply(amplitude_keys[a]);
    book.info_part_.resize(ms);
    for (std::uint64_t s = 0; s < ms; ++s) {
        BitString b;
        b.length = L;
        std::uint64_t info = book.information(s);
        for (int t = 0; t < n1; ++t) b.set(amp_len + t, static_cast<int>((info >> t) & 1u));
        book.info_part_[s] = book.apply(b);
    }
    return book;
}

TypicalityDecoder::TypicalityDecoder(DecoderKind kind, UvModel model, int m)
    : kind_(kind), model_(std::move(model)), m_(m) {
    const unsigned ucomp = kind == DecoderKind::Smd ? 1u : static_cast<unsigned>(m == 0 ? 1 : m);
    const unsigned s = 1u << ucomp;
    const unsigned y = 1u << (ucomp + 1);
    s_bit_ = s;
    if (kind == DecoderKind::Smd) {
        masks_ = model_.joint().all_masks();
    } else {
        masks_ = {s | y};
        for (int j = 0; j < m; ++j) masks_.push_back((1u << j) | y);
        masks_.push_back(s);
        for (int j = 0; j < m; ++j) masks_.push_back(1u << j);
        masks_.push_back(y);
    }
}

Sequence TypicalityDecoder::joint_sequence(const Sequence& u, std::uint64_t signs, const Sequence& y) const {
    if (u.size() != y.size()) throw ShapeError("candidate and output lengths differ");
    const std::uint32_t nout = static_cast<std::uint32_t>(model_.nv() / 2);
    Sequence seq(u.size());
    for (std::size_t t = 0; t < u.size(); ++t) {
        std::uint32_t s = static_cast<std::uint32_t>((signs >> t) & 1u);
        seq[t] = model_.joint_index(u[t], s * nout + y[t]);
    }
    return seq;
}

bool TypicalityDecoder::accepts(const Sequence& u, std::uint64_t signs, const Sequence& y, double eps) const {
    return model_.joint().typical(joint_sequence(u, signs, y), eps, masks_);
}

DecodeResult TypicalityDecoder::decode(const Sequence& y, const ShapingLayer& layer, const SignCodebook& book,
                                       double eps) const {
    const int n = static_cast<int>(y.size());
    if (n != layer.n || n != book.n()) throw ShapeError("output length does not match the code");
    if (book.ma() != layer.size()) throw ShapeError("codebook does not match the shaping layer");
    const std::size_t nu = model_.nu();
    const std::uint32_t nout = static_cast<std::uint32_t>(model_.nv() / 2);
    const JointTypicality& jt = model_.joint();

    std::vector<unsigned> amp_masks, sign_masks;
    for (unsigned mk : masks_) (mk & s_bit_ ? sign_masks : amp_masks).push_back(mk);
    auto build = [&](const std::vector<unsigned>& ms) {
        std::vector<std::vector<double>> tabs;
        for (unsigned mk : ms) {
            std::vector<double> tab(static_cast<std::size_t>(n) * nu * 2);
            for (int t = 0; t < n; ++t)
                for (std::size_t u = 0; u < nu; ++u)
                    for (std::uint32_t s = 0; s < 2; ++s)
                        tab[(static_cast<std::size_t>(t) * nu + u) * 2 + s] =
                            jt.log_marginal(mk, model_.joint_index(static_cast<std::uint32_t>(u), s * nout + y[t]));
            tabs.push_back(std::move(tab));
        }
        return tabs;
    };
    const auto amp_tabs = build(amp_masks);
    const auto sign_tabs = build(sign_masks);

    DecodeResult r;
    for (std::size_t a = 0; a < layer.size(); ++a) {
        const Sequence& u = layer.sequences[a];
        bool ok = true;
        for (std::size_t i = 0; i < amp_masks.size() && ok; ++i) {
            double s = 0.0;
            for (int t = 0; t < n; ++t) s += amp_tabs[i][(static_cast<std::size_t>(t) * nu + u[t]) * 2];
            ok = passes(s, n, jt.entropy(amp_masks[i]), eps);
        }
        if (!ok) continue;
        for (std::uint64_t ms = 0; ms < book.ms(); ++ms) {
            const std::uint64_t w = book.signs(a, ms);
            bool acc = true;
            for (std::size_t i = 0; i < sign_masks.size() && acc; ++i) {
                double s = 0.0;
                for (int t = 0; t < n; ++t)
                    s += sign_tabs[i][(static_cast<std::size_t>(t) * nu + u[t]) * 2 + ((w >> t) & 1u)];
                acc = passes(s, n, jt.entropy(sign_masks[i]), eps);
            }
            if (!acc) continue;
            if (r.accepted == 0) {
                r.m_a = a;
                r.m_s = ms;
            }
            ++r.accepted;
            if (kind_ == DecoderKind::Bmd && !jt.typical(joint_sequence(u, w, y), eps)) ++r.pairwise_only;
        }
    }
    r.status = r.accepted == 0 ? DecodeResult::Status::None
             : r.accepted == 1 ? DecodeResult::Status::Unique
                               : DecodeResult::Status::Multiple;
    return r;
}

void ExperimentConfig::validate() const {
    if (m < 0 || m > kMaxAmplitudeBits) throw SizeError("m out of range");
    if (n < 1 || n > kMaxBlockLength) throw SizeError("n must lie in [1, " + std::to_string(kMaxBlockLength) + "]");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be positive");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw RangeError("gamma must lie in [0, 1)");
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (amplitude_pmf.size() != 0 && amplitude_pmf.size() != (std::size_t{1} << m))
        throw ShapeError("amplitude pmf size does not match m");
    if (dmc.nin() != (std::size_t{2} << m)) throw ShapeError("channel inputs do not match the constellation");
}

void TrialStats::merge(const TrialStats& o) {
    trials += o.trials;
    errors_total += o.errors_total;
    errors_kind1 += o.errors_kind1;
    errors_kind2 += o.errors_kind2;
    both += o.both;
    none_failures += o.none_failures;
    multiple_failures += o.multiple_failures;
    wrong_unique += o.wrong_unique;
    accepted_candidates += o.accepted_candidates;
    pairwise_only += o.pairwise_only;
}

namespace {

ExperimentConfig normalized(ExperimentConfig cfg) {
    cfg.validate();
    if (cfg.amplitude_pmf.size() == 0) cfg.amplitude_pmf = Pmf::uniform(std::size_t{1} << cfg.m);
    return cfg;
}

ShapingLayer make_layer(const ExperimentConfig& cfg, const AskConstellation& c, const LabelMap& labels) {
    TypConfig tc;
    tc.n = cfg.n;
    tc.eps = cfg.eps;
    tc.budget = cfg.budget;
    tc.mc_samples = cfg.mc_samples;
    tc.seed = cfg.seed;
    if (cfg.decoder == DecoderKind::Smd) return build_shaping_layer_smd(c, cfg.amplitude_pmf, cfg.dmc, tc);
    return build_shaping_layer_bmd(c, bit_pmf_from_amplitudes(labels, cfg.amplitude_pmf), labels, cfg.dmc, tc);
}

TypicalityDecoder make_decoder(const ExperimentConfig& cfg, const AskConstellation& c, const LabelMap& labels) {
    if (cfg.decoder == DecoderKind::Smd)
        return TypicalityDecoder(DecoderKind::Smd, smd_model(c, cfg.amplitude_pmf, cfg.dmc), c.m);
    return TypicalityDecoder(DecoderKind::Bmd,
                             bmd_model(c, bit_pmf_from_amplitudes(labels, cfg.amplitude_pmf), labels, cfg.dmc), c.m);
}

}  // namespace

SignCodeExperiment::SignCodeExperiment(ExperimentConfig config)
    : cfg_(normalized(std::move(config))),
      c_(make_ask(cfg_.m)),
      labels_(brgc_label(c_)),
      layer_(make_layer(cfg_, c_, labels_)),
      decoder_(make_decoder(cfg_, c_, labels_)),
      sampler_(cfg_.dmc) {
    n1_ = static_cast<int>(std::lround(cfg_.gamma * cfg_.n));
    if (n1_ >= cfg_.n) n1_ = cfg_.n - 1;
    const double candidates = static_cast<double>(layer_.size()) * std::exp2(n1_);
    if (candidates > kCandidateBudget)
        throw BudgetError("decoding needs " + std::to_string(candidates) + " candidates per trial", candidates,
                          kCandidateBudget);
    if (cfg_.mode == CoderMode::Linear) {
        amp_keys_.reserve(layer_.size());
        for (const auto& a : layer_.amplitudes) amp_keys_.push_back(amplitude_bits(labels_, a));
    }
    if (!cfg_.redraw_codebook)
        fixed_book_ = draw_sign_codebook(layer_.size(), n1_, cfg_.n - n1_, cfg_.mode,
                                         stream_seed(cfg_.seed ^ kCodebookStream, ~std::uint64_t{0}), amp_keys_);
}

SignCodebook SignCodeExperiment::codebook_for_trial(std::uint64_t trial) const {
    if (!cfg_.redraw_codebook) return fixed_book_;
    return draw_sign_codebook(layer_.size(), n1_, cfg_.n - n1_, cfg_.mode, stream_seed(cfg_.seed ^ kCodebookStream, trial),
                              amp_keys_);
}

TrialStats SignCodeExperiment::base_stats() const {
    TrialStats s;
    s.n = cfg_.n;
    s.n1 = n1_;
    s.n2 = cfg_.n - n1_;
    s.gamma_realized = static_cast<double>(n1_) / cfg_.n;
    s.eps = cfg_.eps;
    s.ma = layer_.size();
    s.ms = std::uint64_t{1} << n1_;
    s.rate_achieved = (std::log2(static_cast<double>(layer_.size())) + n1_) / cfg_.n;
    s.h_a = layer_.h_u;
    s.large_n = layer_.large_n;
    s.layer_exact = layer_.exact;
    s.seed = cfg_.seed;
    return s;
}

TrialStats SignCodeExperiment::run_range(std::uint64_t first, std::uint64_t last) const {
    TrialStats st = base_stats();
    const std::uint64_t ms_count = std::uint64_t{1} << n1_;
    Sequence y(static_cast<std::size_t>(cfg_.n));
    for (std::uint64_t trial = first; trial < last; ++trial) {
        SignCodebook local;
        const SignCodebook* book = &fixed_book_;
        if (cfg_.redraw_codebook) {
            local = codebook_for_trial(trial);
            book = &local;
        }
        Rng rng(stream_seed(cfg_.seed, trial));
        const std::size_t m_a = static_cast<std::size_t>(rng.below(layer_.size()));
        const std::uint64_t m_s = rng.below(ms_count);
        const std::uint64_t w = book->signs(m_a, m_s);
        const Sequence& amps = layer_.amplitudes[m_a];
        for (int t = 0; t < cfg_.n; ++t) {
            int sign = bit_to_sign(static_cast<int>((w >> t) & 1u));
            std::size_t x = c_.point_index(sign, amps[static_cast<std::size_t>(t)]);
            y[static_cast<std::size_t>(t)] = sampler_.sample(x, rng.uniform());
        }
        DecodeResult r = decoder_.decode(y, layer_, *book, cfg_.eps);
        const bool sent_ok = decoder_.accepts(layer_.sequences[m_a], w, y, cfg_.eps);
        const std::uint64_t others = r.accepted - (sent_ok ? 1u : 0u);
        const bool kind1 = !sent_ok;
        const bool kind2 = others > 0;
        const bool correct = r.status == DecodeResult::Status::Unique && r.m_a == m_a && r.m_s == m_s;
        ++st.trials;
        st.accepted_candidates += r.accepted;
        st.pairwise_only += r.pairwise_only;
        if (kind1) ++st.errors_kind1;
        if (kind2) ++st.errors_kind2;
        if (kind1 && kind2) ++st.both;
        if (!correct) {
            ++st.errors_total;
            if (r.status == DecodeResult::Status::None) ++st.none_failures;
            else if (r.status == DecodeResult::Status::Multiple) ++st.multiple_failures;
            else ++st.wrong_unique;
        }
    }
    return st;
}

TrialStats SignCodeExperiment::run(int threads) const {
    const std::uint64_t total = cfg_.trials;
    const std::uint64_t workers = static_cast<std::uint64_t>(std::clamp(threads, 1, 256));
    if (workers == 1 || total < 2) return run_range(0, total);
    std::vector<TrialStats> parts(workers);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::uint64_t k = 0; k < workers; ++k) {
        std::uint64_t first = total * k / workers;
        std::uint64_t last = total * (k + 1) / workers;
        pool.emplace_back([&, k, first, last] {
            try {
                parts[k] = run_range(first, last);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    TrialStats st = base_stats();
    for (const auto& p : parts) st.merge(p);
    return st;
}

TrialStats run_experiment(const ExperimentConfig& config, int threads) {
    return SignCodeExperiment(config).run(threads);
}

}  // namespace pas
