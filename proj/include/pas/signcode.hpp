#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "pas/alphabets.hpp"
#include "pas/channel.hpp"
#include "pas/pmf.hpp"
#include "pas/typicality.hpp"

namespace pas {

enum class DecoderKind { Smd, Bmd };
enum class CoderMode { Iid, Linear };

const char* to_string(DecoderKind k) noexcept;
const char* to_string(CoderMode k) noexcept;

inline constexpr int kMaxBlockLength = 64;
inline constexpr double kCandidateBudget = 1e6;

/// U = amplitude index, V = (sign bit, y) with a uniform independent sign.
UvModel smd_model(const AskConstellation& c, const Pmf& amplitude_pmf, const Dmc& dmc);
/// U = (B_1, ..., B_m) as flattened amplitude labels, V = (sign bit, y).
UvModel bmd_model(const AskConstellation& c, const Pmf& bit_pmf, const LabelMap& labels, const Dmc& dmc);
/// p(b) induced by an amplitude pmf through the labeling.
Pmf bit_pmf_from_amplitudes(const LabelMap& labels, const Pmf& amplitude_pmf);

struct ShapingLayer {
    DecoderKind kind = DecoderKind::Smd;
    int n = 0;
    double eps = 0.0;
    int m = 0;
    Pmf source;                          // p(a) or p(b)
    std::vector<Sequence> sequences;     // shaping-layer sequences over U
    std::vector<Sequence> amplitudes;    // amplitude index sequences (f applied for bit tuples)
    double h_u = 0.0;
    double b_mass = 0.0;                 // Pr{U in B}
    bool exact = true;
    /// Pr{U in B} >= 1 - eps and (1 - eps) >= 2^{-n eps}; together these
    /// imply |B| >= 2^{n(H(U) - 2 eps)}.
    bool large_n = false;

    std::size_t size() const noexcept { return sequences.size(); }
};

ShapingLayer build_shaping_layer_smd(const AskConstellation& c, const Pmf& amplitude_pmf, const Dmc& dmc,
                                     const TypConfig& config);
ShapingLayer build_shaping_layer_bmd(const AskConstellation& c, const Pmf& bit_pmf, const LabelMap& labels,
                                     const Dmc& dmc, const TypConfig& config);

/// Bit string of length <= 128, bit i stored in word i / 64.
struct BitString {
    std::array<std::uint64_t, 2> w{0, 0};
    int length = 0;

    int get(int i) const { return static_cast<int>((w[i >> 6] >> (i & 63)) & 1u); }
    void set(int i, int b) {
        std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (b) w[i >> 6] |= mask;
        else w[i >> 6] &= ~mask;
    }
    BitString operator^(const BitString& o) const { return {{w[0] ^ o.w[0], w[1] ^ o.w[1]}, length}; }
    bool operator==(const BitString&) const = default;
};

/// Concatenated m-bit labels of an amplitude index sequence.
BitString amplitude_bits(const LabelMap& labels, const Sequence& amplitude_indices);

/// Sign codebook s(m_a, m_s) = (s'(m_s), s''(m_a, m_s)). Sign bits use the
/// convention 0 <-> -1, 1 <-> +1 and are packed with position t at bit t.
class SignCodebook {
public:
    SignCodebook() = default;

    CoderMode mode() const noexcept { return mode_; }
    std::size_t ma() const noexcept { return ma_; }
    std::uint64_t ms() const noexcept { return ms_; }
    int n1() const noexcept { return n1_; }
    int n2() const noexcept { return n2_; }
    int n() const noexcept { return n1_ + n2_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// s'(m_s): binary expansion of m_s, most significant bit first.
    std::uint64_t information(std::uint64_t m_s) const;
    /// s''(m_a, m_s) packed at bits 0..n2-1.
    std::uint64_t redundant(std::size_t m_a, std::uint64_t m_s) const;
    /// Full sign word packed at bits 0..n-1.
    std::uint64_t signs(std::size_t m_a, std::uint64_t m_s) const {
        return information(m_s) | (redundant(m_a, m_s) << n1_);
    }
    /// Linear mode only: the matrix applied to an input of length L, no offset.
    std::uint64_t apply(const BitString& input) const;
    /// Linear mode only: the matrix input for (m_a, m_s).
    BitString linear_input(std::size_t m_a, std::uint64_t m_s) const;

private:
    friend SignCodebook draw_sign_codebook(std::size_t, int, int, CoderMode, std::uint64_t,
                                           const std::vector<BitString>&);
    CoderMode mode_ = CoderMode::Iid;
    std::size_t ma_ = 0;
    std::uint64_t ms_ = 1;
    int n1_ = 0;
    int n2_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<std::uint64_t> table_;       // iid: ma * ms words
    std::vector<BitString> rows_;            // linear: n2 rows of length L
    std::uint64_t offset_ = 0;               // linear: affine offset
    std::vector<BitString> amp_keys_;        // linear: amplitude bits per m_a
    std::vector<std::uint64_t> amp_part_;    // linear: G * (amp, 0) per m_a
    std::vector<std::uint64_t> info_part_;   // linear: G * (0, s') per m_s
};

/// Linear mode requires the amplitude bit strings of every layer sequence.
SignCodebook draw_sign_codebook(std::size_t ma, int n1, int n2, CoderMode mode, std::uint64_t seed,
                                const std::vector<BitString>& amplitude_keys = {});

struct DecodeResult {
    enum class Status { Unique, None, Multiple };
    Status status = Status::None;
    std::size_t m_a = 0;
    std::uint64_t m_s = 0;
    std::uint64_t accepted = 0;
    /// BMD only: accepted candidates whose full tuple is not jointly typical.
    std::uint64_t pairwise_only = 0;
};

const char* to_string(DecodeResult::Status s) noexcept;

/// Exhaustive joint-typicality decoder over all (m_a, m_s) pairs.
class TypicalityDecoder {
public:
    TypicalityDecoder(DecoderKind kind, UvModel model, int m);

    DecoderKind kind() const noexcept { return kind_; }
    const UvModel& model() const noexcept { return model_; }
    const std::vector<unsigned>& masks() const noexcept { return masks_; }

    /// Joint symbol sequence of a candidate against y.
    Sequence joint_sequence(const Sequence& u, std::uint64_t signs, const Sequence& y) const;
    bool accepts(const Sequence& u, std::uint64_t signs, const Sequence& y, double eps) const;

    DecodeResult decode(const Sequence& y, const ShapingLayer& layer, const SignCodebook& book, double eps) const;

private:
    DecoderKind kind_;
    UvModel model_;
    int m_;
    unsigned s_bit_ = 0;
    std::vector<unsigned> masks_;
};

struct ExperimentConfig {
    int m = 1;
    Pmf amplitude_pmf;     // empty means uniform
    Dmc dmc;
    double eps = 0.1;
    int n = 6;
    double gamma = 0.0;
    DecoderKind decoder = DecoderKind::Smd;
    CoderMode mode = CoderMode::Iid;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    bool redraw_codebook = true;
    double budget = 1e7;
    std::uint64_t mc_samples = 100000;

    void validate() const;
};

struct TrialStats {
    std::uint64_t trials = 0;
    std::uint64_t errors_total = 0;
    std::uint64_t errors_kind1 = 0;
    std::uint64_t errors_kind2 = 0;
    std::uint64_t both = 0;
    std::uint64_t none_failures = 0;
    std::uint64_t multiple_failures = 0;
    std::uint64_t wrong_unique = 0;
    std::uint64_t accepted_candidates = 0;
    std::uint64_t pairwise_only = 0;
    int n = 0;
    int n1 = 0;
    int n2 = 0;
    double gamma_realized = 0.0;
    double eps = 0.0;
    std::size_t ma = 0;
    std::uint64_t ms = 0;
    double rate_achieved = 0.0;
    double h_a = 0.0;
    bool large_n = false;
    bool layer_exact = true;
    std::uint64_t seed = 0;

    double error_rate() const { return trials ? static_cast<double>(errors_total) / trials : 0.0; }
    void merge(const TrialStats& o);
};

/// A sign-coding instance: shaping layer, decoder and seed. Trials draw the
/// message pair, the channel noise and (by default) a fresh codebook from a
/// stream derived from (seed, trial index).
class SignCodeExperiment {
public:
    explicit SignCodeExperiment(ExperimentConfig config);

    const ExperimentConfig& config() const noexcept { return cfg_; }
    const AskConstellation& constellation() const noexcept { return c_; }
    const ShapingLayer& layer() const noexcept { return layer_; }
    const TypicalityDecoder& decoder() const noexcept { return decoder_; }
    int n1() const noexcept { return n1_; }
    int n2() const noexcept { return cfg_.n - n1_; }
    SignCodebook codebook_for_trial(std::uint64_t trial) const;

    TrialStats run(int threads = 1) const;
    TrialStats run_range(std::uint64_t first, std::uint64_t last) const;

private:
    TrialStats base_stats() const;

    ExperimentConfig cfg_;
    AskConstellation c_;
    LabelMap labels_;
    ShapingLayer layer_;
    TypicalityDecoder decoder_;
    DmcSampler sampler_;
    std::vector<BitString> amp_keys_;
    SignCodebook fixed_book_;
    int n1_ = 0;
};

TrialStats run_experiment(const ExperimentConfig& config, int threads = 1);

}  // namespace pas
