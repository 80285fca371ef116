#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pas/pmf.hpp"

namespace pas {

inline constexpr int kMaxAmplitudeBits = 6;

/// 2^(m+1)-ary ASK: points {-M+1, ..., M-1} in ascending order, factorized
/// as sign x amplitude with amplitudes {1, 3, ..., M-1}.
struct AskConstellation {
    int m = 0;
    std::vector<int> points;
    std::vector<int> amplitudes;

    std::size_t size() const noexcept { return points.size(); }
    std::size_t num_amplitudes() const noexcept { return amplitudes.size(); }
    int order() const noexcept { return static_cast<int>(points.size()); }

    std::size_t index_of(int x) const;
    std::size_t amplitude_index(int a) const;
    /// Point index of sign * amplitudes[amplitude_index].
    std::size_t point_index(int sign, std::size_t amplitude_index) const;
};

AskConstellation make_ask(int m);

struct SignAmplitude {
    int sign = 1;  // -1 or +1
    int amplitude = 1;

    bool operator==(const SignAmplitude&) const = default;
};

SignAmplitude split(const AskConstellation& c, int x);
int compose(const AskConstellation& c, SignAmplitude sa);

// Sign bit convention shared by labels and sign codebooks: -1 <-> 0, +1 <-> 1.
constexpr int sign_to_bit(int sign) noexcept { return sign > 0 ? 1 : 0; }
constexpr int bit_to_sign(int bit) noexcept { return bit ? 1 : -1; }

struct Label {
    int sign_bit = 0;
    /// m amplitude bits; B_1 is the most significant of the m.
    std::uint32_t amp_bits = 0;

    bool operator==(const Label&) const = default;
};

/// Bijective labeling of an ASK constellation. A point and its negation share
/// the same amplitude bits and differ only in the sign bit. Level 0 is the
/// sign bit S, level j in 1..m is amplitude bit B_j.
class LabelMap {
public:
    /// amplitude_bits[k] is the m-bit label of amplitudes[k].
    LabelMap(const AskConstellation& c, std::vector<std::uint32_t> amplitude_bits);

    int m() const noexcept { return m_; }
    std::size_t num_levels() const noexcept { return static_cast<std::size_t>(m_) + 1; }

    Label forward(int x) const;
    int backward(Label label) const;

    /// Bit of point index `point` at `level`.
    int level_bit(std::size_t point, std::size_t level) const;
    std::uint32_t amplitude_bits(std::size_t amplitude_index) const { return amp_bits_[amplitude_index]; }
    std::size_t amplitude_from_bits(std::uint32_t bits) const { return amp_from_bits_.at(bits); }

private:
    int m_ = 0;
    std::vector<int> points_;
    std::vector<int> amplitudes_;
    std::vector<std::uint32_t> amp_bits_;
    std::vector<std::size_t> amp_from_bits_;
};

/// Binary reflected Gray code over the full constellation with the sign bit
/// as the most significant label bit.
LabelMap brgc_label(const AskConstellation& c);

/// Symbol pmf p(x) = p(a)/2 for both signs of each amplitude.
Pmf mirror_amplitudes(const AskConstellation& c, const Pmf& amplitude_pmf);
/// Amplitude marginal p(a) = p(-a) + p(a).
Pmf amplitude_marginal(const AskConstellation& c, const Pmf& symbol_pmf);

}  // namespace pas
