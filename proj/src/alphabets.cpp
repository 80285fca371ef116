#include "pas/alphabets.hpp"

#include <algorithm>
#include <string>

#include "pas/errors.hpp"

namespace pas {

std::size_t AskConstellation::index_of(int x) const {
    auto it = std::lower_bound(points.begin(), points.end(), x);
    if (it == points.end() || *it != x) throw DomainError("point " + std::to_string(x) + " not in constellation");
    return static_cast<std::size_t>(it - points.begin());
}

std::size_t AskConstellation::amplitude_index(int a) const {
    auto it = std::lower_bound(amplitudes.begin(), amplitudes.end(), a);
    if (it == amplitudes.end() || *it != a) throw DomainError("amplitude " + std::to_string(a) + " not in constellation");
    return static_cast<std::size_t>(it - amplitudes.begin());
}

std::size_t AskConstellation::point_index(int sign, std::size_t amplitude_index) const {
    std::size_t half = amplitudes.size();
    if (amplitude_index >= half) throw DomainError("amplitude index out of range");
    if (sign != 1 && sign != -1) throw DomainError("sign must be -1 or +1");
    return sign > 0 ? half + amplitude_index : half - 1 - amplitude_index;
}

AskConstellation make_ask(int m) {
    if (m < 0 || m > kMaxAmplitudeBits)
        throw SizeError("amplitude bits m=" + std::to_string(m) + " outside [0, " + std::to_string(kMaxAmplitudeBits) + "]");
    AskConstellation c;
    c.m = m;
    int order = 1 << (m + 1);
    for (int x = -order + 1; x <= order - 1; x += 2) c.points.push_back(x);
    for (int a = 1; a <= order - 1; a += 2) c.amplitudes.push_back(a);
    return c;
}

SignAmplitude split(const AskConstellation& c, int x) {
    c.index_of(x);
    return {x < 0 ? -1 : 1, x < 0 ? -x : x};
}

int compose(const AskConstellation& c, SignAmplitude sa) {
    if (sa.sign != 1 && sa.sign != -1) throw DomainError("sign must be -1 or +1");
    c.amplitude_index(sa.amplitude);
    return sa.sign * sa.amplitude;
}

LabelMap::LabelMap(const AskConstellation& c, std::vector<std::uint32_t> amplitude_bits)
    : m_(c.m), points_(c.points), amplitudes_(c.amplitudes), amp_bits_(std::move(amplitude_bits)) {
    std::size_t n = amplitudes_.size();
    if (amp_bits_.size() != n) throw ShapeError("label table size does not match amplitude count");
    amp_from_bits_.assign(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        std::uint32_t b = amp_bits_[k];
        if (b >= n || amp_from_bits_[b] != n) throw DomainError("label table is not a bijection");
        amp_from_bits_[b] = k;
    }
}

Label LabelMap::forward(int x) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), x);
    if (it == points_.end() || *it != x) throw DomainError("point " + std::to_string(x) + " not in constellation");
    int a = x < 0 ? -x : x;
    std::size_t k = static_cast<std::size_t>((a - 1) / 2);
    return {sign_to_bit(x < 0 ? -1 : 1), amp_bits_[k]};
}

int LabelMap::backward(Label label) const {
    if (label.sign_bit != 0 && label.sign_bit != 1) throw DomainError("sign bit must be 0 or 1");
    if (label.amp_bits >= amp_from_bits_.size()) throw DomainError("amplitude label out of range");
    return bit_to_sign(label.sign_bit) * amplitudes_[amp_from_bits_[label.amp_bits]];
}

int LabelMap::level_bit(std::size_t point, std::size_t level) const {
    if (point >= points_.size()) throw DomainError("point index out of range");
    if (level > static_cast<std::size_t>(m_)) throw DomainError("label level out of range");
    int x = points_[point];
    if (level == 0) return x > 0 ? 1 : 0;
    std::size_t k = static_cast<std::size_t>(((x < 0 ? -x : x) - 1) / 2);
    return static_cast<int>((amp_bits_[k] >> (m_ - static_cast<int>(level))) & 1u);
}

LabelMap brgc_label(const AskConstellation& c) {
    std::uint32_t half = static_cast<std::uint32_t>(c.amplitudes.size());
    std::uint32_t mask = half - 1;
    std::vector<std::uint32_t> bits(half);
    for (std::uint32_t k = 0; k < half; ++k) {
        std::uint32_t i = half + k;
        bits[k] = (i ^ (i >> 1)) & mask;
    }
    return LabelMap(c, std::move(bits));
}

Pmf mirror_amplitudes(const AskConstellation& c, const Pmf& amplitude_pmf) {
    if (amplitude_pmf.size() != c.num_amplitudes()) throw ShapeError("amplitude pmf size does not match constellation");
    std::vector<double> p(c.size());
    for (std::size_t k = 0; k < c.num_amplitudes(); ++k) {
        p[c.point_index(1, k)] = amplitude_pmf[k] / 2.0;
        p[c.point_index(-1, k)] = amplitude_pmf[k] / 2.0;
    }
    return Pmf(std::move(p));
}

Pmf amplitude_marginal(const AskConstellation& c, const Pmf& symbol_pmf) {
    if (symbol_pmf.size() != c.size()) throw ShapeError("symbol pmf size does not match constellation");
    std::vector<double> p(c.num_amplitudes());
    for (std::size_t k = 0; k < c.num_amplitudes(); ++k)
        p[k] = symbol_pmf[c.point_index(1, k)] + symbol_pmf[c.point_index(-1, k)];
    return Pmf(std::move(p));
}

}  // namespace pas
