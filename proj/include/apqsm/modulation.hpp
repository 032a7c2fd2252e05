// SPDX-License-Identifier: Apache-2.0
//
// apqsm — link-level simulation and power-allocation optimization for
// superposed-PAM spatial modulation in indoor visible-light MIMO links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "codebook.hpp"
#include "geometry.hpp"

namespace apqsm {

/// Optical power fractions [p1, p2, p3] assigned to the amplitude, quadrant
/// and phase parts. They must sum to the LED mean optical power and be
/// non-increasing.
struct PowerVector {
    std::array<double, 3> p{0.0, 0.0, 0.0};

    double sum() const { return p[0] + p[1] + p[2]; }

    void validate(double p_opt) const
    {
        if (!(p[0] >= 0.0 && p[1] >= 0.0 && p[2] >= 0.0))
            throw std::invalid_argument("power fractions must be non-negative");
        if (!(p[0] >= p[1] && p[1] >= p[2]))
            throw std::invalid_argument("power fractions must satisfy p1 >= p2 >= p3");
        if (std::abs(sum() - p_opt) > 1e-12 * p_opt)
            throw std::invalid_argument("power fractions must sum to the mean optical power");
    }
};

/// Unipolar PAM levels {2k/(M+1), k=1..M}. Their mean is exactly 1 for every
/// order, which keeps the mean optical power of each part fixed.
inline std::vector<double> pam_levels(std::size_t order)
{
    if (order < 1) throw std::invalid_argument("PAM order must be at least 1");
    std::vector<double> levels(order);
    for (std::size_t k = 1; k <= order; ++k)
        levels[k - 1] = 2.0 * static_cast<double>(k) / (static_cast<double>(order) + 1.0);
    return levels;
}

inline std::size_t log2_exact(std::size_t n)
{
    if (!is_power_of_two(n)) throw std::invalid_argument("value must be a power of 2");
    return static_cast<std::size_t>(std::bit_width(n) - 1);
}

/// Superposed three-part PAM constellation sent from one of n_t LEDs.
/// Immutable after construction.
struct ApqScheme {
    std::size_t n_t = 4;
    std::array<std::size_t, 3> split{2, 4, 2}; // (M1, M2, M3): amplitude, quadrant, phase
    PowerVector power;
    double p_opt = 1.0;
    std::array<std::vector<double>, 3> part_levels;

    std::size_t symbol_count() const { return split[0] * split[1] * split[2]; }
    std::size_t bits_per_symbol() const { return log2_exact(symbol_count()); }
    std::size_t spatial_bits() const { return log2_exact(n_t); }
    double spectral_efficiency() const { return static_cast<double>(spatial_bits() + bits_per_symbol()); }
};

inline ApqScheme make_apq_scheme(std::size_t n_t, std::array<std::size_t, 3> split, PowerVector power,
                                 double p_opt)
{
    if (!is_power_of_two(n_t)) throw std::invalid_argument("LED count must be a power of 2");
    for (std::size_t m : split)
        if (!is_power_of_two(m)) throw std::invalid_argument("each part size must be a power of 2");
    if (!(p_opt > 0.0)) throw std::invalid_argument("mean optical power must be positive");
    power.validate(p_opt);
    ApqScheme s;
    s.n_t = n_t;
    s.split = split;
    s.power = power;
    s.p_opt = p_opt;
    for (int i = 0; i < 3; ++i) s.part_levels[i] = pam_levels(split[i]);
    return s;
}

/// Per-part level indices of a symbol. The symbol index decomposes mixed-radix
/// as m = a*(M2*M3) + q*M3 + t.
struct SymbolParts {
    std::size_t amplitude = 0, quadrant = 0, phase = 0;
};

inline SymbolParts split_symbol_index(const ApqScheme& scheme, std::size_t m)
{
    if (m >= scheme.symbol_count()) throw std::out_of_range("symbol index out of range");
    const std::size_t m2 = scheme.split[1], m3 = scheme.split[2];
    return {m / (m2 * m3), (m / m3) % m2, m % m3};
}

/// Transmitted intensity of symbol m: the power-weighted sum of its three
/// part levels.
inline double apq_amplitude(const ApqScheme& scheme, std::size_t m)
{
    const SymbolParts parts = split_symbol_index(scheme, m);
    return scheme.power.p[0] * scheme.part_levels[0][parts.amplitude] +
           scheme.power.p[1] * scheme.part_levels[1][parts.quadrant] +
           scheme.power.p[2] * scheme.part_levels[2][parts.phase];
}

/// Sparse transmit vector: one LED active with intensity `amplitude`.
struct TxVector {
    std::size_t led_index = 0;
    std::size_t symbol_index = 0;
    double amplitude = 0.0;

    std::vector<double> dense(std::size_t n_t) const
    {
        std::vector<double> v(n_t, 0.0);
        v[led_index] = amplitude;
        return v;
    }
};

inline std::size_t gray_encode(std::size_t k) { return k ^ (k >> 1); }

inline std::size_t gray_decode(std::size_t g)
{
    std::size_t k = 0;
    for (; g != 0; g >>= 1) k ^= g;
    return k;
}

namespace detail {

inline std::size_t take_bits(std::span<const int> bits, std::size_t& pos, std::size_t count)
{
    std::size_t v = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const int b = bits[pos++];
        if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0 or 1");
        v = (v << 1) | static_cast<std::size_t>(b);
    }
    return v;
}

inline void put_bits(std::vector<int>& bits, std::size_t v, std::size_t count)
{
    for (std::size_t i = 0; i < count; ++i) bits.push_back(static_cast<int>((v >> (count - 1 - i)) & 1u));
}

} // namespace detail

/// Map one symbol's worth of bits to a transmit vector. The first log2(n_t)
/// bits pick the LED (plain binary, big-endian); the rest are consumed in
/// amplitude, quadrant, phase order, each group Gray-mapped onto its PAM
/// level index.
inline TxVector map_bits(const ApqScheme& scheme, std::span<const int> bits)
{
    const std::size_t want = scheme.spatial_bits() + scheme.bits_per_symbol();
    if (bits.size() != want) throw std::invalid_argument("bit count does not match the scheme");
    std::size_t pos = 0;
    const std::size_t led = detail::take_bits(bits, pos, scheme.spatial_bits());
    const std::size_t a = gray_decode(detail::take_bits(bits, pos, log2_exact(scheme.split[0])));
    const std::size_t q = gray_decode(detail::take_bits(bits, pos, log2_exact(scheme.split[1])));
    const std::size_t t = gray_decode(detail::take_bits(bits, pos, log2_exact(scheme.split[2])));
    const std::size_t m = a * scheme.split[1] * scheme.split[2] + q * scheme.split[2] + t;
    return {led, m, apq_amplitude(scheme, m)};
}

/// Exact inverse of map_bits.
inline std::vector<int> demap(const ApqScheme& scheme, std::size_t led_index, std::size_t symbol_index)
{
    if (led_index >= scheme.n_t) throw std::out_of_range("LED index out of range");
    const SymbolParts parts = split_symbol_index(scheme, symbol_index);
    std::vector<int> bits;
    bits.reserve(scheme.spatial_bits() + scheme.bits_per_symbol());
    detail::put_bits(bits, led_index, scheme.spatial_bits());
    detail::put_bits(bits, gray_encode(parts.amplitude), log2_exact(scheme.split[0]));
    detail::put_bits(bits, gray_encode(parts.quadrant), log2_exact(scheme.split[1]));
    detail::put_bits(bits, gray_encode(parts.phase), log2_exact(scheme.split[2]));
    return bits;
}

/// All n_t * M transmit vectors, LED-major and symbol-minor.
inline Codebook apq_codebook(const ApqScheme& scheme)
{
    Codebook cb;
    cb.n_tx = scheme.n_t;
    cb.n_spatial = scheme.n_t;
    cb.n_symbols = scheme.symbol_count();
    cb.words.reserve(cb.n_spatial * cb.n_symbols);
    for (std::size_t l = 0; l < cb.n_spatial; ++l)
        for (std::size_t m = 0; m < cb.n_symbols; ++m)
            cb.words.push_back({l, m, TxVector{l, m, apq_amplitude(scheme, m)}.dense(scheme.n_t)});
    return cb;
}

/// Average electrical symbol energy gamma^2 * P_opt^2 * T_sym.
inline double average_symbol_energy(const SystemParams& params, double symbol_duration_s)
{
    if (!(symbol_duration_s > 0.0)) throw std::invalid_argument("symbol duration must be positive");
    const double gp = params.conv_factor_a_per_w * params.p_opt_w;
    return gp * gp * symbol_duration_s;
}

} // namespace apqsm
