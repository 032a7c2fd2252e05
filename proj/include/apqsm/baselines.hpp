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

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "codebook.hpp"
#include "modulation.hpp"

namespace apqsm {

/// Conventional spatial modulation with one M-ary PAM symbol on the active
/// LED. Levels are scaled so the mean optical power equals p_opt, matching
/// the illumination constraint of the superposed scheme.
inline Codebook build_sm_pam(std::size_t n_t, std::size_t m_pam, double p_opt)
{
    if (!is_power_of_two(n_t) || !is_power_of_two(m_pam))
        throw std::invalid_argument("SM-PAM requires power-of-2 LED count and PAM order");
    if (!(p_opt > 0.0)) throw std::invalid_argument("mean optical power must be positive");
    const std::vector<double> levels = pam_levels(m_pam);
    Codebook cb;
    cb.n_tx = n_t;
    cb.n_spatial = n_t;
    cb.n_symbols = m_pam;
    cb.words.reserve(n_t * m_pam);
    for (std::size_t l = 0; l < n_t; ++l)
        for (std::size_t m = 0; m < m_pam; ++m) {
            Codeword w{l, m, std::vector<double>(n_t, 0.0)};
            w.tx[l] = p_opt * levels[m];
            cb.words.push_back(std::move(w));
        }
    return cb;
}

/// Lexicographically ordered n_active-element subsets of {0..n-1}.
inline std::vector<std::vector<std::size_t>> led_combinations(std::size_t n, std::size_t k)
{
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        // advance to the next combination
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - k) break;
            if (i == 0) return out;
        }
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

/// Multiple-active spatial modulation: n_active of n_t LEDs transmit
/// independent M-ary PAM symbols. The spatial alphabet is the first
/// 2^floor(log2 C(n_t, n_active)) combinations in lexicographic order, and
/// each active LED carries p_opt / n_active so the summed mean optical power
/// stays at p_opt.
inline Codebook build_ma_sm(std::size_t n_t, std::size_t n_active, std::size_t m_pam, double p_opt)
{
    if (!is_power_of_two(n_t) || !is_power_of_two(m_pam))
        throw std::invalid_argument("MA-SM requires power-of-2 LED count and PAM order");
    if (!(n_active >= 1 && n_active < n_t)) throw std::invalid_argument("need 1 <= n_active < n_t");
    if (!(p_opt > 0.0)) throw std::invalid_argument("mean optical power must be positive");

    auto combos = led_combinations(n_t, n_active);
    std::size_t n_spatial = 1;
    while (n_spatial * 2 <= combos.size()) n_spatial *= 2;
    combos.resize(n_spatial);

    std::vector<double> levels = pam_levels(m_pam);
    for (double& v : levels) v *= p_opt / static_cast<double>(n_active);

    std::size_t n_symbols = 1;
    for (std::size_t i = 0; i < n_active; ++i) n_symbols *= m_pam;

    Codebook cb;
    cb.n_tx = n_t;
    cb.n_spatial = n_spatial;
    cb.n_symbols = n_symbols;
    cb.words.reserve(n_spatial * n_symbols);
    for (std::size_t c = 0; c < n_spatial; ++c)
        for (std::size_t m = 0; m < n_symbols; ++m) {
            Codeword w{c, m, std::vector<double>(n_t, 0.0)};
            // digits of m in base m_pam, most significant digit on the first active LED
            std::size_t rem = m;
            for (std::size_t j = n_active; j > 0; --j) {
                w.tx[combos[c][j - 1]] = levels[rem % m_pam];
                rem /= m_pam;
            }
            cb.words.push_back(std::move(w));
        }
    return cb;
}

/// Spectral efficiency of an MA-SM configuration in bits per channel use.
inline std::size_t ma_sm_bits(std::size_t n_t, std::size_t n_active, std::size_t m_pam)
{
    const std::size_t n_combos = led_combinations(n_t, n_active).size();
    std::size_t spatial_bits = 0;
    while ((std::size_t{2} << spatial_bits) <= n_combos) ++spatial_bits;
    return spatial_bits + n_active * log2_exact(m_pam);
}

} // namespace apqsm
