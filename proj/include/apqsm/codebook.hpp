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
#include <numeric>
#include <stdexcept>
#include <vector>

namespace apqsm {

/// One transmit hypothesis: a dense nonnegative intensity vector over the
/// LEDs plus the (spatial state, symbol) pair it encodes. For single-active
/// schemes the spatial state is the LED index; for multi-active schemes it is
/// the index of the LED combination.
struct Codeword {
    std::size_t spatial_index = 0;
    std::size_t symbol_index = 0;
    std::vector<double> tx;

    double total_power() const { return std::accumulate(tx.begin(), tx.end(), 0.0); }
};

/// Full transmit codebook in spatial-major, symbol-minor order, so the word
/// for (s, m) sits at index s * n_symbols + m.
struct Codebook {
    std::size_t n_tx = 0;
    std::size_t n_spatial = 0;
    std::size_t n_symbols = 0;
    std::vector<Codeword> words;

    std::size_t size() const { return words.size(); }

    const Codeword& word(std::size_t spatial, std::size_t symbol) const
    {
        if (spatial >= n_spatial || symbol >= n_symbols) throw std::out_of_range("codeword index out of range");
        return words[spatial * n_symbols + symbol];
    }

    /// Mean over codewords of the summed LED intensities. Equals the mean
    /// optical power constraint the schemes are normalized to.
    double mean_total_power() const
    {
        double acc = 0.0;
        for (const Codeword& w : words) acc += w.total_power();
        return acc / static_cast<double>(words.size());
    }
};

} // namespace apqsm
