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

#include <cstdint>
#include <random>

namespace apqsm {

inline std::uint64_t splitmix64(std::uint64_t& state)
{
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Derive an independent substream seed from a master seed and up to three
/// decorrelating indices (SNR point, worker, round). The chain is a fixed
/// splitmix64 walk, so substreams are stable across runs and platforms.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0)
{
    std::uint64_t s = master;
    std::uint64_t z = splitmix64(s);
    s ^= a * 0x9E3779B97F4A7C15ull;
    z ^= splitmix64(s);
    s ^= b * 0xC2B2AE3D27D4EB4Full;
    z ^= splitmix64(s);
    s ^= c * 0x165667B19E3779F9ull;
    z ^= splitmix64(s);
    return z;
}

inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t a,
                                   std::uint64_t b = 0, std::uint64_t c = 0)
{
    return std::mt19937_64(derive_seed(master, a, b, c));
}

} // namespace apqsm
