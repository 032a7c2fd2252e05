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
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "codebook.hpp"
#include "geometry.hpp"

namespace apqsm {

using RxVector = std::vector<double>;

/// y = gamma * H * x + z with i.i.d. zero-mean Gaussian noise of standard
/// deviation sigma per photodetector. sigma = 0 gives the noiseless output.
inline RxVector transmit(const ChannelMatrix& h, const Codeword& word, double gamma, double sigma,
                         std::mt19937_64& rng)
{
    if (word.tx.size() != h.n_tx()) throw std::invalid_argument("codeword length does not match channel");
    if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
    RxVector y(h.n_rx(), 0.0);
    for (std::size_t r = 0; r < h.n_rx(); ++r) {
        double acc = 0.0;
        for (std::size_t l = 0; l < h.n_tx(); ++l) acc += h(r, l) * word.tx[l];
        y[r] = gamma * acc;
    }
    if (sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, sigma);
        for (double& v : y) v += noise(rng);
    }
    return y;
}

struct Detection {
    std::size_t spatial_index = 0;
    std::size_t symbol_index = 0;

    bool operator==(const Detection&) const = default;
};

/// Noiseless received constellation gamma * H * x for every codeword,
/// flattened codeword-major. Shared, immutable scan table for the detectors
/// and the Monte Carlo loop.
class ReceivedCodebook {
  public:
    ReceivedCodebook(const ChannelMatrix& h, const Codebook& cb, double gamma)
        : n_rx_(h.n_rx()), n_spatial_(cb.n_spatial), n_symbols_(cb.n_symbols), pts_(cb.size() * h.n_rx())
    {
        if (cb.words.empty()) throw std::invalid_argument("codebook is empty");
        for (std::size_t i = 0; i < cb.size(); ++i) {
            const Codeword& w = cb.words[i];
            if (w.tx.size() != h.n_tx()) throw std::invalid_argument("codeword length does not match channel");
            for (std::size_t r = 0; r < n_rx_; ++r) {
                double acc = 0.0;
                for (std::size_t l = 0; l < h.n_tx(); ++l) acc += h(r, l) * w.tx[l];
                pts_[i * n_rx_ + r] = gamma * acc;
            }
        }
    }

    std::size_t size() const { return n_spatial_ * n_symbols_; }
    std::size_t n_rx() const { return n_rx_; }
    std::size_t n_spatial() const { return n_spatial_; }
    std::size_t n_symbols() const { return n_symbols_; }

    std::span<const double> point(std::size_t i) const { return {pts_.data() + i * n_rx_, n_rx_}; }

  private:
    std::size_t n_rx_, n_spatial_, n_symbols_;
    std::vector<double> pts_;
};

namespace detail {

inline double squared_distance(std::span<const double> y, std::span<const double> p)
{
    double acc = 0.0;
    for (std::size_t r = 0; r < y.size(); ++r) {
        const double d = y[r] - p[r];
        acc += d * d;
    }
    return acc;
}

} // namespace detail

/// Joint ML detection: argmin over all spatial/symbol hypotheses of
/// ||y - gamma H x||^2. Ties resolve to the lowest (spatial, symbol) pair in
/// codebook order.
inline Detection detect_joint(std::span<const double> y, const ReceivedCodebook& rc)
{
    if (y.size() != rc.n_rx()) throw std::invalid_argument("rx vector length does not match channel");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rc.size(); ++i) {
        const double d = detail::squared_distance(y, rc.point(i));
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return {best / rc.n_symbols(), best % rc.n_symbols()};
}

/// Two-step detection: the first stage picks the spatial state whose best
/// symbol hypothesis is closest to y; the second stage reuses that inner
/// minimizer as the symbol decision (re-solving the restricted problem would
/// return the same index). Same tie-break rule as the joint detector.
inline Detection detect_two_step(std::span<const double> y, const ReceivedCodebook& rc)
{
    if (y.size() != rc.n_rx()) throw std::invalid_argument("rx vector length does not match channel");
    std::size_t best_spatial = 0, best_symbol = 0;
    double best_inner = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < rc.n_spatial(); ++s) {
        std::size_t arg_m = 0;
        double inner = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < rc.n_symbols(); ++m) {
            const double d = detail::squared_distance(y, rc.point(s * rc.n_symbols() + m));
            if (d < inner) {
                inner = d;
                arg_m = m;
            }
        }
        if (inner < best_inner) {
            best_inner = inner;
            best_spatial = s;
            best_symbol = arg_m;
        }
    }
    return {best_spatial, best_symbol};
}

inline Detection detect_joint(std::span<const double> y, const ChannelMatrix& h, const Codebook& cb,
                              double gamma)
{
    return detect_joint(y, ReceivedCodebook(h, cb, gamma));
}

inline Detection detect_two_step(std::span<const double> y, const ChannelMatrix& h, const Codebook& cb,
                                 double gamma)
{
    return detect_two_step(y, ReceivedCodebook(h, cb, gamma));
}

} // namespace apqsm
