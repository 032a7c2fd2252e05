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

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "codebook.hpp"
#include "geometry.hpp"

namespace apqsm {

/// Gaussian tail probability Q(x) = erfc(x / sqrt 2) / 2. Arguments beyond
/// |x| = 38 sit past the double-precision erfc range and collapse to exactly
/// 0 or 1.
inline double q_function(double x)
{
    if (x > 38.0) return 0.0;
    if (x < -38.0) return 1.0;
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

namespace detail {

/// H * x for every codeword, codeword-major, without the conversion factor.
inline std::vector<double> received_points(const Codebook& cb, const ChannelMatrix& h)
{
    std::vector<double> pts(cb.size() * h.n_rx(), 0.0);
    for (std::size_t i = 0; i < cb.size(); ++i) {
        const Codeword& w = cb.words[i];
        if (w.tx.size() != h.n_tx()) throw std::invalid_argument("codeword length does not match channel");
        for (std::size_t r = 0; r < h.n_rx(); ++r) {
            double acc = 0.0;
            for (std::size_t l = 0; l < h.n_tx(); ++l) acc += h(r, l) * w.tx[l];
            pts[i * h.n_rx() + r] = acc;
        }
    }
    return pts;
}

inline double distance(const std::vector<double>& pts, std::size_t n_rx, std::size_t i, std::size_t j)
{
    double acc = 0.0;
    for (std::size_t r = 0; r < n_rx; ++r) {
        const double d = pts[i * n_rx + r] - pts[j * n_rx + r];
        acc += d * d;
    }
    return std::sqrt(acc);
}

} // namespace detail

/// Pairwise error probability of deciding x_b when x_a was sent:
/// Q( gamma/(2 sigma) * ||H (x_a - x_b)|| ).
inline double pep(std::span<const double> x_a, std::span<const double> x_b, const ChannelMatrix& h,
                  double gamma, double sigma)
{
    if (x_a.size() != h.n_tx() || x_b.size() != h.n_tx())
        throw std::invalid_argument("vector length does not match channel");
    double acc = 0.0;
    for (std::size_t r = 0; r < h.n_rx(); ++r) {
        double d = 0.0;
        for (std::size_t l = 0; l < h.n_tx(); ++l) d += h(r, l) * (x_a[l] - x_b[l]);
        acc += d * d;
    }
    return q_function(gamma / (2.0 * sigma) * std::sqrt(acc));
}

/// Union bound on the joint-detection SER: the average over transmitted
/// codewords of the summed pairwise error probabilities against every other
/// hypothesis. Raw value; it may exceed 1 at low SNR.
inline double joint_aser_bound(const Codebook& cb, const ChannelMatrix& h, double gamma, double sigma)
{
    const std::vector<double> pts = detail::received_points(cb, h);
    const std::size_t n_rx = h.n_rx();
    const double scale = gamma / (2.0 * sigma);
    double total = 0.0;
    for (std::size_t i = 0; i < cb.size(); ++i)
        for (std::size_t j = 0; j < cb.size(); ++j) {
            if (i == j) continue;
            total += q_function(scale * detail::distance(pts, n_rx, i, j));
        }
    return total / static_cast<double>(cb.size());
}

/// Minimum received distance from codeword (spatial, symbol) to hypotheses
/// carried by any other spatial state: min over s' != s, all m' of
/// ||gamma H (x_s^m - x_s'^m')||.
inline double min_distance(const Codebook& cb, const ChannelMatrix& h, double gamma, std::size_t spatial,
                           std::size_t symbol)
{
    if (cb.n_spatial < 2) throw std::invalid_argument("min_distance needs at least two spatial states");
    const std::vector<double> pts = detail::received_points(cb, h);
    const std::size_t i = spatial * cb.n_symbols + symbol;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < cb.n_spatial; ++s) {
        if (s == spatial) continue;
        for (std::size_t m = 0; m < cb.n_symbols; ++m)
            best = std::min(best, detail::distance(pts, h.n_rx(), i, s * cb.n_symbols + m));
    }
    return gamma * best;
}

/// Bound on the probability that stage one picks the wrong spatial state
/// when `spatial` transmits, using the per-symbol minimum distances.
inline double index_error_bound(const Codebook& cb, const ChannelMatrix& h, double gamma, double sigma,
                                std::size_t spatial)
{
    const double scale = gamma / (2.0 * sigma);
    double total = 0.0;
    for (std::size_t m = 0; m < cb.n_symbols; ++m)
        total += q_function(scale * min_distance(cb, h, gamma, spatial, m));
    return total / static_cast<double>(cb.n_symbols);
}

/// Union bound on symbol errors given the spatial state was detected
/// correctly: the average over symbols of summed same-state PEPs.
inline double symbol_error_bound(const Codebook& cb, const ChannelMatrix& h, double gamma, double sigma,
                                 std::size_t spatial)
{
    const std::vector<double> pts = detail::received_points(cb, h);
    const double scale = gamma / (2.0 * sigma);
    double total = 0.0;
    for (std::size_t m = 0; m < cb.n_symbols; ++m)
        for (std::size_t mh = 0; mh < cb.n_symbols; ++mh) {
            if (mh == m) continue;
            total += q_function(scale * detail::distance(pts, h.n_rx(), spatial * cb.n_symbols + m,
                                                         spatial * cb.n_symbols + mh));
        }
    return total / static_cast<double>(cb.n_symbols);
}

/// Total two-step SER bound: average over spatial states of
/// P_l + P_x - P_l * P_x with the index and conditional-symbol bounds above.
inline double two_step_aser_bound(const Codebook& cb, const ChannelMatrix& h, double gamma, double sigma)
{
    double total = 0.0;
    for (std::size_t s = 0; s < cb.n_spatial; ++s) {
        const double pl = index_error_bound(cb, h, gamma, sigma, s);
        const double px = symbol_error_bound(cb, h, gamma, sigma, s);
        total += pl + px - pl * px;
    }
    return total / static_cast<double>(cb.n_spatial);
}

/// One row of the exported bound report.
struct BoundRow {
    double snr_db = 0.0;
    double joint_bound = 0.0;
    double index_bound = 0.0;
    double cond_symbol_bound = 0.0;
    double two_step_bound = 0.0;
};

/// All four bound evaluations at one noise level. The index and conditional
/// symbol columns are averaged over the spatial states.
inline BoundRow evaluate_bounds(const Codebook& cb, const ChannelMatrix& h, double gamma, double sigma,
                                double snr_db_label)
{
    BoundRow row;
    row.snr_db = snr_db_label;
    row.joint_bound = joint_aser_bound(cb, h, gamma, sigma);
    double pl_avg = 0.0, px_avg = 0.0, total = 0.0;
    for (std::size_t s = 0; s < cb.n_spatial; ++s) {
        const double pl = index_error_bound(cb, h, gamma, sigma, s);
        const double px = symbol_error_bound(cb, h, gamma, sigma, s);
        pl_avg += pl;
        px_avg += px;
        total += pl + px - pl * px;
    }
    const double n = static_cast<double>(cb.n_spatial);
    row.index_bound = pl_avg / n;
    row.cond_symbol_bound = px_avg / n;
    row.two_step_bound = total / n;
    return row;
}

} // namespace apqsm
