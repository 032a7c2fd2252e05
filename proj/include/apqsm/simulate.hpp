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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "detection.hpp"
#include "rng.hpp"

namespace apqsm {

/// Noise level from the transmit SNR E_s/N_0 in dB. With B = 1/T_sym the
/// per-PD standard deviation is gamma * P_opt / sqrt(SNR_linear).
inline double sigma_from_snr_db(double snr_db, double gamma, double p_opt)
{
    return gamma * p_opt / std::sqrt(std::pow(10.0, snr_db / 10.0));
}

struct WilsonInterval {
    double lo = 0.0, hi = 1.0;
};

/// Wilson score interval; stays meaningful at very low error counts.
inline WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t trials, double z = 1.959963984540054)
{
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    WilsonInterval ci{std::max(0.0, centre - half), std::min(1.0, centre + half)};
    if (errors == 0) ci.lo = 0.0;
    if (errors == trials) ci.hi = 1.0;
    return ci;
}

enum class DetectorKind { joint, two_step };

/// Stopping rule and seeding for one Monte Carlo SER sweep.
struct MonteCarloOptions {
    std::uint64_t min_errors = 200;
    std::uint64_t max_trials = 10'000'000;
    std::uint64_t master_seed = 1;
    std::size_t workers = 1;
    std::size_t batch_size = 8192;

    void validate() const
    {
        if (min_errors == 0) throw std::invalid_argument("min_errors must be positive");
        if (max_trials < min_errors) throw std::invalid_argument("max_trials must cover min_errors");
        if (workers == 0 || batch_size == 0) throw std::invalid_argument("workers and batch size must be positive");
    }
};

struct SerPoint {
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double ser = 0.0;
    WilsonInterval ci;
    bool reliable = true; // min_errors reached before the trial cap
};

struct SerCurve {
    std::vector<SerPoint> points;

    bool all_reliable() const
    {
        return std::all_of(points.begin(), points.end(), [](const SerPoint& p) { return p.reliable; });
    }
};

namespace detail {

/// One worker batch: draw codewords uniformly, add noise, detect, count
/// symbol errors (any mismatch of the spatial/symbol pair counts once).
inline std::uint64_t run_batch(const ReceivedCodebook& rc, double sigma, DetectorKind kind,
                               std::uint64_t n_trials, std::mt19937_64 rng)
{
    std::uniform_int_distribution<std::size_t> pick(0, rc.size() - 1);
    std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
    std::vector<double> y(rc.n_rx());
    std::uint64_t errors = 0;
    for (std::uint64_t t = 0; t < n_trials; ++t) {
        const std::size_t idx = pick(rng);
        const std::span<const double> pt = rc.point(idx);
        for (std::size_t r = 0; r < y.size(); ++r) y[r] = pt[r] + (sigma > 0.0 ? noise(rng) : 0.0);
        const Detection det =
            kind == DetectorKind::joint ? detect_joint(y, rc) : detect_two_step(y, rc);
        if (det.spatial_index * rc.n_symbols() + det.symbol_index != idx) ++errors;
    }
    return errors;
}

} // namespace detail

/// Monte Carlo SER at one noise level. Trials run in rounds of
/// workers x batch_size; each (point, round, worker) triple owns a private
/// substream derived from the master seed, and batch counts merge in worker
/// order, so results are bit-identical for a fixed worker count. The noise
/// streams do not depend on the detector, which keeps joint/two-step sweeps
/// paired realization-for-realization.
inline SerPoint run_point(const ReceivedCodebook& rc, double sigma, const MonteCarloOptions& opt,
                          std::size_t point_index, DetectorKind kind, double snr_db_label)
{
    opt.validate();
    SerPoint out;
    out.snr_db = snr_db_label;
    std::uint64_t round = 0;
    while (out.trials < opt.max_trials && out.errors < opt.min_errors) {
        std::vector<std::uint64_t> counts(opt.workers, 0);
        std::vector<std::uint64_t> sizes(opt.workers, 0);
        std::uint64_t remaining = opt.max_trials - out.trials;
        for (std::size_t w = 0; w < opt.workers && remaining > 0; ++w) {
            sizes[w] = std::min<std::uint64_t>(opt.batch_size, remaining);
            remaining -= sizes[w];
        }
        if (opt.workers == 1) {
            counts[0] = detail::run_batch(rc, sigma, kind, sizes[0],
                                          make_stream(opt.master_seed, point_index, round, 0));
        } else {
            std::vector<std::thread> pool;
            pool.reserve(opt.workers);
            for (std::size_t w = 0; w < opt.workers; ++w) {
                if (sizes[w] == 0) continue;
                pool.emplace_back([&, w] {
                    counts[w] = detail::run_batch(rc, sigma, kind, sizes[w],
                                                  make_stream(opt.master_seed, point_index, round, w));
                });
            }
            for (std::thread& th : pool) th.join();
        }
        for (std::size_t w = 0; w < opt.workers; ++w) {
            out.trials += sizes[w];
            out.errors += counts[w];
        }
        ++round;
    }
    out.ser = out.trials ? static_cast<double>(out.errors) / static_cast<double>(out.trials) : 0.0;
    out.ci = wilson_interval(out.errors, out.trials);
    out.reliable = out.errors >= opt.min_errors;
    return out;
}

/// SER sweep over a list of SNR points against a fixed codebook. Points are
/// independent; the output is sorted by SNR.
inline SerCurve run_sweep(const ReceivedCodebook& rc, const std::vector<double>& snr_db, double gamma,
                          double p_opt, const MonteCarloOptions& opt, DetectorKind kind)
{
    if (snr_db.empty()) throw std::invalid_argument("SNR list is empty");
    std::vector<double> sorted = snr_db;
    std::sort(sorted.begin(), sorted.end());
    SerCurve curve;
    curve.points.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        curve.points.push_back(run_point(rc, sigma_from_snr_db(sorted[i], gamma, p_opt), opt, i, kind, sorted[i]));
    return curve;
}

} // namespace apqsm
