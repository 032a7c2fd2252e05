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
#include <optional>
#include <string>
#include <vector>

#include "aser.hpp"
#include "baselines.hpp"
#include "config.hpp"
#include "detection.hpp"
#include "scp.hpp"
#include "simulate.hpp"

namespace apqsm {

/// Uniform draw on the power simplex (flat Dirichlet via normalized
/// exponentials), components sorted descending to honor the ordering
/// constraint.
inline std::array<double, 3> random_power_split(double p_opt, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> uni(std::numeric_limits<double>::min(), 1.0);
    std::array<double, 3> e{-std::log(uni(rng)), -std::log(uni(rng)), -std::log(uni(rng))};
    const double total = e[0] + e[1] + e[2];
    std::array<double, 3> p{e[0] / total * p_opt, e[1] / total * p_opt, e[2] / total * p_opt};
    std::sort(p.begin(), p.end(), std::greater<>());
    // make the simplex sum exact
    p[2] = p_opt - p[0] - p[1];
    if (p[2] < 0.0) p[2] = 0.0;
    return p;
}

constexpr std::uint64_t kPowerDrawSalt = 0x70775221;

/// Resolve the power allocation of an APQ scheme entry for one sweep point.
/// `draw_index` keeps random draws and per-point optimizations decorrelated
/// and reproducible.
inline std::array<double, 3> resolve_power(const SchemeSpec& spec, const DeltaTensor& delta, double gamma,
                                           double sigma, const ScpConfig& scp, double p_opt,
                                           std::uint64_t seed, std::uint64_t draw_index)
{
    switch (spec.power.mode) {
    case PowerMode::fixed:
        return default_power_split(p_opt);
    case PowerMode::explicit_values: {
        PowerVector pv{spec.power.values};
        pv.validate(p_opt);
        return spec.power.values;
    }
    case PowerMode::random: {
        std::mt19937_64 rng = make_stream(seed, kPowerDrawSalt, draw_index);
        return random_power_split(p_opt, rng);
    }
    case PowerMode::optimize:
        return optimize_power(delta, gamma, sigma, scp, spec.split, p_opt).p;
    }
    return default_power_split(p_opt);
}

inline Codebook build_codebook(const SchemeSpec& spec, const std::array<double, 3>& power, std::size_t n_t,
                               double p_opt)
{
    switch (spec.kind) {
    case SchemeKind::apq_sm:
        return apq_codebook(make_apq_scheme(n_t, spec.split, PowerVector{power}, p_opt));
    case SchemeKind::sm_pam:
        return build_sm_pam(n_t, spec.m_pam, p_opt);
    case SchemeKind::ma_sm:
        return build_ma_sm(n_t, spec.n_active, spec.m_pam, p_opt);
    }
    throw std::logic_error("unreachable scheme kind");
}

struct SweepExperimentResult {
    std::vector<double> snr_db;
    std::optional<SerCurve> joint;
    std::optional<SerCurve> two_step;
    std::vector<BoundRow> bounds;
    std::vector<std::array<double, 3>> power; // resolved allocation per point (APQ only)

    bool all_reliable() const
    {
        const auto ok = [](const std::optional<SerCurve>& c) { return !c || c->all_reliable(); };
        return ok(joint) && ok(two_step);
    }
};

/// Reproduce one SER-vs-SNR figure: Monte Carlo curves for the configured
/// detector(s) plus the analytic bound columns at every point.
inline SweepExperimentResult run_sweep_experiment(const ExperimentConfig& cfg, std::size_t workers = 1)
{
    if (cfg.sweep.snr_db.empty()) throw ConfigError("sweep.snr_db must not be empty");
    const ChannelMatrix h = build_channel_matrix(cfg.geometry, cfg.params);
    const double gamma = cfg.params.conv_factor_a_per_w;
    const double p_opt = cfg.params.p_opt_w;
    const std::size_t n_t = cfg.geometry.led_positions.size();

    SweepExperimentResult res;
    res.snr_db = cfg.sweep.snr_db;
    std::sort(res.snr_db.begin(), res.snr_db.end());

    const bool is_apq = cfg.scheme.kind == SchemeKind::apq_sm;
    std::optional<DeltaTensor> delta;
    if (is_apq)
        delta.emplace(make_apq_scheme(n_t, cfg.scheme.split, PowerVector{default_power_split(p_opt)}, p_opt),
                      h);

    MonteCarloOptions mc;
    mc.min_errors = cfg.sweep.min_errors;
    mc.max_trials = cfg.sweep.max_trials;
    mc.master_seed = cfg.seed;
    mc.workers = workers;

    const bool want_joint = cfg.detector != DetectorChoice::two_step;
    const bool want_two = cfg.detector != DetectorChoice::joint;
    if (want_joint) res.joint.emplace();
    if (want_two) res.two_step.emplace();

    std::array<double, 3> frozen{};
    bool have_frozen = false;
    for (std::size_t i = 0; i < res.snr_db.size(); ++i) {
        const double snr = res.snr_db[i];
        const double sigma = sigma_from_snr_db(snr, gamma, p_opt);
        std::array<double, 3> power = default_power_split(p_opt);
        if (is_apq) {
            if (cfg.freeze_power && have_frozen) {
                power = frozen;
            } else {
                power = resolve_power(cfg.scheme, *delta, gamma, sigma, cfg.scp, p_opt, cfg.seed, i);
                frozen = power;
                have_frozen = true;
            }
            res.power.push_back(power);
        }
        const Codebook cb = build_codebook(cfg.scheme, power, n_t, p_opt);
        const ReceivedCodebook rc(h, cb, gamma);
        if (want_joint) res.joint->points.push_back(run_point(rc, sigma, mc, i, DetectorKind::joint, snr));
        if (want_two)
            res.two_step->points.push_back(run_point(rc, sigma, mc, i, DetectorKind::two_step, snr));
        res.bounds.push_back(evaluate_bounds(cb, h, gamma, sigma, snr));
    }
    return res;
}

struct CompareRow {
    std::string label;
    std::string detector;
    double d_tx_m = std::numeric_limits<double>::quiet_NaN();
    double semi_angle_deg = std::numeric_limits<double>::quiet_NaN();
    SerPoint point;
    double joint_bound = 0.0;
};

/// Scheme comparison across an optional LED-separation or semi-angle axis.
/// All entries share the geometry, noise levels and trial budget; spectral
/// efficiencies were already checked to match at parse time.
inline std::vector<CompareRow> run_compare_experiment(const ExperimentConfig& cfg, std::size_t workers = 1)
{
    if (!cfg.compare) throw ConfigError("compare section missing");
    if (cfg.sweep.snr_db.empty()) throw ConfigError("sweep.snr_db must not be empty");
    const CompareSettings& cs = *cfg.compare;
    const double gamma = cfg.params.conv_factor_a_per_w;
    const double p_opt = cfg.params.p_opt_w;
    const std::size_t n_t = cfg.geometry.led_positions.size();

    std::vector<double> snrs = cfg.sweep.snr_db;
    std::sort(snrs.begin(), snrs.end());

    // axis variants: exactly one of d_tx / semi-angle, or a single default pass
    struct Variant {
        Geometry geometry;
        SystemParams params;
        double d_tx, semi_deg;
    };
    std::vector<Variant> variants;
    if (!cs.d_tx_m.empty()) {
        if (n_t != 4) throw ConfigError("compare.d_tx_m requires the 4-LED reference layout");
        for (double d : cs.d_tx_m) {
            Variant v{cfg.geometry, cfg.params, d, std::numeric_limits<double>::quiet_NaN()};
            const double z = cfg.geometry.led_positions.front().z;
            Geometry ref = reference_geometry(d);
            for (Vec3& p : ref.led_positions) p.z = z;
            v.geometry.led_positions = ref.led_positions;
            variants.push_back(std::move(v));
        }
    } else if (!cs.semi_angle_deg.empty()) {
        for (double deg : cs.semi_angle_deg) {
            Variant v{cfg.geometry, cfg.params, std::numeric_limits<double>::quiet_NaN(), deg};
            v.params.semi_angle_rad = deg * std::numbers::pi / 180.0;
            variants.push_back(std::move(v));
        }
    } else {
        variants.push_back(
            {cfg.geometry, cfg.params, std::numeric_limits<double>::quiet_NaN(),
             std::numeric_limits<double>::quiet_NaN()});
    }

    std::vector<DetectorKind> kinds;
    if (cfg.detector != DetectorChoice::two_step) kinds.push_back(DetectorKind::joint);
    if (cfg.detector != DetectorChoice::joint) kinds.push_back(DetectorKind::two_step);

    MonteCarloOptions mc;
    mc.min_errors = cfg.sweep.min_errors;
    mc.max_trials = cfg.sweep.max_trials;
    mc.master_seed = cfg.seed;
    mc.workers = workers;

    std::vector<CompareRow> rows;
    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
        const Variant& var = variants[vi];
        const ChannelMatrix h = build_channel_matrix(var.geometry, var.params);
        for (std::size_t ei = 0; ei < cs.schemes.size(); ++ei) {
            const SchemeSpec& spec = cs.schemes[ei];
            std::optional<DeltaTensor> delta;
            if (spec.kind == SchemeKind::apq_sm)
                delta.emplace(
                    make_apq_scheme(n_t, spec.split, PowerVector{default_power_split(p_opt)}, p_opt), h);
            std::array<double, 3> frozen{};
            bool have_frozen = false;
            for (std::size_t si = 0; si < snrs.size(); ++si) {
                const double sigma = sigma_from_snr_db(snrs[si], gamma, p_opt);
                std::array<double, 3> power = default_power_split(p_opt);
                if (spec.kind == SchemeKind::apq_sm) {
                    const std::uint64_t draw = (vi * cs.schemes.size() + ei) * snrs.size() + si;
                    if (cfg.freeze_power && have_frozen) {
                        power = frozen;
                    } else {
                        power = resolve_power(spec, *delta, gamma, sigma, cfg.scp, p_opt, cfg.seed, draw);
                        frozen = power;
                        have_frozen = true;
                    }
                }
                const Codebook cb = build_codebook(spec, power, n_t, p_opt);
                const ReceivedCodebook rc(h, cb, gamma);
                const double jb = joint_aser_bound(cb, h, gamma, sigma);
                for (DetectorKind kind : kinds) {
                    CompareRow row;
                    row.label = spec.label;
                    row.detector = kind == DetectorKind::joint ? "joint" : "two-step";
                    row.d_tx_m = var.d_tx;
                    row.semi_angle_deg = var.semi_deg;
                    const std::uint64_t point_index = (vi * cs.schemes.size() + ei) * snrs.size() + si;
                    row.point = run_point(rc, sigma, mc, point_index, kind, snrs[si]);
                    row.joint_bound = jb;
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

struct OptimizeRun {
    double snr_db = 0.0;
    ScpResult result;
};

/// Algorithm-1 convergence traces, one per configured SNR. The run starts
/// from the explicit power vector when one is configured, otherwise from the
/// 4:2:1 default.
inline std::vector<OptimizeRun> run_optimize_experiment(const ExperimentConfig& cfg)
{
    if (cfg.scheme.kind != SchemeKind::apq_sm) throw ConfigError("optimize requires scheme apq-sm");
    if (cfg.sweep.snr_db.empty()) throw ConfigError("sweep.snr_db must not be empty");
    const ChannelMatrix h = build_channel_matrix(cfg.geometry, cfg.params);
    const double gamma = cfg.params.conv_factor_a_per_w;
    const double p_opt = cfg.params.p_opt_w;
    const std::size_t n_t = cfg.geometry.led_positions.size();
    const DeltaTensor delta(
        make_apq_scheme(n_t, cfg.scheme.split, PowerVector{default_power_split(p_opt)}, p_opt), h);

    std::array<double, 3> p0 = default_power_split(p_opt);
    if (cfg.scheme.power.mode == PowerMode::explicit_values) p0 = cfg.scheme.power.values;

    std::vector<double> snrs = cfg.sweep.snr_db;
    std::sort(snrs.begin(), snrs.end());
    std::vector<OptimizeRun> runs;
    for (double snr : snrs) {
        const double sigma = sigma_from_snr_db(snr, gamma, p_opt);
        runs.push_back({snr, scp_optimize(delta, gamma, sigma, cfg.scp, p0, p_opt)});
    }
    return runs;
}

} // namespace apqsm
