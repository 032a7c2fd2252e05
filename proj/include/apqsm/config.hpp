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
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "baselines.hpp"
#include "geometry.hpp"
#include "modulation.hpp"
#include "scp.hpp"

namespace apqsm {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error("config: " + msg) {}
};

enum class SchemeKind { apq_sm, sm_pam, ma_sm };
enum class PowerMode { fixed, random, optimize, explicit_values };
enum class DetectorChoice { joint, two_step, both };

struct PowerSetting {
    PowerMode mode = PowerMode::fixed;
    std::array<double, 3> values{0.0, 0.0, 0.0}; // explicit mode only
};

struct SchemeSpec {
    SchemeKind kind = SchemeKind::apq_sm;
    std::array<std::size_t, 3> split{2, 4, 2}; // apq-sm
    std::size_t m_pam = 16;                    // sm-pam / ma-sm
    std::size_t n_active = 2;                  // ma-sm
    PowerSetting power;
    std::string label;

    std::size_t bits(std::size_t n_t) const
    {
        switch (kind) {
        case SchemeKind::apq_sm:
            return log2_exact(n_t) + log2_exact(split[0] * split[1] * split[2]);
        case SchemeKind::sm_pam:
            return log2_exact(n_t) + log2_exact(m_pam);
        case SchemeKind::ma_sm:
            return ma_sm_bits(n_t, n_active, m_pam);
        }
        return 0;
    }

    std::string default_label() const
    {
        switch (kind) {
        case SchemeKind::apq_sm: {
            std::string s = "apq-sm(" + std::to_string(split[0]) + "," + std::to_string(split[1]) + "," +
                            std::to_string(split[2]) + ")";
            switch (power.mode) {
            case PowerMode::fixed: return s + "/fixed";
            case PowerMode::random: return s + "/random";
            case PowerMode::optimize: return s + "/optimized";
            case PowerMode::explicit_values: return s + "/explicit";
            }
            return s;
        }
        case SchemeKind::sm_pam:
            return "sm-pam(" + std::to_string(m_pam) + ")";
        case SchemeKind::ma_sm:
            return "ma-sm(" + std::to_string(n_active) + "x" + std::to_string(m_pam) + ")";
        }
        return "scheme";
    }
};

struct SweepSettings {
    std::vector<double> snr_db;
    std::uint64_t min_errors = 200;
    std::uint64_t max_trials = 10'000'000;
};

struct CompareSettings {
    std::vector<SchemeSpec> schemes;
    std::vector<double> d_tx_m;         // optional LED-separation axis
    std::vector<double> semi_angle_deg; // optional semi-angle axis
};

struct OutputSettings {
    std::string dir = "out";
    bool svg = true;
};

struct ExperimentConfig {
    Geometry geometry = reference_geometry();
    SystemParams params;
    SchemeSpec scheme;
    DetectorChoice detector = DetectorChoice::joint;
    bool freeze_power = false; // optimize once at the first SNR point
    SweepSettings sweep;
    ScpConfig scp;
    std::uint64_t seed = 20250801;
    std::optional<CompareSettings> compare;
    OutputSettings output;
};

namespace detail {

inline void require_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed)
{
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& item : obj.items())
        if (!allowed.contains(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
}

inline double get_number(const json& obj, const std::string& where, const std::string& key, double fallback)
{
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return obj[key].get<double>();
}

inline std::uint64_t get_uint(const json& obj, const std::string& where, const std::string& key,
                              std::uint64_t fallback)
{
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_unsigned()) throw ConfigError(where + "." + key + ": expected a non-negative integer");
    return obj[key].get<std::uint64_t>();
}

inline Vec3 get_vec3(const json& v, const std::string& where)
{
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
        throw ConfigError(where + ": expected [x, y, z]");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

inline std::vector<double> get_number_list(const json& obj, const std::string& where, const std::string& key)
{
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    if (!obj[key].is_array()) throw ConfigError(where + "." + key + ": expected an array of numbers");
    for (const auto& v : obj[key]) {
        if (!v.is_number()) throw ConfigError(where + "." + key + ": expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

inline void parse_scheme_fields(const json& obj, const std::string& where, SchemeSpec& spec)
{
    if (obj.contains("scheme")) {
        const std::string s = obj["scheme"].get<std::string>();
        if (s == "apq-sm") spec.kind = SchemeKind::apq_sm;
        else if (s == "sm-pam") spec.kind = SchemeKind::sm_pam;
        else if (s == "ma-sm") spec.kind = SchemeKind::ma_sm;
        else throw ConfigError(where + ".scheme: expected apq-sm | sm-pam | ma-sm");
    }
    if (obj.contains("split")) {
        const json& sp = obj["split"];
        if (!sp.is_array() || sp.size() != 3) throw ConfigError(where + ".split: expected [M1, M2, M3]");
        for (int i = 0; i < 3; ++i) {
            if (!sp[i].is_number_unsigned() || sp[i].get<std::uint64_t>() < 1)
                throw ConfigError(where + ".split: entries must be positive integers");
            spec.split[i] = sp[i].get<std::size_t>();
        }
    }
    if (obj.contains("m_pam")) {
        if (!obj["m_pam"].is_number_unsigned()) throw ConfigError(where + ".m_pam: expected a positive integer");
        spec.m_pam = obj["m_pam"].get<std::size_t>();
    }
    if (obj.contains("n_active")) {
        if (!obj["n_active"].is_number_unsigned())
            throw ConfigError(where + ".n_active: expected a positive integer");
        spec.n_active = obj["n_active"].get<std::size_t>();
    }
    if (obj.contains("power")) {
        const json& p = obj["power"];
        if (p.is_string()) {
            const std::string s = p.get<std::string>();
            if (s == "fixed") spec.power.mode = PowerMode::fixed;
            else if (s == "random") spec.power.mode = PowerMode::random;
            else if (s == "optimize") spec.power.mode = PowerMode::optimize;
            else throw ConfigError(where + ".power: expected optimize | fixed | random or [p1, p2, p3]");
        } else if (p.is_array() && p.size() == 3) {
            spec.power.mode = PowerMode::explicit_values;
            for (int i = 0; i < 3; ++i) {
                if (!p[i].is_number()) throw ConfigError(where + ".power: expected numeric entries");
                spec.power.values[i] = p[i].get<double>();
            }
        } else {
            throw ConfigError(where + ".power: expected optimize | fixed | random or [p1, p2, p3]");
        }
        if (spec.kind != SchemeKind::apq_sm && (spec.power.mode != PowerMode::fixed))
            throw ConfigError(where + ".power: only apq-sm carries a power allocation");
    }
    if (obj.contains("label")) spec.label = obj["label"].get<std::string>();
    if (spec.label.empty()) spec.label = spec.default_label();
}

} // namespace detail

inline ExperimentConfig parse_config(const json& root)
{
    using namespace detail;
    ExperimentConfig cfg;
    require_keys(root, "top level",
                 {"schema_version", "seed", "geometry", "params", "scheme", "split", "m_pam", "n_active",
                  "power", "label", "detector", "freeze_power", "sweep", "scp", "compare", "output"});
    if (!root.contains("schema_version") || !root["schema_version"].is_number_unsigned() ||
        root["schema_version"].get<std::uint64_t>() != 1)
        throw ConfigError("schema_version must be present and equal to 1");
    cfg.seed = get_uint(root, "top level", "seed", cfg.seed);

    if (root.contains("geometry")) {
        const json& g = root["geometry"];
        require_keys(g, "geometry", {"room_dims_m", "led_positions_m", "pd_positions_m"});
        if (g.contains("room_dims_m")) cfg.geometry.room_dims = get_vec3(g["room_dims_m"], "geometry.room_dims_m");
        if (g.contains("led_positions_m")) {
            cfg.geometry.led_positions.clear();
            for (const auto& v : g["led_positions_m"])
                cfg.geometry.led_positions.push_back(get_vec3(v, "geometry.led_positions_m"));
        }
        if (g.contains("pd_positions_m")) {
            cfg.geometry.pd_positions.clear();
            for (const auto& v : g["pd_positions_m"])
                cfg.geometry.pd_positions.push_back(get_vec3(v, "geometry.pd_positions_m"));
        }
    }

    if (root.contains("params")) {
        const json& p = root["params"];
        require_keys(p, "params",
                     {"pd_area_m2", "fov_deg", "semi_angle_deg", "refractive_index", "filter_gain",
                      "conv_factor_a_per_w", "p_opt_w"});
        cfg.params.pd_area_m2 = get_number(p, "params", "pd_area_m2", cfg.params.pd_area_m2);
        cfg.params.fov_rad = deg_to_rad(get_number(p, "params", "fov_deg", 15.0));
        cfg.params.semi_angle_rad = deg_to_rad(get_number(p, "params", "semi_angle_deg", 15.0));
        cfg.params.refractive_index = get_number(p, "params", "refractive_index", cfg.params.refractive_index);
        cfg.params.filter_gain = get_number(p, "params", "filter_gain", cfg.params.filter_gain);
        cfg.params.conv_factor_a_per_w =
            get_number(p, "params", "conv_factor_a_per_w", cfg.params.conv_factor_a_per_w);
        cfg.params.p_opt_w = get_number(p, "params", "p_opt_w", cfg.params.p_opt_w);
    }

    detail::parse_scheme_fields(root, "top level", cfg.scheme);

    if (root.contains("detector")) {
        const std::string d = root["detector"].get<std::string>();
        if (d == "joint") cfg.detector = DetectorChoice::joint;
        else if (d == "two-step") cfg.detector = DetectorChoice::two_step;
        else if (d == "both") cfg.detector = DetectorChoice::both;
        else throw ConfigError("detector: expected joint | two-step | both");
    }
    if (root.contains("freeze_power")) {
        if (!root["freeze_power"].is_boolean()) throw ConfigError("freeze_power: expected a boolean");
        cfg.freeze_power = root["freeze_power"].get<bool>();
    }

    if (root.contains("sweep")) {
        const json& s = root["sweep"];
        require_keys(s, "sweep", {"snr_db", "min_errors", "max_trials"});
        cfg.sweep.snr_db = get_number_list(s, "sweep", "snr_db");
        cfg.sweep.min_errors = get_uint(s, "sweep", "min_errors", cfg.sweep.min_errors);
        cfg.sweep.max_trials = get_uint(s, "sweep", "max_trials", cfg.sweep.max_trials);
        if (cfg.sweep.max_trials < cfg.sweep.min_errors)
            throw ConfigError("sweep.max_trials must be at least sweep.min_errors");
    }

    if (root.contains("scp")) {
        const json& s = root["scp"];
        require_keys(s, "scp",
                     {"alpha0", "alpha1", "alpha2", "shrink", "grow", "delta0", "epsilon", "max_iterations"});
        cfg.scp.alpha0 = get_number(s, "scp", "alpha0", cfg.scp.alpha0);
        cfg.scp.alpha1 = get_number(s, "scp", "alpha1", cfg.scp.alpha1);
        cfg.scp.alpha2 = get_number(s, "scp", "alpha2", cfg.scp.alpha2);
        cfg.scp.shrink = get_number(s, "scp", "shrink", cfg.scp.shrink);
        cfg.scp.grow = get_number(s, "scp", "grow", cfg.scp.grow);
        cfg.scp.delta0 = get_number(s, "scp", "delta0", cfg.scp.delta0);
        cfg.scp.epsilon = get_number(s, "scp", "epsilon", cfg.scp.epsilon);
        cfg.scp.max_iterations =
            static_cast<std::size_t>(get_uint(s, "scp", "max_iterations", cfg.scp.max_iterations));
        cfg.scp.validate();
    }

    if (root.contains("compare")) {
        const json& c = root["compare"];
        require_keys(c, "compare", {"schemes", "d_tx_m", "semi_angle_deg"});
        CompareSettings cs;
        if (!c.contains("schemes") || !c["schemes"].is_array() || c["schemes"].empty())
            throw ConfigError("compare.schemes: expected a non-empty array");
        std::size_t idx = 0;
        for (const json& entry : c["schemes"]) {
            const std::string where = "compare.schemes[" + std::to_string(idx++) + "]";
            require_keys(entry, where, {"scheme", "split", "m_pam", "n_active", "power", "label"});
            SchemeSpec spec = cfg.scheme; // inherit top-level scheme fields
            detail::parse_scheme_fields(entry, where, spec);
            spec.label = entry.contains("label") ? entry["label"].get<std::string>() : spec.default_label();
            cs.schemes.push_back(spec);
        }
        cs.d_tx_m = get_number_list(c, "compare", "d_tx_m");
        cs.semi_angle_deg = get_number_list(c, "compare", "semi_angle_deg");
        if (!cs.d_tx_m.empty() && !cs.semi_angle_deg.empty())
            throw ConfigError("compare: d_tx_m and semi_angle_deg sweeps are mutually exclusive");
        cfg.compare = std::move(cs);
    }

    if (root.contains("output")) {
        const json& o = root["output"];
        require_keys(o, "output", {"dir", "svg"});
        if (o.contains("dir")) cfg.output.dir = o["dir"].get<std::string>();
        if (o.contains("svg")) {
            if (!o["svg"].is_boolean()) throw ConfigError("output.svg: expected a boolean");
            cfg.output.svg = o["svg"].get<bool>();
        }
    }

    cfg.geometry.validate();
    cfg.params.validate();

    // spectral efficiencies of compared schemes must agree
    if (cfg.compare) {
        const std::size_t n_t = cfg.geometry.led_positions.size();
        const std::size_t eta = cfg.compare->schemes.front().bits(n_t);
        for (const SchemeSpec& s : cfg.compare->schemes)
            if (s.bits(n_t) != eta)
                throw ConfigError("compare: schemes '" + cfg.compare->schemes.front().label + "' and '" +
                                  s.label + "' have different spectral efficiencies");
    }
    return cfg;
}

/// Parse a config file; JSON syntax errors surface with the parser's
/// line/column diagnostics.
inline ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    try {
        return parse_config(root);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace apqsm
