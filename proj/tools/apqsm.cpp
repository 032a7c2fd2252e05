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
//
// Experiment runner. Subcommands:
//   channel   — export the LoS channel gain matrix as CSV
//   sweep     — Monte Carlo SER sweep plus analytic bounds for one scheme
//   optimize  — power-allocation trust-region traces per SNR
//   compare   — combined sweep across schemes / LED separations / semi-angles

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apqsm/config.hpp"
#include "apqsm/csv.hpp"
#include "apqsm/experiment.hpp"
#include "apqsm/svg.hpp"

namespace fs = std::filesystem;
using namespace apqsm;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t workers = 1;
    bool allow_unreliable = false;
};

void add_common(CLI::App* cmd, CommonArgs& args)
{
    cmd->add_option("--config", args.config_path, "experiment config (JSON)")->required();
    cmd->add_option("--out", args.out_dir, "output directory (default: config output.dir)");
    cmd->add_option("--seed", args.seed, "override the master seed")->each([&](const std::string&) {
        args.seed_given = true;
    });
    cmd->add_option("--workers", args.workers, "Monte Carlo worker threads")->check(CLI::PositiveNumber);
    cmd->add_flag("--allow-unreliable", args.allow_unreliable,
                  "demote under-resolved SER points to a warning");
}

ExperimentConfig load_with_overrides(const CommonArgs& args)
{
    ExperimentConfig cfg = load_config(args.config_path);
    if (const char* env = std::getenv("APQSM_SEED")) cfg.seed = std::stoull(env);
    if (args.seed_given) cfg.seed = args.seed;
    return cfg;
}

fs::path prepare_out_dir(const CommonArgs& args, const ExperimentConfig& cfg)
{
    fs::path dir = args.out_dir.empty() ? fs::path(cfg.output.dir) : fs::path(args.out_dir);
    fs::create_directories(dir);
    return dir;
}

std::string fmt(double v) { return format_g(v); }

void write_ser_curve_csv(const fs::path& path, const SerCurve& curve, const std::vector<BoundRow>& bounds,
                         bool two_step)
{
    CsvWriter csv(path.string());
    csv.row({"snr_db", "trials", "errors", "ser", "ci_lo", "ci_hi", "bound"});
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const SerPoint& p = curve.points[i];
        const double bound = two_step ? bounds[i].two_step_bound : bounds[i].joint_bound;
        csv.row({fmt(p.snr_db), std::to_string(p.trials), std::to_string(p.errors), format_sci17(p.ser),
                 format_sci17(p.ci.lo), format_sci17(p.ci.hi), format_sci17(bound)});
    }
}

int finish(bool any_unreliable, bool allow_unreliable)
{
    if (any_unreliable) {
        if (!allow_unreliable) {
            std::cerr << "error: some SER points did not reach min_errors before the trial cap;"
                         " rerun with --allow-unreliable to accept them\n";
            return 2;
        }
        std::cerr << "warning: some SER points did not reach min_errors before the trial cap\n";
    }
    return 0;
}

int cmd_channel(const CommonArgs& args)
{
    const ExperimentConfig cfg = load_with_overrides(args);
    const fs::path dir = prepare_out_dir(args, cfg);
    const ChannelMatrix h = build_channel_matrix(cfg.geometry, cfg.params);
    CsvWriter csv((dir / "channel.csv").string());
    for (std::size_t r = 0; r < h.n_rx(); ++r) {
        std::vector<std::string> row;
        row.reserve(h.n_tx());
        for (std::size_t l = 0; l < h.n_tx(); ++l) row.push_back(format_sci17(h(r, l)));
        csv.row(row);
    }
    std::cout << "wrote " << (dir / "channel.csv").string() << " (" << h.n_rx() << "x" << h.n_tx() << ")\n";
    return 0;
}

int cmd_sweep(const CommonArgs& args)
{
    const ExperimentConfig cfg = load_with_overrides(args);
    const fs::path dir = prepare_out_dir(args, cfg);
    const SweepExperimentResult res = run_sweep_experiment(cfg, args.workers);

    std::vector<PlotSeries> series;
    if (res.joint) {
        write_ser_curve_csv(dir / "ser_joint.csv", *res.joint, res.bounds, false);
        PlotSeries s{"joint (sim)", {}, false};
        for (const SerPoint& p : res.joint->points) s.xy.emplace_back(p.snr_db, p.ser);
        series.push_back(std::move(s));
    }
    if (res.two_step) {
        write_ser_curve_csv(dir / "ser_two_step.csv", *res.two_step, res.bounds, true);
        PlotSeries s{"two-step (sim)", {}, false};
        for (const SerPoint& p : res.two_step->points) s.xy.emplace_back(p.snr_db, p.ser);
        series.push_back(std::move(s));
    }
    {
        CsvWriter csv((dir / "bounds.csv").string());
        csv.row({"snr_db", "joint_bound", "index_bound", "cond_symbol_bound", "two_step_bound"});
        for (const BoundRow& b : res.bounds)
            csv.row({fmt(b.snr_db), format_sci17(b.joint_bound), format_sci17(b.index_bound),
                     format_sci17(b.cond_symbol_bound), format_sci17(b.two_step_bound)});
        PlotSeries bj{"joint (bound)", {}, true}, bt{"two-step (bound)", {}, true};
        for (const BoundRow& b : res.bounds) {
            bj.xy.emplace_back(b.snr_db, std::min(b.joint_bound, 1.0));
            bt.xy.emplace_back(b.snr_db, std::min(b.two_step_bound, 1.0));
        }
        if (res.joint) series.push_back(std::move(bj));
        if (res.two_step) series.push_back(std::move(bt));
    }
    if (cfg.output.svg)
        write_line_plot_svg((dir / "sweep.svg").string(), cfg.scheme.label, "transmit SNR (dB)", series);
    std::cout << "wrote SER sweep outputs to " << dir.string() << "\n";
    return finish(!res.all_reliable(), args.allow_unreliable);
}

int cmd_optimize(const CommonArgs& args)
{
    const ExperimentConfig cfg = load_with_overrides(args);
    const fs::path dir = prepare_out_dir(args, cfg);
    const std::vector<OptimizeRun> runs = run_optimize_experiment(cfg);

    std::vector<PlotSeries> series;
    CsvWriter summary((dir / "scp_summary.csv").string());
    summary.row({"snr_db", "iterations", "converged", "best_performance_iteration", "f_a_final", "p1", "p2",
                 "p3"});
    for (const OptimizeRun& run : runs) {
        char name[64];
        std::snprintf(name, sizeof(name), "scp_trace_snr%g.csv", run.snr_db);
        CsvWriter csv((dir / name).string());
        csv.row({"l", "p1", "p2", "p3", "delta", "f_a", "r", "accepted"});
        for (const ScpIterate& it : run.result.trace)
            csv.row({std::to_string(it.iteration), format_sci17(it.p[0]), format_sci17(it.p[1]),
                     format_sci17(it.p[2]), format_sci17(it.delta), format_sci17(it.objective),
                     std::isnan(it.ratio) ? std::string() : format_sci17(it.ratio),
                     it.accepted ? "1" : "0"});
        summary.row({fmt(run.snr_db), std::to_string(run.result.iterations),
                     run.result.converged ? "1" : "0",
                     std::to_string(run.result.best_performance_iteration()),
                     format_sci17(run.result.objective), format_sci17(run.result.p[0]),
                     format_sci17(run.result.p[1]), format_sci17(run.result.p[2])});
        PlotSeries s{"SNR " + std::string(fmt(run.snr_db)) + " dB", {}, false};
        for (const ScpIterate& it : run.result.trace)
            s.xy.emplace_back(static_cast<double>(it.iteration), it.objective);
        series.push_back(std::move(s));
    }

    // echo the config with the last optimized allocation for reuse
    {
        std::ifstream in(args.config_path);
        json root = json::parse(in);
        const auto& p = runs.back().result.p;
        root["power"] = {p[0], p[1], p[2]};
        std::ofstream out(dir / "optimized_config.json", std::ios::binary);
        out << root.dump(2) << "\n";
    }
    if (cfg.output.svg)
        write_line_plot_svg((dir / "convergence.svg").string(), "trust-region convergence", "iteration",
                            series);
    std::cout << "wrote SCP traces to " << dir.string() << "\n";
    return 0;
}

int cmd_compare(const CommonArgs& args)
{
    const ExperimentConfig cfg = load_with_overrides(args);
    const fs::path dir = prepare_out_dir(args, cfg);
    const std::vector<CompareRow> rows = run_compare_experiment(cfg, args.workers);

    CsvWriter csv((dir / "compare.csv").string());
    csv.row({"scheme", "detector", "d_tx_m", "semi_angle_deg", "snr_db", "trials", "errors", "ser", "ci_lo",
             "ci_hi", "joint_bound"});
    bool any_unreliable = false;
    for (const CompareRow& r : rows) {
        csv.row({r.label, r.detector, std::isnan(r.d_tx_m) ? std::string() : fmt(r.d_tx_m),
                 std::isnan(r.semi_angle_deg) ? std::string() : fmt(r.semi_angle_deg), fmt(r.point.snr_db),
                 std::to_string(r.point.trials), std::to_string(r.point.errors), format_sci17(r.point.ser),
                 format_sci17(r.point.ci.lo), format_sci17(r.point.ci.hi), format_sci17(r.joint_bound)});
        any_unreliable = any_unreliable || !r.point.reliable;
    }

    if (cfg.output.svg) {
        const bool semi_axis = cfg.compare && !cfg.compare->semi_angle_deg.empty();
        std::map<std::string, PlotSeries> by_key;
        for (const CompareRow& r : rows) {
            std::string key = r.label;
            if (!std::isnan(r.d_tx_m)) key += " d=" + std::string(fmt(r.d_tx_m)) + "m";
            if (r.detector == "two-step") key += " (two-step)";
            double x = r.point.snr_db;
            if (semi_axis) {
                key += " @" + std::string(fmt(r.point.snr_db)) + "dB";
                x = r.semi_angle_deg;
            }
            PlotSeries& s = by_key[key];
            s.label = key;
            s.xy.emplace_back(x, r.point.ser);
        }
        std::vector<PlotSeries> series;
        for (auto& [k, s] : by_key) {
            std::sort(s.xy.begin(), s.xy.end());
            series.push_back(std::move(s));
        }
        write_line_plot_svg((dir / "compare.svg").string(), "scheme comparison",
                            semi_axis ? "LED semi-angle (deg)" : "transmit SNR (dB)", series);
    }
    std::cout << "wrote comparison outputs to " << dir.string() << "\n";
    return finish(any_unreliable, args.allow_unreliable);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"link-level experiments for superposed-PAM spatial modulation over indoor VLC"};
    app.require_subcommand(1);

    CommonArgs channel_args, sweep_args, optimize_args, compare_args;
    CLI::App* channel = app.add_subcommand("channel", "export the LoS channel matrix");
    add_common(channel, channel_args);
    CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo SER sweep with analytic bounds");
    add_common(sweep, sweep_args);
    CLI::App* optimize = app.add_subcommand("optimize", "power-allocation convergence traces");
    add_common(optimize, optimize_args);
    CLI::App* compare = app.add_subcommand("compare", "combined sweep across schemes");
    add_common(compare, compare_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (channel->parsed()) return cmd_channel(channel_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (optimize->parsed()) return cmd_optimize(optimize_args);
        if (compare->parsed()) return cmd_compare(compare_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
