// Copyright 2026 The Flowland Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Subcommand implementations behind the flowland executable. Each returns a
// process exit status and writes diagnostics to the given streams.
#pragma once

#include "flowland/analysis.hpp"
#include "flowland/errors.hpp"
#include "flowland/io/config.hpp"
#include "flowland/io/csv.hpp"
#include "flowland/io/metrics.hpp"
#include "flowland/io/report.hpp"
#include "flowland/io/svg.hpp"
#include "flowland/simulation.hpp"

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace flowland::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
    kOk = 0,
    kSimulationFailure = 1,
    kUsageError = 2,
    kAllCellsFailed = 3,
    kOutputExists = 4,
};

inline constexpr const char* kOutputRootEnv = "FLOWLAND_OUTPUT_ROOT";

struct Options {
    std::string config;
    std::string out;
    std::string input; ///< report directory or plot log
    std::string kind = "timeseries";
    bool overwrite = false;
    unsigned jobs = 1;
    double interval = 0.5;
};

/// Relative output paths are resolved against $FLOWLAND_OUTPUT_ROOT when set.
inline fs::path resolve_output(const std::string& out) {
    const fs::path p(out);
    if (p.is_absolute()) {
        return p;
    }
    if (const char* root = std::getenv(kOutputRootEnv); root != nullptr && *root != '\0') {
        return fs::path(root) / p;
    }
    return p;
}

namespace detail {

/// Creates (or, with overwrite, empties) an artifact directory. Returns
/// false when it already holds files and overwrite is off.
inline bool prepare_dir(const fs::path& dir, bool overwrite) {
    if (fs::exists(dir)) {
        if (!fs::is_directory(dir)) {
            return overwrite ? (fs::remove(dir), fs::create_directories(dir), true) : false;
        }
        if (!fs::is_empty(dir)) {
            if (!overwrite) {
                return false;
            }
            for (const auto& e : fs::directory_iterator(dir)) {
                fs::remove_all(e.path());
            }
        }
        return true;
    }
    fs::create_directories(dir);
    return true;
}

inline void write_artifact(const fs::path& dir, const io::RunConfig& cfg, const SimLog& log) {
    io::write_text_file((dir / "config.ini").string(), io::write_config(cfg));
    io::write_text_file((dir / "log.csv").string(), io::write_log_csv(log));
    io::write_text_file((dir / "metrics.txt").string(),
                        io::write_metrics(io::metrics_record(log, cfg.scenario, cfg.alpha_deg)));
}

inline int config_error(std::ostream& err, const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kUsageError;
}

inline std::string default_out(const Options& opt) {
    return opt.out.empty() ? fs::path(opt.config).stem().string() : opt.out;
}

} // namespace detail

/// Runs one scenario and writes config.ini, log.csv and metrics.txt.
inline int cmd_run(const Options& opt, std::ostream& out, std::ostream& err) {
    io::RunConfig cfg;
    try {
        cfg = io::load_config(opt.config);
    } catch (const Error& e) {
        return detail::config_error(err, e);
    }
    cfg.sweep.reset();
    cfg.tuning.reset();
    const fs::path dir = resolve_output(detail::default_out(opt));
    if (!detail::prepare_dir(dir, opt.overwrite)) {
        err << "output directory " << dir.string() << " is not empty (use --overwrite)\n";
        return kOutputExists;
    }
    const SimLog log = run_scenario(cfg.scenario);
    detail::write_artifact(dir, cfg, log);
    const LandingMetrics m = landing_metrics(log, cfg.scenario);
    out << to_string(log.terminal.kind) << " at t=" << io::format_g(log.terminal.t, 6)
        << " s: rmse_y1=" << io::format_g(m.rmse_y1, 4) << " phi_f=" << io::format_g(m.phi_f_deg(), 4)
        << " deg Y_drift=" << io::format_g(m.Y_drift, 4) << " m -> " << dir.string() << '\n';
    if (log.terminal.kind == TerminalKind::Failure) {
        err << "simulation failed: " << log.terminal.message << '\n';
        return kSimulationFailure;
    }
    return kOk;
}

/// Runs the [sweep] cross product; one artifact directory per cell plus
/// summary.csv, report.txt and report.csv at the top level.
inline int cmd_sweep(const Options& opt, std::ostream& out, std::ostream& err) {
    io::RunConfig cfg;
    std::vector<io::SweepCell> cells;
    try {
        cfg = io::load_config(opt.config);
        cells = io::expand_sweep(cfg);
    } catch (const Error& e) {
        return detail::config_error(err, e);
    }
    const fs::path dir = resolve_output(detail::default_out(opt));
    if (!detail::prepare_dir(dir, opt.overwrite)) {
        err << "output directory " << dir.string() << " is not empty (use --overwrite)\n";
        return kOutputExists;
    }
    std::vector<ScenarioConfig> grid;
    for (const auto& c : cells) {
        grid.push_back(c.config.scenario);
    }
    const auto results = run_sweep(grid, opt.jobs);

    io::write_text_file((dir / "config.ini").string(), io::write_config(cfg));
    std::string summary = "id,name,controller,theta_star,alpha_deg,status,rmse_y1,rmse_y2,phi_f_deg,Y_drift,v_td\n";
    std::size_t succeeded = 0;
    for (const auto& cell : cells) {
        const SweepResult& r = results.at(cell.config.scenario.id);
        const fs::path cdir = dir / cell.name;
        fs::create_directories(cdir);
        std::string status = "error";
        std::string cols = ",,,,";
        if (r.log) {
            detail::write_artifact(cdir, cell.config, *r.log);
            status = std::string(to_string(r.log->terminal.kind));
            const LandingMetrics m = landing_metrics(*r.log, cell.config.scenario);
            cols = io::format_g(m.rmse_y1, io::kMetricDigits) + "," + io::format_g(m.rmse_y2, io::kMetricDigits) +
                   "," + io::format_g(m.phi_f_deg(), io::kMetricDigits) + "," +
                   io::format_g(m.Y_drift, io::kMetricDigits) + "," + io::format_g(m.v_td, io::kMetricDigits);
            if (r.log->terminal.kind != TerminalKind::Failure) {
                ++succeeded;
            } else {
                err << cell.name << ": " << r.log->terminal.message << '\n';
            }
        } else {
            io::write_text_file((cdir / "config.ini").string(), io::write_config(cell.config));
            err << cell.name << ": " << r.error << '\n';
        }
        summary += std::to_string(cell.config.scenario.id) + "," + cell.name + "," +
                   std::string(to_string(cell.config.scenario.controller)) + "," +
                   io::format_g(cell.config.scenario.control.theta_star, io::kMetricDigits) + "," +
                   io::format_g(cell.config.alpha_deg, io::kMetricDigits) + "," + status + "," + cols + "\n";
    }
    io::write_text_file((dir / "summary.csv").string(), summary);

    try {
        const io::ReportTable table = io::build_report(dir);
        io::write_text_file((dir / "report.txt").string(), io::render_text(table));
        io::write_text_file((dir / "report.csv").string(), io::render_csv(table));
        out << io::render_text(table);
        for (const auto& w : table.warnings) {
            err << "warning: " << w << '\n';
        }
    } catch (const Error& e) {
        err << "report: " << e.what() << '\n';
    }
    out << succeeded << "/" << cells.size() << " cells completed -> " << dir.string() << '\n';
    return succeeded == 0 ? kAllCellsFailed : kOk;
}

/// Grid-searches the PID thrust gains (and, when the [tuning] section has
/// moment_/drift_ grids, the slope channels) and writes the tuned config.
inline int cmd_tune_pid(const Options& opt, std::ostream& out, std::ostream& err) {
    io::RunConfig cfg;
    try {
        cfg = io::load_config(opt.config);
        if (!cfg.tuning) {
            throw ConfigError("tuning", opt.config + ": tuning: section [tuning] is required");
        }
    } catch (const Error& e) {
        return detail::config_error(err, e);
    }
    const fs::path dir = resolve_output(detail::default_out(opt));
    if (!detail::prepare_dir(dir, opt.overwrite)) {
        err << "output directory " << dir.string() << " is not empty (use --overwrite)\n";
        return kOutputExists;
    }
    try {
        const io::TuningAxes& axes = *cfg.tuning;
        const PidTuningResult thrust = tune_pid(cfg.scenario, axes.thrust);
        cfg.scenario.pid = thrust.pid;
        std::string report = "thrust_kp = " + io::format_exact(thrust.pid.thrust.kp) +
                             "\nthrust_ki = " + io::format_exact(thrust.pid.thrust.ki) +
                             "\nthrust_kd = " + io::format_exact(thrust.pid.thrust.kd) +
                             "\nrmse_y1 = " + io::format_g(thrust.rmse_y1, io::kMetricDigits) +
                             "\nevaluated = " + std::to_string(thrust.evaluated) +
                             "\nlanded = " + std::to_string(thrust.landed) + "\n";
        if (axes.has_slope_stage()) {
            PidSlopeGrid grid{axes.moment, axes.drift, deg_to_rad(axes.slope_alpha_deg)};
            const PidSlopeTuningResult slope = tune_pid_slope_channels(cfg.scenario, grid);
            cfg.scenario.pid = slope.pid;
            report += "moment_kp = " + io::format_exact(slope.pid.moment.kp) +
                      "\nmoment_ki = " + io::format_exact(slope.pid.moment.ki) +
                      "\nmoment_kd = " + io::format_exact(slope.pid.moment.kd) +
                      "\nrmse_y2 = " + io::format_g(slope.rmse_y2, io::kMetricDigits) +
                      "\ndrift_kp = " + io::format_exact(slope.pid.drift.kp) +
                      "\ndrift_ki = " + io::format_exact(slope.pid.drift.ki) +
                      "\ndrift_kd = " + io::format_exact(slope.pid.drift.kd) +
                      "\nabs_Y_drift = " + io::format_g(slope.abs_drift, io::kMetricDigits) + "\n";
        }
        io::write_text_file((dir / "config.ini").string(), io::write_config(cfg));
        io::write_text_file((dir / "tuning.txt").string(), report);
        out << report;
    } catch (const TuningError& e) {
        err << "tuning failed: " << e.what() << '\n';
        return kSimulationFailure;
    }
    return kOk;
}

/// Renders comparison tables for a sweep directory (or a single run).
inline int cmd_report(const Options& opt, std::ostream& out, std::ostream& err) {
    const fs::path dir(opt.input);
    io::ReportTable table;
    try {
        table = io::build_report(dir);
    } catch (const Error& e) {
        err << "report: " << e.what() << '\n';
        return kUsageError;
    }
    const fs::path target = opt.out.empty() ? dir : resolve_output(opt.out);
    fs::create_directories(target);
    for (const char* name : {"report.txt", "report.csv"}) {
        if (!opt.overwrite && opt.out.size() > 0 && fs::exists(target / name)) {
            err << (target / name).string() << " exists (use --overwrite)\n";
            return kOutputExists;
        }
    }
    io::write_text_file((target / "report.txt").string(), io::render_text(table));
    io::write_text_file((target / "report.csv").string(), io::render_csv(table));
    out << io::render_text(table);
    for (const auto& w : table.warnings) {
        err << "warning: " << w << '\n';
    }
    return kOk;
}

/// Plot context from the config.ini stored next to a log, if any.
inline io::PlotContext plot_context(const fs::path& log_path, double interval) {
    io::PlotContext ctx;
    ctx.snapshot_interval = interval;
    const fs::path cfg_path = log_path.parent_path() / "config.ini";
    if (fs::exists(cfg_path)) {
        const io::RunConfig cfg = io::load_config(cfg_path.string());
        ctx.theta_star = cfg.scenario.control.theta_star;
        ctx.alpha_deg = cfg.alpha_deg;
        ctx.eps_y = cfg.scenario.control.eps_y;
        ctx.bc = cfg.scenario.params.bc;
    }
    return ctx;
}

/// Writes an SVG figure of kind timeseries, slope-landing or trajectory.
inline int cmd_plot(const Options& opt, std::ostream& out, std::ostream& err) {
    using Plotter = std::string (*)(const io::LogTable&, const io::PlotContext&);
    static const std::map<std::string, Plotter> kinds = {
        {"timeseries", &io::plot_timeseries},
        {"slope-landing", &io::plot_slope_landing},
        {"trajectory", &io::plot_trajectory},
    };
    const auto it = kinds.find(opt.kind);
    if (it == kinds.end()) {
        err << "unknown plot kind '" << opt.kind << "' (timeseries, slope-landing, trajectory)\n";
        return kUsageError;
    }
    if (!(opt.interval > 0.0)) {
        err << "--interval must be positive\n";
        return kUsageError;
    }
    const fs::path log_path(opt.input);
    const fs::path target =
        opt.out.empty() ? log_path.parent_path() / (opt.kind + ".svg") : resolve_output(opt.out);
    if (fs::exists(target) && !opt.overwrite) {
        err << target.string() << " exists (use --overwrite)\n";
        return kOutputExists;
    }
    try {
        const io::LogTable log = io::read_log_csv(log_path.string());
        const std::string svg = it->second(log, plot_context(log_path, opt.interval));
        if (target.has_parent_path()) {
            fs::create_directories(target.parent_path());
        }
        io::write_text_file(target.string(), svg);
    } catch (const Error& e) {
        err << "plot: " << e.what() << '\n';
        return kUsageError;
    }
    out << "wrote " << target.string() << '\n';
    return kOk;
}

} // namespace flowland::cli
