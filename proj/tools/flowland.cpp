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


#include "flowland/cli.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>

int main(int argc, char** argv) {
    using namespace flowland::cli;

    CLI::App app{"flowland: divergence-based planetary landing simulator"};
    app.require_subcommand(1);
    Options opt;

    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", opt.out,
                        "Output path; relative paths are resolved against $FLOWLAND_OUTPUT_ROOT when set");
        sub->add_flag("--overwrite", opt.overwrite, "Replace existing output");
    };

    CLI::App* run = app.add_subcommand("run", "Simulate one scenario");
    run->add_option("--config", opt.config, "Scenario INI file")->required();
    add_out(run);

    CLI::App* sweep = app.add_subcommand("sweep", "Simulate the [sweep] grid of a config");
    sweep->add_option("--config", opt.config, "Scenario INI file with a [sweep] section")->required();
    sweep->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
    add_out(sweep);

    CLI::App* tune = app.add_subcommand("tune-pid", "Grid-search PID gains from the [tuning] section");
    tune->add_option("--config", opt.config, "Scenario INI file with a [tuning] section")->required();
    add_out(tune);

    CLI::App* report = app.add_subcommand("report", "Render comparison tables for a sweep or run directory");
    report->add_option("dir", opt.input, "Artifact directory")->required();
    add_out(report);

    CLI::App* plot = app.add_subcommand("plot", "Render an SVG figure from a log CSV");
    plot->add_option("log", opt.input, "log.csv produced by run or sweep")->required();
    plot->add_option("--kind", opt.kind, "timeseries | slope-landing | trajectory");
    plot->add_option("--interval", opt.interval, "Trajectory snapshot interval [s]");
    add_out(plot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (run->parsed()) {
            return cmd_run(opt, std::cout, std::cerr);
        }
        if (sweep->parsed()) {
            return cmd_sweep(opt, std::cout, std::cerr);
        }
        if (tune->parsed()) {
            return cmd_tune_pid(opt, std::cout, std::cerr);
        }
        if (report->parsed()) {
            return cmd_report(opt, std::cout, std::cerr);
        }
        return cmd_plot(opt, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSimulationFailure;
    }
}
