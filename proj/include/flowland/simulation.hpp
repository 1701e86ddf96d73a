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

// Closed-loop scenario runner: dynamics, sensing and control stepped at a
// fixed rate into a uniformly sampled log.
#pragma once

#include "flowland/control.hpp"
#include "flowland/dynamics.hpp"
#include "flowland/errors.hpp"
#include "flowland/sensing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace flowland {

enum class ControllerKind { Indi, Pid };

inline std::string_view to_string(ControllerKind kind) { return kind == ControllerKind::Indi ? "indi" : "pid"; }

struct ScenarioConfig {
    std::size_t id = 0; ///< ordinal position in its grid
    Terrain terrain;
    VehicleParams params;      ///< what the controller believes
    double mass_scale = 1.0;   ///< true plant mass = params.m * mass_scale
    ControllerKind controller = ControllerKind::Indi;
    ControllerConfig control;
    PidConfig pid;
    double h0 = 4.0;           ///< initial clearance of the body center [m]
    double descent_kick = 1.0; ///< initial Zdot = descent_kick * theta_star * h0
    std::optional<VehicleState> initial; ///< overrides the h0/kick hover start
    double dt = 0.002;
    double t_max = 120.0;
    double touchdown_threshold = 0.03;

    VehicleParams plant() const {
        VehicleParams p = params;
        p.m *= mass_scale;
        return p;
    }

    /// Level hover start h0 above the terrain at Y = 0, with a descent kick.
    VehicleState initial_state() const {
        if (initial) {
            return *initial;
        }
        VehicleState s;
        s.Z = h0;
        s.Zdot = descent_kick * control.theta_star * h0;
        return s;
    }

    /// Empty when valid; otherwise the name of the first offending field.
    std::string invalid_field() const {
        if (!params.valid()) {
            return "vehicle";
        }
        if (!(mass_scale > 0.0)) {
            return "vehicle.mass_scale";
        }
        if (!terrain.valid()) {
            return "terrain.alpha";
        }
        if (!control.valid()) {
            return "controller";
        }
        if (!pid.valid()) {
            return "pid";
        }
        if (!(dt > 0.0) || !std::isfinite(dt)) {
            return "sim.dt";
        }
        if (!(t_max > 0.0)) {
            return "sim.t_max";
        }
        if (!(touchdown_threshold >= 0.0)) {
            return "sim.touchdown_threshold";
        }
        if (!initial && !std::isfinite(h0)) {
            return "sim.h0";
        }
        return {};
    }
};

struct LogRow {
    double t = 0.0;
    VehicleState state;
    Clearances clr;
    Observations obs;
    ControlCommand cmd;
    Phase phase = Phase::Descend;
};

enum class TerminalKind { Touchdown, Timeout, Failure };

inline std::string_view to_string(TerminalKind kind) {
    switch (kind) {
    case TerminalKind::Touchdown:
        return "touchdown";
    case TerminalKind::Timeout:
        return "timeout";
    case TerminalKind::Failure:
        return "failure";
    }
    return "failure";
}

struct TerminalEvent {
    TerminalKind kind = TerminalKind::Timeout;
    double t = 0.0;
    VehicleState state;    ///< state when the run ended
    Clearances clr;        ///< exact geometry at that state
    Phase phase = Phase::Descend; ///< Contact for touchdown, else the last supervisor phase
    std::string message;
};

struct SimLog {
    double dt = 0.0;
    std::vector<LogRow> rows;
    TerminalEvent terminal;

    bool touched_down() const noexcept { return terminal.kind == TerminalKind::Touchdown; }
};

namespace detail {

struct AnyController {
    std::optional<IndiController> indi;
    std::optional<PidController> pid;

    ControlCommand tick(const VehicleState& s, const Observations& o, const OutputRates& r, bool ready, double dt) {
        return indi ? indi->tick(s, o, r, ready) : pid->tick(s, o, r, dt);
    }
    const SupervisorState& supervisor() const { return indi ? indi->supervisor() : pid->supervisor(); }
};

} // namespace detail

/// Runs one closed-loop landing. Each tick: touchdown check, clearances,
/// observation, rate estimate, supervisor + control, RK4 step. The run ends
/// at touchdown, at t_max, or at the first numerical failure (the log is
/// kept up to that point). A start already within the touchdown threshold
/// ends at t = 0 with no rows.
inline SimLog run_scenario(const ScenarioConfig& cfg) {
    if (const std::string bad = cfg.invalid_field(); !bad.empty()) {
        throw ConfigError(bad, "run_scenario: invalid field " + bad);
    }
    const VehicleParams plant = cfg.plant();
    const ControlCommand trim{cfg.params.m * cfg.params.g, 0.0};

    detail::AnyController controller;
    if (cfg.controller == ControllerKind::Indi) {
        controller.indi.emplace(cfg.control, cfg.params, cfg.terrain, trim);
    } else {
        controller.pid.emplace(cfg.pid, cfg.control, trim.u1);
    }
    OutputRateEstimator estimator(cfg.control.tau_f);

    SimLog log;
    log.dt = cfg.dt;
    VehicleState state = cfg.initial_state();
    const auto max_ticks = static_cast<std::size_t>(std::ceil(cfg.t_max / cfg.dt - 1e-9));
    log.rows.reserve(std::min<std::size_t>(max_ticks, 1u << 20));

    auto finish = [&](TerminalKind kind, double t, std::string message = {}) {
        log.terminal.kind = kind;
        log.terminal.t = t;
        log.terminal.state = state;
        log.terminal.clr = clearance_geometry(state, cfg.terrain, plant);
        log.terminal.phase = kind == TerminalKind::Touchdown ? Phase::Contact : controller.supervisor().phase;
        log.terminal.message = std::move(message);
        return log;
    };

    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        if (touchdown_check(state, cfg.terrain, plant, cfg.touchdown_threshold, t)) {
            return finish(TerminalKind::Touchdown, t);
        }
        if (k >= max_ticks) {
            return finish(TerminalKind::Timeout, t);
        }
        try {
            LogRow row;
            row.t = t;
            row.state = state;
            row.clr = clearances(state, cfg.terrain, plant);
            row.obs = observe(row.clr, state);
            const OutputRates rates = estimator.update(row.obs, cfg.dt);
            row.cmd = controller.tick(state, row.obs, rates, estimator.ready(), cfg.dt);
            row.phase = controller.supervisor().phase;
            log.rows.push_back(row);
            state = step(state, row.cmd, plant, cfg.dt);
        } catch (const Error& e) {
            return finish(TerminalKind::Failure, t, e.what());
        }
    }
}

/// Outcome of one sweep cell: the full log, or the error that stopped it
/// from running at all.
struct SweepResult {
    ScenarioConfig config;
    std::optional<SimLog> log;
    std::string error;
};

/// Runs every scenario independently (in parallel when jobs > 1). Results
/// are keyed by scenario id, so ordering never depends on scheduling.
inline std::map<std::size_t, SweepResult> run_sweep(const std::vector<ScenarioConfig>& grid, unsigned jobs = 1) {
    if (grid.empty()) {
        throw ConfigError("sweep", "run_sweep: empty grid");
    }
    std::vector<std::size_t> ids;
    for (const auto& c : grid) {
        ids.push_back(c.id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw ConfigError("sweep", "run_sweep: duplicate scenario id");
    }

    std::vector<SweepResult> results(grid.size());
    auto run_one = [&](std::size_t i) {
        results[i].config = grid[i];
        try {
            results[i].log = run_scenario(grid[i]);
        } catch (const std::exception& e) {
            results[i].error = e.what();
        }
    };

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(grid.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            run_one(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < grid.size(); i = next++) {
                    run_one(i);
                }
            });
        }
        for (auto& th : workers) {
            th.join();
        }
    }

    std::map<std::size_t, SweepResult> keyed;
    for (auto& r : results) {
        const std::size_t id = r.config.id;
        keyed.emplace(id, std::move(r));
    }
    return keyed;
}

} // namespace flowland
