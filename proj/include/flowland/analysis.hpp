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

// Landing metrics, exponential-decay fitting, affine output-model
// validation, and deterministic PID tuning.
#pragma once

#include "flowland/control.hpp"
#include "flowland/dynamics.hpp"
#include "flowland/errors.hpp"
#include "flowland/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

namespace flowland {

/// Rows [0, kColdStartTicks) are excluded from tracking RMSE: the rate
/// estimator has no difference yet, so the controller only holds trim.
inline constexpr std::size_t kColdStartTicks = 2;

struct LandingMetrics {
    double rmse_y1 = std::numeric_limits<double>::quiet_NaN();
    double rmse_y2 = std::numeric_limits<double>::quiet_NaN();
    double phi_f = 0.0;   ///< roll at touchdown [rad]; converted to degrees only when reported
    double Y_drift = 0.0; ///< [m], negative means toward -Y
    double v_td = 0.0;    ///< |hdot| at touchdown [m/s]
    double decay_slope = std::numeric_limits<double>::quiet_NaN();
    bool complete = false; ///< false unless the run ended in touchdown

    double phi_f_deg() const { return rad_to_deg(phi_f); }
};

/// sqrt(mean((x - target)^2)).
inline double rmse(std::span<const double> series, double target) {
    if (series.empty()) {
        throw MetricError("rmse: empty series");
    }
    double acc = 0.0;
    for (double x : series) {
        const double e = x - target;
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(series.size()));
}

/// Least-squares slope of ln(h) against t over [start_frac, end_frac] of the
/// sampled time span.
inline double exp_decay_fit(std::span<const double> t, std::span<const double> h, double start_frac = 0.2,
                            double end_frac = 0.8) {
    if (t.size() != h.size() || t.size() < 2) {
        throw MetricError("exp_decay_fit: need at least two paired samples");
    }
    if (!(0.0 <= start_frac && start_frac < end_frac && end_frac <= 1.0)) {
        throw MetricError("exp_decay_fit: window fractions must satisfy 0 <= start < end <= 1");
    }
    const double t0 = t.front();
    const double span = t.back() - t0;
    const double lo = t0 + start_frac * span;
    const double hi = t0 + end_frac * span;

    double n = 0.0, st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < lo || t[i] > hi) {
            continue;
        }
        if (!(h[i] > 0.0)) {
            throw MetricError("exp_decay_fit: non-positive height in window");
        }
        const double y = std::log(h[i]);
        n += 1.0;
        st += t[i];
        sy += y;
        stt += t[i] * t[i];
        sty += t[i] * y;
    }
    if (n < 2.0) {
        throw MetricError("exp_decay_fit: fewer than two samples in window");
    }
    const double denom = n * stt - st * st;
    if (!(denom > 0.0)) {
        throw MetricError("exp_decay_fit: degenerate time window");
    }
    return (n * sty - st * sy) / denom;
}

/// Fit over the logged center clearance h(t).
inline double exp_decay_fit(const SimLog& log, double start_frac = 0.2, double end_frac = 0.8) {
    std::vector<double> t, h;
    t.reserve(log.rows.size());
    h.reserve(log.rows.size());
    for (const auto& r : log.rows) {
        t.push_back(r.t);
        h.push_back(r.clr.h);
    }
    return exp_decay_fit(t, h, start_frac, end_frac);
}

inline LandingMetrics landing_metrics(const SimLog& log, const ScenarioConfig& cfg) {
    LandingMetrics m;
    m.complete = log.touched_down();
    const VehicleState start = log.rows.empty() ? cfg.initial_state() : log.rows.front().state;
    m.phi_f = log.terminal.state.phi;
    m.Y_drift = log.terminal.state.Y - start.Y;
    m.v_td = std::abs(log.terminal.clr.hdot);

    if (log.rows.size() > kColdStartTicks) {
        std::vector<double> y1, y2;
        for (std::size_t i = kColdStartTicks; i < log.rows.size(); ++i) {
            y1.push_back(log.rows[i].obs.y1);
            y2.push_back(log.rows[i].obs.y2);
        }
        m.rmse_y1 = rmse(y1, cfg.control.theta_star);
        m.rmse_y2 = rmse(y2, 0.0);
    } else {
        m.complete = false;
    }
    try {
        m.decay_slope = exp_decay_fit(log);
    } catch (const MetricError&) {
        m.decay_slope = std::numeric_limits<double>::quiet_NaN();
    }
    return m;
}

/// Right-hand sides of the affine output-rate model, including the
/// state-only terms zeta1..zeta3, evaluated with exact clearances.
struct AffineModelRates {
    double y1dot = 0.0;
    double y2dot = 0.0;
    double y3dot = 0.0;
};

inline AffineModelRates affine_output_model(const VehicleState& s, const ControlCommand& u, const Terrain& terrain,
                                            const VehicleParams& p) {
    const Clearances c = clearance_geometry(s, terrain, p);
    const double tan_a = std::tan(terrain.alpha);
    const double thR = c.hRdot / c.hR;
    const double thL = c.hLdot / c.hL;
    const double zeta1 = -thR * thR / 2.0 - thL * thL / 2.0;
    const double zeta2 = -thR * thR + thL * thL;
    const double zeta3 = -s.Ydot * c.hdot / (c.h * c.h);
    AffineModelRates r;
    r.y1dot = (1.0 + s.phi * tan_a) / (p.m * c.h) * u.u1 - p.g / c.h + zeta1;
    r.y2dot = 2.0 * p.bc / (p.Ixx * c.h) * u.u2 + zeta2;
    r.y3dot = -std::sin(s.phi) / (p.m * c.h) * u.u1 + zeta3;
    return r;
}

/// Per-interval comparison of differenced outputs with the affine model.
struct AffineResidual {
    std::vector<double> t;        ///< interval midpoints
    std::vector<double> measured1, measured2, measured3;
    std::vector<double> r1, r2, r3; ///< measured - model
};

/// For each logged interval [t_k, t_k+1] the measured rate is the forward
/// difference of the outputs and the model rate is the trapezoidal average
/// of the model at both ends under the held command u_k.
inline AffineResidual affine_model_residual(const SimLog& log, const ScenarioConfig& cfg) {
    AffineResidual out;
    const VehicleParams plant = cfg.plant();
    for (std::size_t k = 0; k + 1 < log.rows.size(); ++k) {
        const LogRow& a = log.rows[k];
        const LogRow& b = log.rows[k + 1];
        const double dt = b.t - a.t;
        const AffineModelRates ma = affine_output_model(a.state, a.cmd, cfg.terrain, plant);
        const AffineModelRates mb = affine_output_model(b.state, a.cmd, cfg.terrain, plant);
        const double m1 = (b.obs.y1 - a.obs.y1) / dt;
        const double m2 = (b.obs.y2 - a.obs.y2) / dt;
        const double m3 = (b.obs.y3 - a.obs.y3) / dt;
        out.t.push_back(0.5 * (a.t + b.t));
        out.measured1.push_back(m1);
        out.measured2.push_back(m2);
        out.measured3.push_back(m3);
        out.r1.push_back(m1 - 0.5 * (ma.y1dot + mb.y1dot));
        out.r2.push_back(m2 - 0.5 * (ma.y2dot + mb.y2dot));
        out.r3.push_back(m3 - 0.5 * (ma.y3dot + mb.y3dot));
    }
    return out;
}

inline double median_abs(std::vector<double> v) {
    if (v.empty()) {
        throw MetricError("median_abs: empty series");
    }
    for (double& x : v) {
        x = std::abs(x);
    }
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) {
        return *mid;
    }
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

/// Thrust-channel gain grid for tune_pid.
struct PidTuningGrid {
    std::vector<double> kp;
    std::vector<double> ki;
    std::vector<double> kd;

    std::size_t size() const { return kp.size() * ki.size() * kd.size(); }
};

struct PidTuningResult {
    PidConfig pid;
    double rmse_y1 = 0.0;
    std::size_t evaluated = 0;
    std::size_t landed = 0;
};

/// Exhaustive search over the thrust-channel gains, minimizing y1 RMSE for
/// theta_star = -0.2 on flat ground. Candidates that do not touch down are
/// discarded. Ties go to the lexicographically smallest (kp, ki, kd).
/// Moment and drift gains are taken from base.pid unchanged.
inline PidTuningResult tune_pid(const ScenarioConfig& base, const PidTuningGrid& grid) {
    if (grid.size() == 0) {
        throw TuningError("tune_pid: empty gain grid");
    }
    std::vector<std::tuple<double, double, double>> candidates;
    for (double kp : grid.kp) {
        for (double ki : grid.ki) {
            for (double kd : grid.kd) {
                candidates.emplace_back(kp, ki, kd);
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    ScenarioConfig cfg = base;
    cfg.controller = ControllerKind::Pid;
    cfg.control.theta_star = -0.2;
    cfg.terrain.alpha = 0.0;

    PidTuningResult best;
    bool found = false;
    for (const auto& [kp, ki, kd] : candidates) {
        cfg.pid.thrust.kp = kp;
        cfg.pid.thrust.ki = ki;
        cfg.pid.thrust.kd = kd;
        ++best.evaluated;
        SimLog log;
        try {
            log = run_scenario(cfg);
        } catch (const Error&) {
            continue;
        }
        if (!log.touched_down()) {
            continue;
        }
        const LandingMetrics m = landing_metrics(log, cfg);
        if (!m.complete || !std::isfinite(m.rmse_y1)) {
            continue;
        }
        ++best.landed;
        if (!found || m.rmse_y1 < best.rmse_y1) {
            best.pid = cfg.pid;
            best.rmse_y1 = m.rmse_y1;
            found = true;
        }
    }
    if (!found) {
        throw TuningError("tune_pid: no candidate in the grid landed");
    }
    return best;
}

/// Moment- and drift-channel grids for tune_pid_slope_channels.
struct PidSlopeGrid {
    PidTuningGrid moment;
    PidTuningGrid drift;
    double alpha = deg_to_rad(20.0);
};

struct PidSlopeTuningResult {
    PidConfig pid;
    double rmse_y2 = 0.0;  ///< of the selected moment gains, drift compensation off
    double abs_drift = 0.0; ///< |Y_drift| of the final configuration
};

namespace detail {

template <typename Objective>
std::optional<std::pair<PidGains, double>> grid_minimize(const PidTuningGrid& grid, PidGains base,
                                                         Objective&& objective) {
    std::vector<std::tuple<double, double, double>> candidates;
    for (double kp : grid.kp) {
        for (double ki : grid.ki) {
            for (double kd : grid.kd) {
                candidates.emplace_back(kp, ki, kd);
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::optional<std::pair<PidGains, double>> best;
    for (const auto& [kp, ki, kd] : candidates) {
        PidGains g = base;
        g.kp = kp;
        g.ki = ki;
        g.kd = kd;
        const std::optional<double> cost = objective(g);
        if (cost && std::isfinite(*cost) && (!best || *cost < best->second)) {
            best = std::make_pair(g, *cost);
        }
    }
    return best;
}

} // namespace detail

/// Tunes the two channels that only act on slopes, each on the quantity it
/// exists to reduce, at a single representative slope:
///   1. moment gains minimize rmse_y2 with drift compensation disabled;
///   2. drift gains minimize |Y_drift| with the moment gains frozen.
/// Thrust gains come from base.pid. Same tie-break as tune_pid.
inline PidSlopeTuningResult tune_pid_slope_channels(const ScenarioConfig& base, const PidSlopeGrid& grid) {
    if (grid.moment.size() == 0 || grid.drift.size() == 0) {
        throw TuningError("tune_pid_slope_channels: empty gain grid");
    }
    ScenarioConfig cfg = base;
    cfg.controller = ControllerKind::Pid;
    cfg.control.theta_star = -0.2;
    cfg.terrain.alpha = grid.alpha;

    auto landed = [](const ScenarioConfig& c) -> std::optional<LandingMetrics> {
        try {
            const SimLog log = run_scenario(c);
            if (!log.touched_down()) {
                return std::nullopt;
            }
            return landing_metrics(log, c);
        } catch (const Error&) {
            return std::nullopt;
        }
    };

    ScenarioConfig moment_cfg = cfg;
    moment_cfg.control.drift_compensation = false;
    const auto moment = detail::grid_minimize(grid.moment, cfg.pid.moment, [&](const PidGains& g) {
        moment_cfg.pid.moment = g;
        const auto m = landed(moment_cfg);
        return m ? std::optional<double>(m->rmse_y2) : std::nullopt;
    });
    if (!moment) {
        throw TuningError("tune_pid_slope_channels: no moment candidate landed");
    }

    ScenarioConfig drift_cfg = cfg;
    drift_cfg.control.drift_compensation = true;
    drift_cfg.pid.moment = moment->first;
    const auto drift = detail::grid_minimize(grid.drift, cfg.pid.drift, [&](const PidGains& g) {
        drift_cfg.pid.drift = g;
        const auto m = landed(drift_cfg);
        return m ? std::optional<double>(std::abs(m->Y_drift)) : std::nullopt;
    });
    if (!drift) {
        throw TuningError("tune_pid_slope_channels: no drift candidate landed");
    }

    PidSlopeTuningResult out;
    out.pid = cfg.pid;
    out.pid.moment = moment->first;
    out.pid.drift = drift->first;
    out.rmse_y2 = moment->second;
    out.abs_drift = drift->second;
    return out;
}

} // namespace flowland
