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

// Incremental nonlinear dynamic inversion on flow-divergence outputs, the
// touchdown supervisor (roll alignment + ventral drift compensation), a PID
// baseline sharing the same supervisor, and the constant-divergence
// reference trajectory.
#pragma once

#include "flowland/dynamics.hpp"
#include "flowland/errors.hpp"
#include "flowland/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

namespace flowland {

enum class EffectivenessMode { TrueState, FixedNominal };

inline std::string_view to_string(EffectivenessMode mode) {
    return mode == EffectivenessMode::TrueState ? "true_state" : "fixed_nominal";
}

struct ControllerConfig {
    double theta_star = -0.2; ///< divergence setpoint [1/s], negative
    double k1 = 2.0;
    double k2 = 5.0;
    double k3 = 1.0;
    double eps_y = 0.05;   ///< roll activation threshold on |y2| [1/s]
    double eps_phi = 0.02; ///< minimum |sin(phi)| for the ventral inversion
    EffectivenessMode effectiveness_mode = EffectivenessMode::TrueState;
    double nominal_h = 2.0; ///< clearance used by fixed_nominal [m]
    double u1_max = 4.0 * 9.81;
    double u2_max = 1.0;
    double tau_f = 0.02;             ///< output-rate low-pass time constant [s]
    bool drift_compensation = true;  ///< allow the ventral channel to latch on

    bool valid() const noexcept {
        return theta_star < 0.0 && k1 > 0.0 && k2 > 0.0 && k3 > 0.0 && eps_y > 0.0 && eps_phi > 0.0 &&
               nominal_h > 0.0 && u1_max > 0.0 && u2_max > 0.0 && tau_f >= 0.0;
    }
};

struct VirtualInputs {
    double nu1 = 0.0;
    double nu2 = 0.0;
    double nu3 = 0.0;
};

struct ControlIncrements {
    double du1 = 0.0;
    double du2 = 0.0;
    double du1p = 0.0;
    bool singular = false; ///< an effectiveness term was unusable; increments zeroed
};

enum class Phase { Descend, Align, Contact };

inline std::string_view to_string(Phase phase) {
    switch (phase) {
    case Phase::Descend:
        return "descend";
    case Phase::Align:
        return "align";
    case Phase::Contact:
        return "contact";
    }
    return "descend";
}

struct SupervisorState {
    bool roll_active = false;
    bool drift_comp_active = false;
    Phase phase = Phase::Descend;

    bool operator==(const SupervisorState&) const = default;
};

/// Input-to-output-rate gains the inversion divides by.
struct Effectiveness {
    double g1 = 0.0; ///< thrust -> dy1/dt
    double g2 = 0.0; ///< moment -> dy2/dt
    double g3 = 0.0; ///< thrust -> dy3/dt
};

/// Outer loop: proportional virtual inputs on each active channel.
inline VirtualInputs virtual_inputs(const Observations& obs, const ControllerConfig& cfg, const SupervisorState& sup) {
    VirtualInputs nu;
    nu.nu1 = cfg.k1 * (cfg.theta_star - obs.y1);
    nu.nu2 = sup.roll_active ? cfg.k2 * (-obs.y2) : 0.0;
    nu.nu3 = sup.drift_comp_active ? cfg.k3 * (-obs.y3) : 0.0;
    return nu;
}

/// Small-angle control effectiveness. In true_state mode the clearance and
/// slope come from the actual state; fixed_nominal uses nominal_h, level
/// attitude and flat ground.
inline Effectiveness effectiveness(const VehicleState& state, const Terrain& terrain, const VehicleParams& model,
                                   const ControllerConfig& cfg) {
    double h = 0.0;
    double phi = 0.0;
    double tan_a = 0.0;
    if (cfg.effectiveness_mode == EffectivenessMode::TrueState) {
        tan_a = std::tan(terrain.alpha);
        h = state.Z - state.Y * tan_a;
        phi = state.phi;
    } else {
        h = cfg.nominal_h;
    }
    if (!(h > 0.0)) {
        throw EffectivenessUndefined("effectiveness: non-positive clearance");
    }
    Effectiveness e;
    e.g1 = (1.0 + phi * tan_a) / (model.m * h);
    e.g2 = 2.0 * model.bc / (model.Ixx * h);
    e.g3 = -std::sin(phi) / (model.m * h);
    return e;
}

/// Inner loop: invert the effectiveness to turn (nu - measured rate) into
/// input increments. The ventral correction is skipped while |sin(phi)| is
/// below eps_phi because its gain vanishes at level attitude.
inline ControlIncrements indi_increment(const VirtualInputs& nu, const OutputRates& rates, const Effectiveness& eff,
                                        double phi, const ControllerConfig& cfg, const SupervisorState& sup) {
    ControlIncrements inc;
    auto usable = [](double g) { return std::isfinite(g) && g != 0.0; };
    if (!usable(eff.g1) || (sup.roll_active && !usable(eff.g2))) {
        inc.singular = true;
        return inc;
    }
    inc.du1 = (nu.nu1 - rates.y1dot) / eff.g1;
    if (sup.roll_active) {
        inc.du2 = (nu.nu2 - rates.y2dot) / eff.g2;
    }
    if (sup.drift_comp_active && std::abs(std::sin(phi)) > cfg.eps_phi) {
        if (usable(eff.g3)) {
            inc.du1p = (nu.nu3 - rates.y3dot) / eff.g3;
        } else {
            inc.singular = true;
        }
    }
    if (!std::isfinite(inc.du1) || !std::isfinite(inc.du2) || !std::isfinite(inc.du1p)) {
        return ControlIncrements{0.0, 0.0, 0.0, true};
    }
    return inc;
}

inline ControlCommand saturate(const ControlCommand& cmd, const ControllerConfig& cfg) {
    return {std::clamp(cmd.u1, 0.0, cfg.u1_max), std::clamp(cmd.u2, -cfg.u2_max, cfg.u2_max)};
}

/// u_k = u_{k-1} + increments, then saturation.
inline ControlCommand update_command(const ControlCommand& prev, const ControlIncrements& inc,
                                     const ControllerConfig& cfg) {
    return saturate({prev.u1 + inc.du1 + inc.du1p, prev.u2 + inc.du2}, cfg);
}

/// Latches roll alignment and drift compensation the first time |y2|
/// exceeds eps_y. Nothing unlatches before touchdown.
inline SupervisorState supervise(const Observations& obs, const SupervisorState& sup, const ControllerConfig& cfg) {
    SupervisorState next = sup;
    if (!sup.roll_active && std::abs(obs.y2) > cfg.eps_y) {
        next.roll_active = true;
        next.drift_comp_active = cfg.drift_compensation;
        next.phase = Phase::Align;
    }
    return next;
}

/// Closed-form constant-divergence descent: h0 e^{theta t} and its first
/// two time derivatives.
struct ReferencePoint {
    double h = 0.0;
    double hdot = 0.0;
    double hddot = 0.0;
};

inline ReferencePoint constant_divergence_reference(double h0, double theta_star, double t) {
    const double h = h0 * std::exp(theta_star * t);
    return {h, theta_star * h, theta_star * theta_star * h};
}

/// Per-run INDI controller: holds the previous command and supervisor latch.
class IndiController {
public:
    IndiController(ControllerConfig cfg, VehicleParams model, Terrain terrain, ControlCommand initial)
        : cfg_(cfg), model_(model), terrain_(terrain), command_(initial) {}

    /// One control tick. `rates_ready` is false during estimator cold start,
    /// in which case the previous command is held.
    ControlCommand tick(const VehicleState& state, const Observations& obs, const OutputRates& rates,
                        bool rates_ready) {
        supervisor_ = supervise(obs, supervisor_, cfg_);
        last_ = {};
        if (!rates_ready) {
            return command_;
        }
        const VirtualInputs nu = virtual_inputs(obs, cfg_, supervisor_);
        try {
            const Effectiveness eff = effectiveness(state, terrain_, model_, cfg_);
            last_ = indi_increment(nu, rates, eff, state.phi, cfg_, supervisor_);
        } catch (const EffectivenessUndefined&) {
            last_.singular = true;
        }
        command_ = update_command(command_, last_, cfg_);
        return command_;
    }

    const SupervisorState& supervisor() const noexcept { return supervisor_; }
    const ControlIncrements& last_increments() const noexcept { return last_; }
    const ControlCommand& command() const noexcept { return command_; }

private:
    ControllerConfig cfg_;
    VehicleParams model_;
    Terrain terrain_;
    ControlCommand command_;
    SupervisorState supervisor_;
    ControlIncrements last_;
};

// ---------------------------------------------------------------------------
// PID baseline
// ---------------------------------------------------------------------------

struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
    double i_limit = 1.0; ///< integrator clamp (symmetric)

    bool valid() const noexcept { return kp >= 0.0 && ki >= 0.0 && kd >= 0.0 && i_limit >= 0.0; }
    bool operator==(const PidGains&) const = default;
};

/// Thrust on the y1 error, moment on the y2 error, thrust correction on y3.
struct PidConfig {
    PidGains thrust{1.0, 0.0, 0.0, 1.0};
    PidGains moment{0.1, 0.0, 0.01, 1.0};
    PidGains drift{1.0, 0.0, 0.0, 1.0};

    bool valid() const noexcept { return thrust.valid() && moment.valid() && drift.valid(); }
    bool operator==(const PidConfig&) const = default;
};

struct PidIntegrators {
    double thrust = 0.0;
    double moment = 0.0;
    double drift = 0.0;
};

namespace detail {

/// Integrate with a hard clamp: at the limit, same-sign error is held off.
inline double integrate_clamped(double integral, double error, double dt, double limit) {
    return std::clamp(integral + error * dt, -limit, limit);
}

} // namespace detail

/// PID law sharing the INDI saturation and supervisor. Derivative terms act
/// on the measured output rates. The drift correction enters thrust with the
/// sign of -sin(phi), since tilting reverses how thrust moves y3, and is
/// withheld under the same eps_phi guard as the INDI ventral channel.
inline ControlCommand pid_command(const Observations& obs, const OutputRates& rates, PidIntegrators& integrators,
                                  const PidConfig& pid, const ControllerConfig& cfg, const SupervisorState& sup,
                                  double trim, double phi, double dt) {
    const double e1 = cfg.theta_star - obs.y1;
    integrators.thrust = detail::integrate_clamped(integrators.thrust, e1, dt, pid.thrust.i_limit);
    double u1 = trim + pid.thrust.kp * e1 + pid.thrust.ki * integrators.thrust + pid.thrust.kd * (-rates.y1dot);

    const double sin_phi = std::sin(phi);
    if (sup.drift_comp_active && std::abs(sin_phi) > cfg.eps_phi) {
        const double e3 = -obs.y3;
        integrators.drift = detail::integrate_clamped(integrators.drift, e3, dt, pid.drift.i_limit);
        const double correction = pid.drift.kp * e3 + pid.drift.ki * integrators.drift + pid.drift.kd * (-rates.y3dot);
        u1 += (sin_phi > 0.0 ? -1.0 : 1.0) * correction;
    }

    double u2 = 0.0;
    if (sup.roll_active) {
        const double e2 = -obs.y2;
        integrators.moment = detail::integrate_clamped(integrators.moment, e2, dt, pid.moment.i_limit);
        u2 = pid.moment.kp * e2 + pid.moment.ki * integrators.moment + pid.moment.kd * (-rates.y2dot);
    }
    return saturate({u1, u2}, cfg);
}

/// Per-run PID controller with the same supervisor as IndiController.
class PidController {
public:
    PidController(PidConfig pid, ControllerConfig cfg, double trim) : pid_(pid), cfg_(cfg), trim_(trim) {}

    ControlCommand tick(const VehicleState& state, const Observations& obs, const OutputRates& rates, double dt) {
        supervisor_ = supervise(obs, supervisor_, cfg_);
        command_ = pid_command(obs, rates, integrators_, pid_, cfg_, supervisor_, trim_, state.phi, dt);
        return command_;
    }

    const SupervisorState& supervisor() const noexcept { return supervisor_; }
    const PidIntegrators& integrators() const noexcept { return integrators_; }

private:
    PidConfig pid_;
    ControllerConfig cfg_;
    double trim_;
    PidIntegrators integrators_;
    SupervisorState supervisor_;
    ControlCommand command_;
};

} // namespace flowland
