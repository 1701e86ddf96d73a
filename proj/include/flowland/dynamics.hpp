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

// Planar rigid-body lander model, inclined-terrain geometry, RK4
// integration and touchdown detection.
#pragma once

#include "flowland/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace flowland {

/// Planar pose and rates. Z is world-frame altitude, phi is roll (rad).
struct VehicleState {
    double Y = 0.0;
    double Z = 0.0;
    double phi = 0.0;
    double Ydot = 0.0;
    double Zdot = 0.0;
    double phidot = 0.0;

    bool operator==(const VehicleState&) const = default;
};

struct VehicleParams {
    double m = 1.0;    ///< mass [kg]
    double Ixx = 0.01; ///< roll inertia [kg m^2]
    double bc = 0.2;   ///< camera offset from body center [m]
    double g = 9.81;   ///< gravity [m/s^2]

    bool valid() const noexcept { return m > 0.0 && Ixx > 0.0 && bc > 0.0 && g > 0.0; }
};

/// Straight terrain line Z = Y tan(alpha); positive alpha rises toward +Y.
struct Terrain {
    double alpha = 0.0; ///< [rad]

    static constexpr double kMaxSlope = std::numbers::pi / 2.0 - 1e-3;

    bool valid() const noexcept { return std::isfinite(alpha) && std::abs(alpha) < kMaxSlope; }
};

/// Vertical clearances of the body center and both camera stations.
struct Clearances {
    double h = 0.0;
    double hL = 0.0;
    double hR = 0.0;
    double hdot = 0.0;
    double hLdot = 0.0;
    double hRdot = 0.0;

    double min_camera() const noexcept { return std::min(hL, hR); }
};

struct ControlCommand {
    double u1 = 0.0; ///< total thrust [N]
    double u2 = 0.0; ///< roll moment [N m]

    bool operator==(const ControlCommand&) const = default;
};

/// Time derivative of VehicleState, in the same component order.
struct StateRate {
    double Ydot = 0.0;
    double Zdot = 0.0;
    double phidot = 0.0;
    double Yddot = 0.0;
    double Zddot = 0.0;
    double phiddot = 0.0;
};

namespace detail {

inline constexpr std::array<const char*, 6> kStateNames = {"Y", "Z", "phi", "Ydot", "Zdot", "phidot"};

inline std::array<double, 6> to_array(const VehicleState& s) {
    return {s.Y, s.Z, s.phi, s.Ydot, s.Zdot, s.phidot};
}

inline std::array<double, 6> to_array(const StateRate& r) {
    return {r.Ydot, r.Zdot, r.phidot, r.Yddot, r.Zddot, r.phiddot};
}

inline VehicleState state_from_array(const std::array<double, 6>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5]};
}

inline bool all_finite(const VehicleState& s) {
    const auto a = to_array(s);
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

} // namespace detail

/// Equations of motion with exact trigonometry:
///   Yddot = -(u1/m) sin(phi), Zddot = (u1/m) cos(phi) - g, phiddot = u2/Ixx.
inline StateRate derivatives(const VehicleState& s, const ControlCommand& cmd, const VehicleParams& p) {
    if (!detail::all_finite(s) || !std::isfinite(cmd.u1) || !std::isfinite(cmd.u2)) {
        throw ModelError("derivatives: non-finite state or command");
    }
    const double accel = cmd.u1 / p.m;
    return {s.Ydot,
            s.Zdot,
            s.phidot,
            -accel * std::sin(s.phi),
            accel * std::cos(s.phi) - p.g,
            cmd.u2 / p.Ixx};
}

/// One classical RK4 step with the command held constant over dt.
inline VehicleState step(const VehicleState& s, const ControlCommand& cmd, const VehicleParams& p, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ModelError("step: dt must be positive and finite");
    }
    using Vec = std::array<double, 6>;
    const Vec x0 = detail::to_array(s);
    auto require_finite = [](double v, std::size_t i) {
        if (!std::isfinite(v)) {
            throw IntegrationError(detail::kStateNames[i],
                                   std::string("step: non-finite state component ") + detail::kStateNames[i]);
        }
    };
    auto stage = [&](const Vec& base, const Vec& k, double scale) {
        Vec out{};
        for (std::size_t i = 0; i < 6; ++i) {
            out[i] = base[i] + scale * k[i];
            require_finite(out[i], i);
        }
        return out;
    };
    auto f = [&](const Vec& x) { return detail::to_array(derivatives(detail::state_from_array(x), cmd, p)); };

    const Vec k1 = f(x0);
    const Vec k2 = f(stage(x0, k1, dt / 2.0));
    const Vec k3 = f(stage(x0, k2, dt / 2.0));
    const Vec k4 = f(stage(x0, k3, dt));

    Vec x1{};
    for (std::size_t i = 0; i < 6; ++i) {
        x1[i] = x0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        require_finite(x1[i], i);
    }
    return detail::state_from_array(x1);
}

/// Exact clearance geometry with no validity checks. Cameras sit at
/// (Y -/+ bc cos(phi), Z -/+ bc sin(phi)) and look straight down.
///
/// The left and right expressions are written as exact mirror images so
/// that (Y, phi, alpha) -> (-Y, -phi, -alpha) swaps hL and hR bit for bit.
inline Clearances clearance_geometry(const VehicleState& s, const Terrain& terrain, const VehicleParams& p) {
    const double tan_a = std::tan(terrain.alpha);
    const double sin_p = std::sin(s.phi);
    const double cos_p = std::cos(s.phi);

    Clearances c;
    c.h = s.Z - s.Y * tan_a;
    const double roll_offset = p.bc * sin_p;
    const double slope_offset = p.bc * cos_p * tan_a;
    c.hL = c.h - roll_offset + slope_offset;
    c.hR = c.h + roll_offset - slope_offset;

    c.hdot = s.Zdot - s.Ydot * tan_a;
    const double roll_rate = p.bc * cos_p * s.phidot;
    const double slope_rate = p.bc * sin_p * s.phidot * tan_a;
    c.hLdot = c.hdot - roll_rate - slope_rate;
    c.hRdot = c.hdot + roll_rate + slope_rate;
    return c;
}

/// Clearances for a vehicle that is above the ground with its cameras
/// facing down. Throws GroundPenetrationError if any clearance is <= 0.
inline Clearances clearances(const VehicleState& s, const Terrain& terrain, const VehicleParams& p) {
    if (!(std::abs(s.phi) < std::numbers::pi / 2.0)) {
        throw ModelError("clearances: |phi| must be below pi/2");
    }
    const Clearances c = clearance_geometry(s, terrain, p);
    if (!(c.h > 0.0 && c.hL > 0.0 && c.hR > 0.0)) {
        throw GroundPenetrationError("clearances: vehicle at or below terrain");
    }
    return c;
}

struct TouchdownEvent {
    double t = 0.0;
    double phi = 0.0;
    double hLdot = 0.0;
    double hRdot = 0.0;
    double min_clearance = 0.0;
};

/// Contact occurs once either camera station (the body's extremal points)
/// is within `threshold` of the terrain. The comparison is inclusive.
inline std::optional<TouchdownEvent> touchdown_check(const VehicleState& s, const Terrain& terrain,
                                                     const VehicleParams& p, double threshold, double t = 0.0) {
    const Clearances c = clearance_geometry(s, terrain, p);
    const double lowest = c.min_camera();
    if (lowest <= threshold) {
        return TouchdownEvent{t, s.phi, c.hLdot, c.hRdot, lowest};
    }
    return std::nullopt;
}

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

} // namespace flowland
