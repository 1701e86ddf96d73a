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

// Flow-divergence observables computed from true geometry, plus the
// measured output-rate estimate that incremental inversion feeds back.
#pragma once

#include "flowland/dynamics.hpp"
#include "flowland/errors.hpp"

#include <array>

namespace flowland {

/// Local divergences at each camera, ventral flow, and the composed outputs
/// y1 (mean divergence), y2 (right minus left), y3 (ventral flow).
struct Observations {
    double thetaL = 0.0;
    double thetaR = 0.0;
    double thetaY = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;
    double y3 = 0.0;
};

struct OutputRates {
    double y1dot = 0.0;
    double y2dot = 0.0;
    double y3dot = 0.0;
};

/// Noise-free observables. The cameras are gimbaled to look straight down.
inline Observations observe(const Clearances& clr, const VehicleState& state) {
    if (!(clr.h > 0.0 && clr.hL > 0.0 && clr.hR > 0.0)) {
        throw ObservationUnavailable("observe: non-positive clearance");
    }
    Observations o;
    o.thetaL = clr.hLdot / clr.hL;
    o.thetaR = clr.hRdot / clr.hR;
    o.thetaY = state.Ydot / clr.h;
    o.y1 = (o.thetaR + o.thetaL) / 2.0;
    o.y2 = o.thetaR - o.thetaL;
    o.y3 = o.thetaY;
    return o;
}

/// Backward difference of the outputs followed by a first-order low-pass
/// with time constant tau_f (tau_f = 0 passes the raw difference through).
/// Rates stay zero until two samples have been seen.
class OutputRateEstimator {
public:
    explicit OutputRateEstimator(double tau_f = 0.02) : tau_f_(tau_f) {}

    OutputRates update(const Observations& obs, double dt) {
        const std::array<double, 3> y{obs.y1, obs.y2, obs.y3};
        if (has_previous_ && dt > 0.0) {
            const double blend = dt / (tau_f_ + dt);
            for (std::size_t i = 0; i < 3; ++i) {
                const double raw = (y[i] - previous_[i]) / dt;
                filtered_[i] += blend * (raw - filtered_[i]);
            }
            ready_ = true;
        }
        previous_ = y;
        has_previous_ = true;
        return rates();
    }

    OutputRates rates() const { return {filtered_[0], filtered_[1], filtered_[2]}; }

    /// True once at least one difference has been formed.
    bool ready() const noexcept { return ready_; }

    double tau_f() const noexcept { return tau_f_; }

private:
    double tau_f_;
    std::array<double, 3> previous_{0.0, 0.0, 0.0};
    bool has_previous_ = false;
    std::array<double, 3> filtered_{0.0, 0.0, 0.0};
    bool ready_ = false;
};

} // namespace flowland
