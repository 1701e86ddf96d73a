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


#include "flowland/analysis.hpp"
#include "flowland/control.hpp"
#include "flowland/dynamics.hpp"
#include "flowland/errors.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace flowland;

namespace {

SupervisorState active() { return {true, true, Phase::Align}; }

Observations obs_y(double y1, double y2 = 0.0, double y3 = 0.0) {
    Observations o;
    o.y1 = y1;
    o.y2 = y2;
    o.y3 = y3;
    return o;
}

} // namespace

TEST(VirtualInputs, OnSetpointIsZero) {
    const ControllerConfig cfg;
    EXPECT_EQ(virtual_inputs(obs_y(cfg.theta_star), cfg, {}).nu1, 0.0);
}

TEST(VirtualInputs, ThrustChannel) {
    ControllerConfig cfg;
    cfg.k1 = 2.0;
    cfg.theta_star = -0.2;
    EXPECT_DOUBLE_EQ(virtual_inputs(obs_y(-0.1), cfg, {}).nu1, -0.2);
}

TEST(VirtualInputs, RollChannelOnlyWhenActive) {
    ControllerConfig cfg;
    cfg.k2 = 3.0;
    EXPECT_DOUBLE_EQ(virtual_inputs(obs_y(-0.2, 0.05), cfg, active()).nu2, -0.15);
    EXPECT_EQ(virtual_inputs(obs_y(-0.2, 0.05), cfg, {}).nu2, 0.0);
}

TEST(VirtualInputs, VentralChannelOnlyWhenActive) {
    ControllerConfig cfg;
    cfg.k3 = 1.5;
    EXPECT_DOUBLE_EQ(virtual_inputs(obs_y(-0.2, 0.0, 0.2), cfg, active()).nu3, -0.3);
    EXPECT_EQ(virtual_inputs(obs_y(-0.2, 0.0, 0.2), cfg, {}).nu3, 0.0);
}

TEST(Effectiveness, ThrustOnFlatLevel) {
    VehicleState s;
    s.Z = 2.0;
    EXPECT_DOUBLE_EQ(effectiveness(s, Terrain{0.0}, VehicleParams{}, ControllerConfig{}).g1, 0.5);
}

TEST(Effectiveness, Moment) {
    VehicleState s;
    s.Z = 2.0;
    EXPECT_DOUBLE_EQ(effectiveness(s, Terrain{0.0}, VehicleParams{}, ControllerConfig{}).g2, 20.0);
}

TEST(Effectiveness, VentralVanishesWhenLevel) {
    VehicleState s;
    s.Z = 2.0;
    EXPECT_EQ(effectiveness(s, Terrain{deg_to_rad(20.0)}, VehicleParams{}, ControllerConfig{}).g3, 0.0);
}

TEST(Effectiveness, SlopeCouplingInThrustTerm) {
    VehicleState s;
    s.Y = 1.0;
    s.Z = 3.0;
    s.phi = 0.2;
    const double alpha = deg_to_rad(20.0);
    const Effectiveness e = effectiveness(s, Terrain{alpha}, VehicleParams{}, ControllerConfig{});
    const double h = 3.0 - std::tan(alpha);
    EXPECT_NEAR(e.g1, (1.0 + 0.2 * std::tan(alpha)) / h, 1e-15);
    EXPECT_NEAR(e.g3, -std::sin(0.2) / h, 1e-15);
}

TEST(Effectiveness, FixedNominalIgnoresState) {
    ControllerConfig cfg;
    cfg.effectiveness_mode = EffectivenessMode::FixedNominal;
    cfg.nominal_h = 4.0;
    VehicleState s;
    s.Z = 0.5;
    s.phi = 0.3;
    const Effectiveness e = effectiveness(s, Terrain{deg_to_rad(25.0)}, VehicleParams{}, cfg);
    EXPECT_DOUBLE_EQ(e.g1, 0.25);
    EXPECT_DOUBLE_EQ(e.g2, 10.0);
    EXPECT_EQ(e.g3, 0.0);
}

TEST(Effectiveness, UndefinedBelowGround) {
    VehicleState s;
    s.Z = -0.1;
    EXPECT_THROW(effectiveness(s, Terrain{0.0}, VehicleParams{}, ControllerConfig{}), EffectivenessUndefined);
}

TEST(IndiIncrement, NoErrorNoIncrement) {
    const ControlIncrements inc = indi_increment({0.3, 0.0, 0.0}, {0.3, 0.0, 0.0}, {0.5, 20.0, 0.0}, 0.0,
                                                 ControllerConfig{}, {});
    EXPECT_EQ(inc.du1, 0.0);
    EXPECT_FALSE(inc.singular);
}

TEST(IndiIncrement, ThrustInversion) {
    const ControlIncrements inc = indi_increment({0.1, 0.0, 0.0}, {}, {0.5, 20.0, 0.0}, 0.0, ControllerConfig{}, {});
    EXPECT_DOUBLE_EQ(inc.du1, 0.2);
    EXPECT_EQ(inc.du2, 0.0);
    EXPECT_EQ(inc.du1p, 0.0);
}

TEST(IndiIncrement, VentralInversion) {
    const double phi = 0.1;
    const Effectiveness eff{0.5, 20.0, -std::sin(phi) / 2.0};
    const ControlIncrements inc = indi_increment({0.0, 0.0, 0.1}, {}, eff, phi, ControllerConfig{}, active());
    EXPECT_NEAR(inc.du1p, -2.0033, 1e-4);
}

TEST(IndiIncrement, VentralGuardBelowEpsPhi) {
    const double phi = 0.01;
    const Effectiveness eff{0.5, 20.0, -std::sin(phi) / 2.0};
    const ControlIncrements inc = indi_increment({0.0, 0.0, 0.1}, {}, eff, phi, ControllerConfig{}, active());
    EXPECT_EQ(inc.du1p, 0.0);
    EXPECT_FALSE(inc.singular);
}

TEST(IndiIncrement, SingularEffectivenessIsFlaggedNotThrown) {
    const ControlIncrements inc = indi_increment({1.0, 1.0, 1.0}, {}, {0.0, 20.0, 0.0}, 0.0, ControllerConfig{}, {});
    EXPECT_TRUE(inc.singular);
    EXPECT_EQ(inc.du1, 0.0);
    EXPECT_EQ(inc.du2, 0.0);
    EXPECT_EQ(inc.du1p, 0.0);
    const ControlIncrements nan_inc = indi_increment({1.0, 1.0, 1.0}, {}, {std::nan(""), 20.0, 0.0}, 0.0,
                                                     ControllerConfig{}, active());
    EXPECT_TRUE(nan_inc.singular);
}

TEST(IndiIncrement, RatesEqualVirtualInputsIsFixedPoint) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const ControllerConfig cfg;
    for (int i = 0; i < 100; ++i) {
        const VirtualInputs nu{u(rng), u(rng), u(rng)};
        const OutputRates rates{nu.nu1, nu.nu2, nu.nu3};
        const double phi = 0.3 * u(rng);
        const Effectiveness eff{0.5 + u(rng) * 0.1, 20.0, -std::sin(phi) / 2.0};
        const ControlIncrements inc = indi_increment(nu, rates, eff, phi, cfg, active());
        const ControlCommand prev{12.0, 0.1};
        EXPECT_EQ(update_command(prev, inc, cfg), prev);
    }
}

// Applying one increment to the affine model at a frozen state shifts the
// modelled y1 rate by exactly nu1 - y1dot.
TEST(IndiIncrement, AffineModelMovesByRequestedAmount) {
    const VehicleParams p;
    const Terrain flat{0.0};
    ControllerConfig cfg;
    VehicleState s;
    s.Z = 2.5;
    s.Zdot = -0.4;
    const ControlCommand u0{p.m * p.g, 0.0};
    const double y1dot = affine_output_model(s, u0, flat, p).y1dot;
    const VirtualInputs nu = virtual_inputs(observe(clearances(s, flat, p), s), cfg, {});
    const ControlIncrements inc = indi_increment(nu, {y1dot, 0.0, 0.0}, effectiveness(s, flat, p, cfg), s.phi, cfg, {});
    const double after = affine_output_model(s, update_command(u0, inc, cfg), flat, p).y1dot;
    EXPECT_NEAR(after - y1dot, nu.nu1 - y1dot, 1e-12);
}

TEST(UpdateCommand, ZeroIncrementsKeepCommand) {
    const ControlCommand prev{9.81, 0.2};
    EXPECT_EQ(update_command(prev, {}, ControllerConfig{}), prev);
}

TEST(UpdateCommand, SumsThrustIncrements) {
    EXPECT_DOUBLE_EQ(update_command({9.81, 0.0}, {0.2, 0.0, 0.0, false}, ControllerConfig{}).u1, 10.01);
    EXPECT_DOUBLE_EQ(update_command({9.81, 0.0}, {0.2, 0.0, -0.5, false}, ControllerConfig{}).u1, 9.51);
}

TEST(UpdateCommand, Saturates) {
    ControllerConfig cfg;
    cfg.u1_max = 39.24;
    EXPECT_EQ(update_command({39.0, 0.0}, {1.0, 0.0, 0.0, false}, cfg).u1, 39.24);
    EXPECT_EQ(update_command({0.5, 0.0}, {-1.0, 0.0, 0.0, false}, cfg).u1, 0.0);
    EXPECT_EQ(update_command({0.0, 0.9}, {0.0, 0.5, 0.0, false}, cfg).u2, cfg.u2_max);
    EXPECT_EQ(update_command({0.0, -0.9}, {0.0, -0.5, 0.0, false}, cfg).u2, -cfg.u2_max);
}

TEST(Supervise, BelowThresholdInactive) {
    const SupervisorState s = supervise(obs_y(-0.2, 0.01), {}, ControllerConfig{});
    EXPECT_FALSE(s.roll_active);
    EXPECT_FALSE(s.drift_comp_active);
    EXPECT_EQ(s.phase, Phase::Descend);
}

TEST(Supervise, CrossingActivatesBoth) {
    for (double y2 : {0.08, -0.08}) {
        const SupervisorState s = supervise(obs_y(-0.2, y2), {}, ControllerConfig{});
        EXPECT_TRUE(s.roll_active);
        EXPECT_TRUE(s.drift_comp_active);
        EXPECT_EQ(s.phase, Phase::Align);
    }
}

TEST(Supervise, Latches) {
    const ControllerConfig cfg;
    SupervisorState s = supervise(obs_y(-0.2, 0.08), {}, cfg);
    s = supervise(obs_y(-0.2, 0.0), s, cfg);
    EXPECT_TRUE(s.roll_active);
    EXPECT_TRUE(s.drift_comp_active);
    EXPECT_EQ(s.phase, Phase::Align);
}

TEST(Supervise, DriftCompensationCanBeDisabled) {
    ControllerConfig cfg;
    cfg.drift_compensation = false;
    const SupervisorState s = supervise(obs_y(-0.2, 0.08), {}, cfg);
    EXPECT_TRUE(s.roll_active);
    EXPECT_FALSE(s.drift_comp_active);
}

TEST(Supervise, ActivationIsMonotoneAlongRandomSignals) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    const ControllerConfig cfg;
    for (int run = 0; run < 50; ++run) {
        SupervisorState s;
        int switches = 0;
        for (int k = 0; k < 200; ++k) {
            const bool before = s.roll_active;
            s = supervise(obs_y(-0.2, u(rng)), s, cfg);
            switches += before != s.roll_active;
            EXPECT_EQ(s.roll_active, s.drift_comp_active);
        }
        EXPECT_LE(switches, 1);
    }
}

TEST(PidCommand, ZeroErrorGivesTrim) {
    ControllerConfig cfg;
    PidIntegrators integ;
    const ControlCommand c = pid_command(obs_y(cfg.theta_star), {}, integ, PidConfig{}, cfg, {}, 9.81, 0.0, 0.002);
    EXPECT_EQ(c.u1, 9.81);
    EXPECT_EQ(c.u2, 0.0);
}

TEST(PidCommand, ProportionalContribution) {
    ControllerConfig cfg;
    cfg.theta_star = -0.2;
    PidConfig pid;
    pid.thrust = {5.0, 0.0, 0.0, 1.0};
    PidIntegrators integ;
    const ControlCommand c = pid_command(obs_y(-0.3), {}, integ, pid, cfg, {}, 9.81, 0.0, 0.002);
    EXPECT_NEAR(c.u1 - 9.81, 0.5, 1e-12);
}

TEST(PidCommand, DerivativeActsOnMeasuredRate) {
    ControllerConfig cfg;
    PidConfig pid;
    pid.thrust = {0.0, 0.0, 2.0, 1.0};
    PidIntegrators integ;
    const ControlCommand c =
        pid_command(obs_y(cfg.theta_star), {0.25, 0.0, 0.0}, integ, pid, cfg, {}, 9.81, 0.0, 0.002);
    EXPECT_NEAR(c.u1 - 9.81, -0.5, 1e-12);
}

TEST(PidCommand, IntegratorAntiWindup) {
    ControllerConfig cfg;
    PidConfig pid;
    pid.thrust = {0.0, 1.0, 0.0, 0.05};
    PidIntegrators integ;
    integ.thrust = 0.05;
    const ControlCommand c = pid_command(obs_y(cfg.theta_star - 1.0), {}, integ, pid, cfg, {}, 9.81, 0.0, 0.01);
    EXPECT_EQ(integ.thrust, 0.05);
    EXPECT_NEAR(c.u1, 9.81 + 0.05, 1e-12);
    pid_command(obs_y(cfg.theta_star + 1.0), {}, integ, pid, cfg, {}, 9.81, 0.0, 0.01);
    EXPECT_LT(integ.thrust, 0.05);
}

TEST(PidCommand, MomentOnlyWhenRollActive) {
    ControllerConfig cfg;
    PidConfig pid;
    pid.moment = {2.0, 0.0, 0.0, 1.0};
    PidIntegrators integ;
    EXPECT_EQ(pid_command(obs_y(cfg.theta_star, 0.1), {}, integ, pid, cfg, {}, 9.81, 0.0, 0.002).u2, 0.0);
    EXPECT_NEAR(pid_command(obs_y(cfg.theta_star, 0.1), {}, integ, pid, cfg, active(), 9.81, 0.0, 0.002).u2, -0.2,
                1e-12);
}

TEST(PidCommand, DriftCorrectionOpposesVentralFlowThroughTilt) {
    // With phi > 0 more thrust accelerates toward -Y, so positive y3 needs more thrust.
    ControllerConfig cfg;
    PidConfig pid;
    pid.drift = {3.0, 0.0, 0.0, 1.0};
    PidIntegrators integ;
    const double up = pid_command(obs_y(cfg.theta_star, 0.0, 0.1), {}, integ, pid, cfg, active(), 9.81, 0.2, 0.002).u1;
    const double down =
        pid_command(obs_y(cfg.theta_star, 0.0, 0.1), {}, integ, pid, cfg, active(), 9.81, -0.2, 0.002).u1;
    EXPECT_NEAR(up - 9.81, 0.3, 1e-12);
    EXPECT_NEAR(down - 9.81, -0.3, 1e-12);
    const double level =
        pid_command(obs_y(cfg.theta_star, 0.0, 0.1), {}, integ, pid, cfg, active(), 9.81, 0.0, 0.002).u1;
    EXPECT_EQ(level, 9.81);
}

TEST(PidCommand, SharesSaturation) {
    ControllerConfig cfg;
    PidConfig pid;
    pid.thrust = {1000.0, 0.0, 0.0, 1.0};
    PidIntegrators integ;
    EXPECT_EQ(pid_command(obs_y(cfg.theta_star - 1.0), {}, integ, pid, cfg, {}, 9.81, 0.0, 0.002).u1, cfg.u1_max);
    EXPECT_EQ(pid_command(obs_y(cfg.theta_star + 1.0), {}, integ, pid, cfg, {}, 9.81, 0.0, 0.002).u1, 0.0);
}

TEST(Reference, InitialCondition) {
    const ReferencePoint r = constant_divergence_reference(4.0, -0.2, 0.0);
    EXPECT_DOUBLE_EQ(r.h, 4.0);
    EXPECT_DOUBLE_EQ(r.hdot, -0.8);
    EXPECT_DOUBLE_EQ(r.hddot, 0.16);
}

TEST(Reference, AfterFiveSeconds) {
    const ReferencePoint r = constant_divergence_reference(4.0, -0.2, 5.0);
    EXPECT_NEAR(r.h, 1.47152, 1e-5);
    EXPECT_NEAR(r.hdot, -0.29430, 1e-5);
    EXPECT_NEAR(r.hddot, 0.058861, 1e-6);
}

TEST(Reference, ZeroSetpointHolds) {
    const ReferencePoint r = constant_divergence_reference(4.0, 0.0, 7.0);
    EXPECT_EQ(r.h, 4.0);
    EXPECT_EQ(r.hdot, 0.0);
    EXPECT_EQ(r.hddot, 0.0);
}

TEST(Reference, DivergenceIsConstant) {
    for (double t = 0.0; t < 20.0; t += 0.7) {
        const ReferencePoint r = constant_divergence_reference(3.0, -0.3, t);
        EXPECT_NEAR(r.hdot / r.h, -0.3, 1e-15);
    }
}

TEST(IndiController, HoldsCommandDuringColdStart) {
    IndiController c(ControllerConfig{}, VehicleParams{}, Terrain{0.0}, {9.81, 0.0});
    VehicleState s;
    s.Z = 2.0;
    const ControlCommand u = c.tick(s, obs_y(-0.1, 0.2), {5.0, 5.0, 5.0}, false);
    EXPECT_EQ(u, (ControlCommand{9.81, 0.0}));
    EXPECT_TRUE(c.supervisor().roll_active);
}

TEST(IndiController, SingularStepHoldsCommand) {
    IndiController c(ControllerConfig{}, VehicleParams{}, Terrain{0.0}, {9.81, 0.0});
    VehicleState below;
    below.Z = -1.0;
    const ControlCommand u = c.tick(below, obs_y(-0.1), {0.0, 0.0, 0.0}, true);
    EXPECT_EQ(u, (ControlCommand{9.81, 0.0}));
    EXPECT_TRUE(c.last_increments().singular);
}

TEST(ControllerConfig, Validity) {
    EXPECT_TRUE(ControllerConfig{}.valid());
    ControllerConfig c;
    c.theta_star = 0.0;
    EXPECT_FALSE(c.valid());
    c = {};
    c.eps_phi = 0.0;
    EXPECT_FALSE(c.valid());
    PidConfig pid;
    pid.drift.kd = -1.0;
    EXPECT_FALSE(pid.valid());
}
