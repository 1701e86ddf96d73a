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


// Acceptance checks for the landing simulator. Prints one PASS/FAIL line per
// criterion and exits nonzero if any criterion fails.

#include "flowland/analysis.hpp"
#include "flowland/cli.hpp"
#include "flowland/dynamics.hpp"
#include "flowland/io/config.hpp"
#include "flowland/io/csv.hpp"
#include "flowland/io/report.hpp"
#include "flowland/simulation.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace flowland;

namespace {

constexpr double kSetpoints[] = {-0.1, -0.2, -0.3};
constexpr double kSlopesDeg[] = {10.0, 20.0, 30.0};

struct Verdict {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
        }
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += what + (ok ? "" : " [x]");
    }
};

std::string num(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

ScenarioConfig flat(double theta_star, ControllerKind kind) {
    ScenarioConfig cfg = test::reference_scenario();
    cfg.control.theta_star = theta_star;
    cfg.controller = kind;
    return cfg;
}

struct Run {
    ScenarioConfig cfg;
    SimLog log;
    LandingMetrics m;
};

Run simulate(const ScenarioConfig& cfg) {
    Run r{cfg, run_scenario(cfg), {}};
    r.m = landing_metrics(r.log, cfg);
    return r;
}

Verdict exponential_decay() {
    Verdict v;
    for (double ts : kSetpoints) {
        const Run r = simulate(flat(ts, ControllerKind::Indi));
        const bool landed = r.log.touched_down();
        const double slope_err = std::abs(r.m.decay_slope - ts) / std::abs(ts);
        v.check(landed && slope_err <= 0.10 && r.m.rmse_y1 <= 0.1 * std::abs(ts),
                "theta*=" + num(ts) + " fit=" + num(r.m.decay_slope) + " rmse=" + num(r.m.rmse_y1, 3));
    }
    return v;
}

Verdict simultaneous_vanishing() {
    Verdict v;
    for (double ts : kSetpoints) {
        const Run r = simulate(flat(ts, ControllerKind::Indi));
        if (!r.log.touched_down() || r.log.rows.empty()) {
            v.check(false, "theta*=" + num(ts) + " did not land");
            continue;
        }
        const Clearances& c = r.log.rows.back().clr;
        const double divergence = c.hdot / c.h;
        v.check(std::abs(divergence - ts) <= 0.5 * std::abs(ts),
                "theta*=" + num(ts) + " hdot/h=" + num(divergence) + " v_td=" + num(r.m.v_td, 3));
    }
    return v;
}

Verdict controller_ordering() {
    Verdict v;
    for (double ts : kSetpoints) {
        const Run indi = simulate(flat(ts, ControllerKind::Indi));
        const Run pid = simulate(flat(ts, ControllerKind::Pid));
        v.check(indi.log.touched_down() && pid.log.touched_down() && indi.m.rmse_y1 < pid.m.rmse_y1,
                "theta*=" + num(ts) + " indi=" + num(indi.m.rmse_y1, 3) + " pid=" + num(pid.m.rmse_y1, 3));
    }
    return v;
}

Verdict slope_alignment() {
    Verdict v;
    for (double a : kSlopesDeg) {
        const ScenarioConfig cfg = test::slope_scenario(a, ControllerKind::Indi);
        const Run r = simulate(cfg);
        const double y2_last = r.log.rows.empty() ? NAN : r.log.rows.back().obs.y2;
        v.check(r.log.touched_down() && std::abs(r.m.phi_f_deg() - a) <= 3.0 &&
                    std::abs(y2_last) < cfg.control.eps_y,
                "alpha=" + num(a) + " phi_f=" + num(r.m.phi_f_deg()) + " y2=" + num(y2_last, 3));
    }
    return v;
}

Verdict drift_compensation() {
    Verdict v;
    for (double a : kSlopesDeg) {
        ScenarioConfig off = test::slope_scenario(a, ControllerKind::Indi);
        off.control.drift_compensation = false;
        const Run with = simulate(test::slope_scenario(a, ControllerKind::Indi));
        const Run without = simulate(off);
        const Run pid = simulate(test::slope_scenario(a, ControllerKind::Pid));
        const bool landed = with.log.touched_down() && without.log.touched_down() && pid.log.touched_down();
        const double dw = std::abs(with.m.Y_drift), dn = std::abs(without.m.Y_drift), dp = std::abs(pid.m.Y_drift);
        v.check(landed && dw < dn && dw < dp,
                "alpha=" + num(a) + " on=" + num(dw, 3) + " off=" + num(dn, 3) + " pid=" + num(dp, 3));
    }
    return v;
}

Verdict y2_ordering() {
    Verdict v;
    for (double a : kSlopesDeg) {
        const Run indi = simulate(test::slope_scenario(a, ControllerKind::Indi));
        const Run pid = simulate(test::slope_scenario(a, ControllerKind::Pid));
        v.check(indi.log.touched_down() && pid.log.touched_down() && indi.m.rmse_y2 < pid.m.rmse_y2,
                "alpha=" + num(a) + " indi=" + num(indi.m.rmse_y2, 5) + " pid=" + num(pid.m.rmse_y2, 5));
    }
    return v;
}

Verdict geometry_oracle() {
    Verdict v;
    const VehicleParams p;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double alpha = deg_to_rad(35.0 * unit(rng));
        VehicleState s{5.0 * unit(rng), 0.0, 1.2 * unit(rng) * (1.0 - 1e-9), unit(rng), unit(rng), unit(rng)};
        s.Z = s.Y * std::tan(alpha) + 1.0 + 4.0 * (1.0 + unit(rng));
        const Clearances c = clearance_geometry(s, Terrain{alpha}, p);
        const test::RayClearances r = test::ray_oracle(s, alpha, p.bc);
        worst = std::max({worst, std::abs(c.hL - r.left) / std::abs(r.left), std::abs(c.hR - r.right) / std::abs(r.right)});
    }
    v.check(worst <= 1e-12, "10000 states, max relative error=" + num(worst, 3));
    return v;
}

Verdict affine_model() {
    Verdict v;
    const ScenarioConfig cfg = test::reference_scenario();
    const Run r = simulate(cfg);
    const AffineResidual res = affine_model_residual(r.log, cfg);
    double acc = 0.0;
    for (double x : res.measured1) {
        acc += x * x;
    }
    const double rms = std::sqrt(acc / static_cast<double>(res.measured1.size()));
    const double med = median_abs(res.r1);
    v.check(r.log.touched_down() && med < 0.02 * rms,
            "median|r1|=" + num(med, 3) + " rms(y1dot)=" + num(rms, 3) + " ratio=" + num(med / rms, 3));
    return v;
}

Verdict symmetry() {
    Verdict v;
    for (ControllerKind kind : {ControllerKind::Indi, ControllerKind::Pid}) {
        double y2_max = 0.0;
        for (double ts : kSetpoints) {
            const Run r = simulate(flat(ts, kind));
            for (const LogRow& row : r.log.rows) {
                y2_max = std::max(y2_max, std::abs(row.obs.y2));
            }
        }
        double mirror_err = 0.0;
        bool same_length = true;
        for (double a : kSlopesDeg) {
            const SimLog pos = run_scenario(test::slope_scenario(a, kind));
            const SimLog neg = run_scenario(test::slope_scenario(-a, kind));
            same_length = same_length && pos.rows.size() == neg.rows.size();
            for (std::size_t i = 0; i < std::min(pos.rows.size(), neg.rows.size()); ++i) {
                const LogRow& x = pos.rows[i];
                const LogRow& y = neg.rows[i];
                mirror_err = std::max({mirror_err, std::abs(x.state.Y + y.state.Y), std::abs(x.state.Z - y.state.Z),
                                       std::abs(x.state.phi + y.state.phi), std::abs(x.state.Ydot + y.state.Ydot),
                                       std::abs(x.state.Zdot - y.state.Zdot), std::abs(x.state.phidot + y.state.phidot),
                                       std::abs(x.obs.y1 - y.obs.y1), std::abs(x.obs.y2 + y.obs.y2),
                                       std::abs(x.obs.y3 + y.obs.y3), std::abs(x.cmd.u1 - y.cmd.u1),
                                       std::abs(x.cmd.u2 + y.cmd.u2)});
            }
        }
        v.check(y2_max <= 1e-10 && same_length && mirror_err <= 1e-9,
                std::string(to_string(kind)) + " flat max|y2|=" + num(y2_max, 3) + " mirror err=" + num(mirror_err, 3));
    }
    return v;
}

int quiet(const std::function<int(const cli::Options&, std::ostream&, std::ostream&)>& cmd, const cli::Options& opt) {
    std::ostringstream out, err;
    return cmd(opt, out, err);
}

Verdict determinism_and_reports() {
    Verdict v;
    test::TempDir tmp("acceptance");
    for (const char* name : {"default.ini", "table2_sweep.ini"}) {
        cli::Options opt;
        opt.config = test::source_path(std::string("configs/") + name);
        opt.out = tmp.str(std::string("a_") + name);
        const int a = quiet(cli::cmd_run, opt);
        opt.out = tmp.str(std::string("b_") + name);
        const int b = quiet(cli::cmd_run, opt);
        const bool same = a == cli::kOk && b == cli::kOk &&
                          io::read_text_file(tmp.str(std::string("a_") + name + "/log.csv")) ==
                              io::read_text_file(tmp.str(std::string("b_") + name + "/log.csv"));
        v.check(same, std::string(name) + (same ? " log identical" : " log differs"));
    }
    const struct {
        const char* config;
        std::size_t rows, cols;
    } layouts[] = {{"table1_sweep.ini", 2, 3}, {"table2_sweep.ini", 2, 9}};
    for (const auto& l : layouts) {
        cli::Options opt;
        opt.config = test::source_path(std::string("configs/") + l.config);
        opt.out = tmp.str(std::string("sweep_") + l.config);
        const int sweep = quiet(cli::cmd_sweep, opt);
        cli::Options rep;
        rep.input = opt.out;
        const int report = quiet(cli::cmd_report, rep);
        const io::ReportTable t = io::build_report(opt.out);
        v.check(sweep == cli::kOk && report == cli::kOk && t.row_count() == l.rows && t.column_count() == l.cols &&
                    t.warnings.empty(),
                std::string(l.config) + " report " + std::to_string(t.row_count()) + "x" +
                    std::to_string(t.column_count()));
    }
    return v;
}

} // namespace

int main() {
    const struct {
        const char* name;
        Verdict (*fn)();
    } criteria[] = {
        {"exponential-decay tracking", exponential_decay},
        {"simultaneous vanishing", simultaneous_vanishing},
        {"controller ordering on y1", controller_ordering},
        {"slope alignment", slope_alignment},
        {"drift compensation", drift_compensation},
        {"controller ordering on y2", y2_ordering},
        {"geometry oracle", geometry_oracle},
        {"affine output model", affine_model},
        {"symmetry", symmetry},
        {"determinism and report shapes", determinism_and_reports},
    };
    int failures = 0;
    int index = 1;
    for (const auto& c : criteria) {
        Verdict v;
        try {
            v = c.fn();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", index++, c.name, v.detail.c_str());
        failures += v.pass ? 0 : 1;
    }
    std::printf("%d of %d criteria passed\n", index - 1 - failures, index - 1);
    return failures == 0 ? 0 : 1;
}
