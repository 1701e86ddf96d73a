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


// INI scenario configuration: parsing with field/line diagnostics, sweep and
// tuning axes, and a canonical writer whose output re-parses to the same
// configuration.
#pragma once

#include "flowland/analysis.hpp"
#include "flowland/control.hpp"
#include "flowland/dynamics.hpp"
#include "flowland/errors.hpp"
#include "flowland/io/text.hpp"
#include "flowland/simulation.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace flowland::io {

/// Cross-product axes of a [sweep] section. An absent axis contributes the
/// base configuration's value.
struct SweepAxes {
    std::vector<double> theta_star;
    std::vector<double> alpha_deg;
    std::vector<ControllerKind> controller;

    bool operator==(const SweepAxes&) const = default;
};

/// Gain grids of a [tuning] section: thrust grid for tune_pid, optional
/// moment/drift grids for tune_pid_slope_channels.
struct TuningAxes {
    PidTuningGrid thrust;
    PidTuningGrid moment;
    PidTuningGrid drift;
    double slope_alpha_deg = 20.0;

    bool has_slope_stage() const { return moment.size() > 0 && drift.size() > 0; }
};

struct RunConfig {
    ScenarioConfig scenario;
    double alpha_deg = 0.0; ///< terrain slope as written in the file
    std::optional<SweepAxes> sweep;
    std::optional<TuningAxes> tuning;

    void set_alpha_deg(double deg) {
        alpha_deg = deg;
        scenario.terrain.alpha = deg_to_rad(deg);
    }
};

namespace detail {

inline std::optional<ControllerKind> parse_controller(std::string_view s) {
    s = trim(s);
    if (s == "indi") {
        return ControllerKind::Indi;
    }
    if (s == "pid") {
        return ControllerKind::Pid;
    }
    return std::nullopt;
}

inline std::optional<bool> parse_bool(std::string_view s) {
    s = trim(s);
    if (s == "true") {
        return true;
    }
    if (s == "false") {
        return false;
    }
    return std::nullopt;
}

struct FieldSpec {
    std::string section;
    std::string key;
    /// Applies the raw value; returns an error description on rejection.
    std::function<std::string(RunConfig&, std::string_view)> apply;
};

using DoubleRef = std::function<double&(RunConfig&)>;
using Check = std::function<bool(double)>;

inline FieldSpec number(std::string section, std::string key, DoubleRef ref, Check ok, std::string requirement) {
    return {std::move(section), std::move(key),
            [ref = std::move(ref), ok = std::move(ok), requirement = std::move(requirement)](
                RunConfig& c, std::string_view raw) -> std::string {
                const auto v = parse_double(raw);
                if (!v) {
                    return "expected a number, got '" + std::string(trim(raw)) + "'";
                }
                if (!ok(*v)) {
                    return "must be " + requirement + ", got " + std::string(trim(raw));
                }
                ref(c) = *v;
                return {};
            }};
}

inline FieldSpec number_list(std::string section, std::string key, std::function<std::vector<double>&(RunConfig&)> ref,
                             Check ok, std::string requirement) {
    return {std::move(section), std::move(key),
            [ref = std::move(ref), ok = std::move(ok), requirement = std::move(requirement)](
                RunConfig& c, std::string_view raw) -> std::string {
                std::vector<double> values;
                for (const auto& item : split_list(raw)) {
                    const auto v = parse_double(item);
                    if (!v) {
                        return "expected a comma-separated number list, got '" + item + "'";
                    }
                    if (!ok(*v)) {
                        return "every entry must be " + requirement + ", got " + item;
                    }
                    values.push_back(*v);
                }
                if (values.empty()) {
                    return "empty list";
                }
                ref(c) = std::move(values);
                return {};
            }};
}

inline bool finite(double v) { return std::isfinite(v); }
inline bool positive(double v) { return std::isfinite(v) && v > 0.0; }
inline bool non_negative(double v) { return std::isfinite(v) && v >= 0.0; }
inline bool negative(double v) { return std::isfinite(v) && v < 0.0; }
inline bool slope_deg(double v) { return std::isfinite(v) && std::abs(deg_to_rad(v)) <= Terrain::kMaxSlope; }

inline SweepAxes& sweep(RunConfig& c) { return c.sweep ? *c.sweep : c.sweep.emplace(); }
inline TuningAxes& tuning(RunConfig& c) { return c.tuning ? *c.tuning : c.tuning.emplace(); }

inline void add_gains(std::vector<FieldSpec>& f, const std::string& prefix, std::function<PidGains&(RunConfig&)> g) {
    f.push_back(number("pid", prefix + "_kp", [g](RunConfig& c) -> double& { return g(c).kp; }, non_negative, ">= 0"));
    f.push_back(number("pid", prefix + "_ki", [g](RunConfig& c) -> double& { return g(c).ki; }, non_negative, ">= 0"));
    f.push_back(number("pid", prefix + "_kd", [g](RunConfig& c) -> double& { return g(c).kd; }, non_negative, ">= 0"));
    f.push_back(number("pid", prefix + "_i_limit", [g](RunConfig& c) -> double& { return g(c).i_limit; },
                       non_negative, ">= 0"));
}

inline void add_grid(std::vector<FieldSpec>& f, const std::string& prefix, std::function<PidTuningGrid&(RunConfig&)> g) {
    f.push_back(number_list("tuning", prefix + "kp", [g](RunConfig& c) -> std::vector<double>& { return g(c).kp; },
                            non_negative, ">= 0"));
    f.push_back(number_list("tuning", prefix + "ki", [g](RunConfig& c) -> std::vector<double>& { return g(c).ki; },
                            non_negative, ">= 0"));
    f.push_back(number_list("tuning", prefix + "kd", [g](RunConfig& c) -> std::vector<double>& { return g(c).kd; },
                            non_negative, ">= 0"));
}

inline const std::vector<FieldSpec>& fields() {
    static const std::vector<FieldSpec> table = [] {
        std::vector<FieldSpec> f;
        auto sc = [](auto member) { return [member](RunConfig& c) -> double& { return member(c.scenario); }; };

        f.push_back(number("vehicle", "m", sc([](ScenarioConfig& s) -> double& { return s.params.m; }), positive, "> 0"));
        f.push_back(number("vehicle", "Ixx", sc([](ScenarioConfig& s) -> double& { return s.params.Ixx; }), positive, "> 0"));
        f.push_back(number("vehicle", "bc", sc([](ScenarioConfig& s) -> double& { return s.params.bc; }), positive, "> 0"));
        f.push_back(number("vehicle", "g", sc([](ScenarioConfig& s) -> double& { return s.params.g; }), positive, "> 0"));
        f.push_back(number("vehicle", "mass_scale", sc([](ScenarioConfig& s) -> double& { return s.mass_scale; }),
                           positive, "> 0"));

        f.push_back({"terrain", "alpha", [](RunConfig& c, std::string_view raw) -> std::string {
                         const auto v = parse_double(raw);
                         if (!v) {
                             return "expected a number, got '" + std::string(trim(raw)) + "'";
                         }
                         if (!slope_deg(*v)) {
                             return "must be a slope in degrees strictly inside (-90, 90), got " +
                                    std::string(trim(raw));
                         }
                         c.set_alpha_deg(*v);
                         return {};
                     }});

        f.push_back({"controller", "type", [](RunConfig& c, std::string_view raw) -> std::string {
                         const auto k = parse_controller(raw);
                         if (!k) {
                             return "must be indi or pid, got '" + std::string(trim(raw)) + "'";
                         }
                         c.scenario.controller = *k;
                         return {};
                     }});
        auto ctl = [](auto member) { return [member](RunConfig& c) -> double& { return member(c.scenario.control); }; };
        f.push_back(number("controller", "theta_star", ctl([](ControllerConfig& k) -> double& { return k.theta_star; }),
                           negative, "< 0"));
        f.push_back(number("controller", "k1", ctl([](ControllerConfig& k) -> double& { return k.k1; }), positive, "> 0"));
        f.push_back(number("controller", "k2", ctl([](ControllerConfig& k) -> double& { return k.k2; }), positive, "> 0"));
        f.push_back(number("controller", "k3", ctl([](ControllerConfig& k) -> double& { return k.k3; }), positive, "> 0"));
        f.push_back(number("controller", "eps_y", ctl([](ControllerConfig& k) -> double& { return k.eps_y; }), positive,
                           "> 0"));
        f.push_back(number("controller", "eps_phi", ctl([](ControllerConfig& k) -> double& { return k.eps_phi; }),
                           positive, "> 0"));
        f.push_back({"controller", "effectiveness_mode", [](RunConfig& c, std::string_view raw) -> std::string {
                         const auto s = trim(raw);
                         if (s == "true_state") {
                             c.scenario.control.effectiveness_mode = EffectivenessMode::TrueState;
                         } else if (s == "fixed_nominal") {
                             c.scenario.control.effectiveness_mode = EffectivenessMode::FixedNominal;
                         } else {
                             return "must be true_state or fixed_nominal, got '" + std::string(s) + "'";
                         }
                         return {};
                     }});
        f.push_back(number("controller", "nominal_h", ctl([](ControllerConfig& k) -> double& { return k.nominal_h; }),
                           positive, "> 0"));
        f.push_back(number("controller", "u1_max", ctl([](ControllerConfig& k) -> double& { return k.u1_max; }),
                           positive, "> 0"));
        f.push_back(number("controller", "u2_max", ctl([](ControllerConfig& k) -> double& { return k.u2_max; }),
                           positive, "> 0"));
        f.push_back(number("controller", "tau_f", ctl([](ControllerConfig& k) -> double& { return k.tau_f; }),
                           non_negative, ">= 0"));
        f.push_back({"controller", "drift_compensation", [](RunConfig& c, std::string_view raw) -> std::string {
                         const auto b = parse_bool(raw);
                         if (!b) {
                             return "must be true or false, got '" + std::string(trim(raw)) + "'";
                         }
                         c.scenario.control.drift_compensation = *b;
                         return {};
                     }});

        add_gains(f, "thrust", [](RunConfig& c) -> PidGains& { return c.scenario.pid.thrust; });
        add_gains(f, "moment", [](RunConfig& c) -> PidGains& { return c.scenario.pid.moment; });
        add_gains(f, "drift", [](RunConfig& c) -> PidGains& { return c.scenario.pid.drift; });

        f.push_back(number("sim", "h0", sc([](ScenarioConfig& s) -> double& { return s.h0; }), positive, "> 0"));
        f.push_back(number("sim", "descent_kick", sc([](ScenarioConfig& s) -> double& { return s.descent_kick; }), finite,
                           "finite"));
        f.push_back(number("sim", "dt", sc([](ScenarioConfig& s) -> double& { return s.dt; }), positive, "> 0"));
        f.push_back(number("sim", "t_max", sc([](ScenarioConfig& s) -> double& { return s.t_max; }), positive, "> 0"));
        f.push_back(number("sim", "touchdown_threshold",
                           sc([](ScenarioConfig& s) -> double& { return s.touchdown_threshold; }), non_negative,
                           ">= 0"));

        f.push_back(number_list("sweep", "theta_star",
                                [](RunConfig& c) -> std::vector<double>& { return sweep(c).theta_star; }, negative,
                                "< 0"));
        f.push_back(number_list("sweep", "alpha", [](RunConfig& c) -> std::vector<double>& { return sweep(c).alpha_deg; },
                                slope_deg, "a slope in degrees strictly inside (-90, 90)"));
        f.push_back({"sweep", "controller", [](RunConfig& c, std::string_view raw) -> std::string {
                         std::vector<ControllerKind> kinds;
                         for (const auto& item : split_list(raw)) {
                             const auto k = parse_controller(item);
                             if (!k) {
                                 return "entries must be indi or pid, got '" + item + "'";
                             }
                             kinds.push_back(*k);
                         }
                         if (kinds.empty()) {
                             return "empty list";
                         }
                         sweep(c).controller = std::move(kinds);
                         return {};
                     }});

        add_grid(f, "", [](RunConfig& c) -> PidTuningGrid& { return tuning(c).thrust; });
        add_grid(f, "moment_", [](RunConfig& c) -> PidTuningGrid& { return tuning(c).moment; });
        add_grid(f, "drift_", [](RunConfig& c) -> PidTuningGrid& { return tuning(c).drift; });
        f.push_back(number("tuning", "slope_alpha", [](RunConfig& c) -> double& { return tuning(c).slope_alpha_deg; },
                           slope_deg, "a slope in degrees strictly inside (-90, 90)"));
        return f;
    }();
    return table;
}

/// Line number (1-based) of every "section.key" assignment in the raw text.
inline std::map<std::string, int> key_lines(const std::string& text) {
    std::map<std::string, int> lines;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto s = trim(line);
        if (s.empty() || s.front() == ';' || s.front() == '#') {
            continue;
        }
        if (s.front() == '[' && s.back() == ']') {
            section = std::string(trim(s.substr(1, s.size() - 2)));
            lines.emplace(section, n);
            continue;
        }
        const auto eq = s.find('=');
        if (eq != std::string_view::npos) {
            lines.emplace(section + "." + std::string(trim(s.substr(0, eq))), n);
        }
    }
    return lines;
}

} // namespace detail

/// Parses INI text. `origin` labels diagnostics (usually the file path).
/// Every rejection is a ConfigError carrying "section.key" and its line.
inline RunConfig parse_config(const std::string& text, const std::string& origin = "<config>") {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("syntax", origin + ":" + std::to_string(e.line()) + ": " + e.message(),
                          static_cast<int>(e.line()));
    }
    const auto lines = detail::key_lines(text);
    auto line_of = [&](const std::string& field) {
        const auto it = lines.find(field);
        return it == lines.end() ? 0 : it->second;
    };
    auto fail = [&](const std::string& field, const std::string& what) -> ConfigError {
        const int line = line_of(field);
        return ConfigError(field, origin + ":" + std::to_string(line) + ": " + field + ": " + what, line);
    };

    std::map<std::string, const detail::FieldSpec*> specs;
    for (const auto& f : detail::fields()) {
        specs.emplace(f.section + "." + f.key, &f);
    }

    RunConfig cfg;
    // Section headers come from the raw text: the INI reader drops empty ones.
    for (const auto& [name, line] : lines) {
        if (name.find('.') != std::string::npos) {
            continue;
        }
        bool known_section = false;
        for (const auto& f : detail::fields()) {
            known_section = known_section || f.section == name;
        }
        if (!known_section) {
            throw fail(name, "unknown section [" + name + "]");
        }
        if (name == "sweep") {
            detail::sweep(cfg);
        } else if (name == "tuning") {
            detail::tuning(cfg);
        }
    }
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            const int line = line_of("." + section);
            throw ConfigError(section, origin + ":" + std::to_string(line) + ": " + section + ": key outside any section",
                              line);
        }
        for (const auto& [key, value] : body) {
            const std::string field = section + "." + key;
            const auto it = specs.find(field);
            if (it == specs.end()) {
                throw fail(field, "unknown key");
            }
            if (const std::string err = it->second->apply(cfg, value.data()); !err.empty()) {
                throw fail(field, err);
            }
        }
    }

    const ScenarioConfig& s = cfg.scenario;
    if (!(s.h0 > s.touchdown_threshold)) {
        throw fail("sim.h0", "must exceed sim.touchdown_threshold");
    }
    if (s.t_max < s.dt) {
        throw fail("sim.t_max", "must be at least sim.dt");
    }
    if (cfg.sweep && cfg.sweep->theta_star.empty() && cfg.sweep->alpha_deg.empty() && cfg.sweep->controller.empty()) {
        throw fail("sweep", "empty grid: give at least one of theta_star, alpha, controller");
    }
    if (cfg.tuning && cfg.tuning->thrust.size() == 0) {
        throw fail("tuning", "kp, ki and kd lists are required");
    }
    if (cfg.tuning && (cfg.tuning->moment.size() > 0) != (cfg.tuning->drift.size() > 0)) {
        throw fail("tuning", "moment_* and drift_* grids must be given together");
    }
    if (const std::string bad = s.invalid_field(); !bad.empty()) {
        throw fail(bad, "invalid value");
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("file", "cannot read config file " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

namespace detail {

inline std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + format_exact(v[i]);
    }
    return out;
}

} // namespace detail

/// Canonical INI rendering: every key, fixed order, shortest exact decimals.
/// parse_config(write_config(c)) reproduces c exactly.
inline std::string write_config(const RunConfig& cfg) {
    const ScenarioConfig& s = cfg.scenario;
    const ControllerConfig& k = s.control;
    std::ostringstream o;
    auto kv = [&](std::string_view key, double v) { o << key << " = " << format_exact(v) << '\n'; };
    auto gains = [&](std::string_view prefix, const PidGains& g) {
        const std::string p(prefix);
        kv(p + "_kp", g.kp);
        kv(p + "_ki", g.ki);
        kv(p + "_kd", g.kd);
        kv(p + "_i_limit", g.i_limit);
    };

    o << "[vehicle]\n";
    kv("m", s.params.m);
    kv("Ixx", s.params.Ixx);
    kv("bc", s.params.bc);
    kv("g", s.params.g);
    kv("mass_scale", s.mass_scale);
    o << "\n[terrain]\n";
    kv("alpha", cfg.alpha_deg);
    o << "\n[controller]\n";
    o << "type = " << to_string(s.controller) << '\n';
    kv("theta_star", k.theta_star);
    kv("k1", k.k1);
    kv("k2", k.k2);
    kv("k3", k.k3);
    kv("eps_y", k.eps_y);
    kv("eps_phi", k.eps_phi);
    o << "effectiveness_mode = " << to_string(k.effectiveness_mode) << '\n';
    kv("nominal_h", k.nominal_h);
    kv("u1_max", k.u1_max);
    kv("u2_max", k.u2_max);
    kv("tau_f", k.tau_f);
    o << "drift_compensation = " << (k.drift_compensation ? "true" : "false") << '\n';
    o << "\n[pid]\n";
    gains("thrust", s.pid.thrust);
    gains("moment", s.pid.moment);
    gains("drift", s.pid.drift);
    o << "\n[sim]\n";
    kv("h0", s.h0);
    kv("descent_kick", s.descent_kick);
    kv("dt", s.dt);
    kv("t_max", s.t_max);
    kv("touchdown_threshold", s.touchdown_threshold);
    if (cfg.sweep) {
        const SweepAxes& a = *cfg.sweep;
        o << "\n[sweep]\n";
        if (!a.theta_star.empty()) {
            o << "theta_star = " << detail::join(a.theta_star) << '\n';
        }
        if (!a.alpha_deg.empty()) {
            o << "alpha = " << detail::join(a.alpha_deg) << '\n';
        }
        if (!a.controller.empty()) {
            o << "controller = ";
            for (std::size_t i = 0; i < a.controller.size(); ++i) {
                o << (i ? ", " : "") << to_string(a.controller[i]);
            }
            o << '\n';
        }
    }
    if (cfg.tuning) {
        const TuningAxes& t = *cfg.tuning;
        auto grid = [&](std::string_view prefix, const PidTuningGrid& g) {
            const std::string p(prefix);
            o << p << "kp = " << detail::join(g.kp) << '\n';
            o << p << "ki = " << detail::join(g.ki) << '\n';
            o << p << "kd = " << detail::join(g.kd) << '\n';
        };
        o << "\n[tuning]\n";
        grid("", t.thrust);
        if (t.has_slope_stage()) {
            grid("moment_", t.moment);
            grid("drift_", t.drift);
            kv("slope_alpha", t.slope_alpha_deg);
        }
    }
    return o.str();
}

/// One cell of an expanded sweep: the standalone configuration (no sweep
/// section) and a stable directory name.
struct SweepCell {
    RunConfig config;
    std::string name;
};

/// Cross product in controller, theta_star, alpha order; ids are ordinals.
inline std::vector<SweepCell> expand_sweep(const RunConfig& base) {
    if (!base.sweep) {
        throw ConfigError("sweep", "config has no [sweep] section");
    }
    const SweepAxes& a = *base.sweep;
    const auto controllers = a.controller.empty() ? std::vector<ControllerKind>{base.scenario.controller} : a.controller;
    const auto thetas = a.theta_star.empty() ? std::vector<double>{base.scenario.control.theta_star} : a.theta_star;
    const auto alphas = a.alpha_deg.empty() ? std::vector<double>{base.alpha_deg} : a.alpha_deg;

    std::vector<SweepCell> cells;
    for (ControllerKind kind : controllers) {
        for (double theta : thetas) {
            for (double alpha : alphas) {
                SweepCell cell;
                cell.config = base;
                cell.config.sweep.reset();
                cell.config.tuning.reset();
                cell.config.scenario.controller = kind;
                cell.config.scenario.control.theta_star = theta;
                cell.config.set_alpha_deg(alpha);
                cell.config.scenario.id = cells.size();
                char id[16];
                std::snprintf(id, sizeof id, "%03zu", cells.size());
                cell.name = std::string(id) + "_" + std::string(to_string(kind)) + "_theta" + format_g(theta, 6) +
                            "_alpha" + format_g(alpha, 6);
                cells.push_back(std::move(cell));
            }
        }
    }
    return cells;
}

} // namespace flowland::io
