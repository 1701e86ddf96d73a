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


// Key-value landing summary written next to every run log.
#pragma once

#include "flowland/analysis.hpp"
#include "flowland/errors.hpp"
#include "flowland/io/text.hpp"
#include "flowland/simulation.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace flowland::io {

inline constexpr int kMetricDigits = 9;

/// Ordered key/value pairs; values are already rendered.
using MetricsRecord = std::vector<std::pair<std::string, std::string>>;

inline MetricsRecord metrics_record(const SimLog& log, const ScenarioConfig& cfg, double alpha_deg) {
    const LandingMetrics m = landing_metrics(log, cfg);
    auto num = [](double v) { return format_g(v, kMetricDigits); };
    std::string message = log.terminal.message;
    for (char& c : message) {
        if (c == '\n' || c == '\r') {
            c = ' ';
        }
    }
    MetricsRecord r;
    r.emplace_back("id", std::to_string(cfg.id));
    r.emplace_back("controller", std::string(to_string(cfg.controller)));
    r.emplace_back("theta_star", num(cfg.control.theta_star));
    r.emplace_back("alpha_deg", num(alpha_deg));
    r.emplace_back("drift_compensation", cfg.control.drift_compensation ? "true" : "false");
    r.emplace_back("status", std::string(to_string(log.terminal.kind)));
    r.emplace_back("message", message);
    r.emplace_back("t_end", num(log.terminal.t));
    r.emplace_back("samples", std::to_string(log.rows.size()));
    r.emplace_back("complete", m.complete ? "true" : "false");
    r.emplace_back("rmse_y1", num(m.rmse_y1));
    r.emplace_back("rmse_y2", num(m.rmse_y2));
    r.emplace_back("phi_f_deg", num(m.phi_f_deg()));
    r.emplace_back("Y_drift", num(m.Y_drift));
    r.emplace_back("v_td", num(m.v_td));
    r.emplace_back("decay_slope", num(m.decay_slope));
    if (!log.rows.empty()) {
        r.emplace_back("y1_last", num(log.rows.back().obs.y1));
        r.emplace_back("y2_last", num(log.rows.back().obs.y2));
    }
    return r;
}

inline std::string write_metrics(const MetricsRecord& record) {
    std::string out;
    for (const auto& [k, v] : record) {
        out += k + " = " + v + "\n";
    }
    return out;
}

inline std::map<std::string, std::string> parse_metrics(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (trim(line).empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error("metrics line " + std::to_string(n) + ": expected key = value");
        }
        out[std::string(trim(std::string_view(line).substr(0, eq)))] =
            std::string(trim(std::string_view(line).substr(eq + 1)));
    }
    return out;
}

/// Numeric field, or nullopt when absent, unparsable or NaN.
inline std::optional<double> metric_value(const std::map<std::string, std::string>& m, const std::string& key) {
    const auto it = m.find(key);
    if (it == m.end()) {
        return std::nullopt;
    }
    const auto v = parse_double(it->second);
    if (!v || std::isnan(*v)) {
        return std::nullopt;
    }
    return v;
}

} // namespace flowland::io
