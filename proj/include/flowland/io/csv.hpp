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


// Fixed-schema CSV serialization of simulation logs.
#pragma once

#include "flowland/errors.hpp"
#include "flowland/io/text.hpp"
#include "flowland/simulation.hpp"

#include <array>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace flowland::io {

inline constexpr std::array<std::string_view, 18> kLogNumericColumns = {
    "t", "Y", "Z", "phi", "Ydot", "Zdot", "phidot", "h", "hL",
    "hR", "thetaL", "thetaR", "thetaY", "y1", "y2", "y3", "u1", "u2"};

inline constexpr std::string_view kLogHeader =
    "t,Y,Z,phi,Ydot,Zdot,phidot,h,hL,hR,thetaL,thetaR,thetaY,y1,y2,y3,u1,u2,phase";

inline constexpr int kLogDigits = 9;

inline std::string write_log_csv(const SimLog& log) {
    std::string out(kLogHeader);
    out += '\n';
    for (const LogRow& r : log.rows) {
        const std::array<double, 18> v = {r.t,         r.state.Y,      r.state.Z,      r.state.phi,    r.state.Ydot,
                                          r.state.Zdot, r.state.phidot, r.clr.h,        r.clr.hL,       r.clr.hR,
                                          r.obs.thetaL, r.obs.thetaR,   r.obs.thetaY,   r.obs.y1,       r.obs.y2,
                                          r.obs.y3,     r.cmd.u1,       r.cmd.u2};
        for (double x : v) {
            out += format_g(x, kLogDigits);
            out += ',';
        }
        out += to_string(r.phase);
        out += '\n';
    }
    return out;
}

/// A parsed log: one numeric row per tick plus the phase label.
struct LogTable {
    std::vector<std::array<double, 18>> rows;
    std::vector<std::string> phase;

    static constexpr std::size_t index(std::string_view column) {
        for (std::size_t i = 0; i < kLogNumericColumns.size(); ++i) {
            if (kLogNumericColumns[i] == column) {
                return i;
            }
        }
        return kLogNumericColumns.size();
    }

    std::vector<double> column(std::string_view name) const {
        const std::size_t i = index(name);
        if (i >= kLogNumericColumns.size()) {
            throw Error("log column not found: " + std::string(name));
        }
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) {
            out.push_back(r[i]);
        }
        return out;
    }

    bool empty() const noexcept { return rows.empty(); }
};

inline LogTable parse_log_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != kLogHeader) {
        throw Error("log CSV: missing or unexpected header");
    }
    LogTable table;
    int n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_list(line);
        if (fields.size() != kLogNumericColumns.size() + 1) {
            throw Error("log CSV line " + std::to_string(n) + ": expected 19 fields");
        }
        std::array<double, 18> row{};
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto v = parse_double(fields[i]);
            if (!v) {
                throw Error("log CSV line " + std::to_string(n) + ": bad number in column " +
                            std::string(kLogNumericColumns[i]));
            }
            row[i] = *v;
        }
        table.rows.push_back(row);
        table.phase.push_back(fields.back());
    }
    return table;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) {
        throw Error("cannot write " + path);
    }
}

inline LogTable read_log_csv(const std::string& path) { return parse_log_csv(read_text_file(path)); }

} // namespace flowland::io
