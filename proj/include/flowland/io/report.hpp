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


// Comparison tables over run artifacts: setpoint layout (controller x
// theta_star RMSE), slope layout (controller x {rmse_y2, phi_f, Y_drift} per
// slope), or a single-run summary.
#pragma once

#include "flowland/errors.hpp"
#include "flowland/io/csv.hpp"
#include "flowland/io/metrics.hpp"
#include "flowland/io/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace flowland::io {

enum class ReportLayout { Setpoint, Slope, Single };

struct ReportTable {
    ReportLayout layout = ReportLayout::Single;
    std::vector<std::string> columns;
    std::vector<std::string> rows;
    std::vector<std::vector<std::optional<double>>> values; ///< rows x columns
    std::vector<std::string> warnings;

    std::size_t row_count() const { return rows.size(); }
    std::size_t column_count() const { return columns.size(); }
};

/// Metrics of one artifact directory, labelled by its directory name.
struct ReportCell {
    std::string name;
    std::map<std::string, std::string> metrics;
};

/// Reads `dir/metrics.txt` if present, otherwise every `dir/*/metrics.txt`
/// (sorted by directory name).
inline std::vector<ReportCell> collect_cells(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw Error("report: not a directory: " + dir.string());
    }
    std::vector<ReportCell> cells;
    if (fs::exists(dir / "metrics.txt")) {
        cells.push_back({dir.filename().string(), parse_metrics(read_text_file((dir / "metrics.txt").string()))});
        return cells;
    }
    std::vector<fs::path> subdirs;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_directory() && fs::exists(e.path() / "metrics.txt")) {
            subdirs.push_back(e.path());
        }
    }
    std::sort(subdirs.begin(), subdirs.end());
    for (const auto& p : subdirs) {
        cells.push_back({p.filename().string(), parse_metrics(read_text_file((p / "metrics.txt").string()))});
    }
    return cells;
}

namespace detail {

inline std::string label(const std::string& controller) {
    std::string s = controller;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

inline std::vector<double> distinct(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace detail

/// Builds the table for a set of cells. Rows are always INDI and PID for
/// sweeps; a missing cell leaves blanks and adds a warning.
inline ReportTable build_report(const std::vector<ReportCell>& cells, bool single_run = false) {
    if (cells.empty()) {
        throw Error("report: no run artifacts found");
    }
    ReportTable t;
    for (const auto& c : cells) {
        const auto st = c.metrics.find("status");
        if (st == c.metrics.end()) {
            t.warnings.push_back(c.name + ": metrics without status");
        } else if (st->second != "touchdown") {
            t.warnings.push_back(c.name + ": run ended in " + st->second);
        }
    }

    if (single_run) {
        t.layout = ReportLayout::Single;
        t.columns = {"rmse_y1", "rmse_y2", "phi_f_deg", "Y_drift", "v_td", "decay_slope"};
        const auto& m = cells.front().metrics;
        const auto ctl = m.find("controller");
        t.rows.push_back(ctl == m.end() ? cells.front().name : detail::label(ctl->second));
        std::vector<std::optional<double>> row;
        for (const auto& col : t.columns) {
            row.push_back(metric_value(m, col));
        }
        t.values.push_back(row);
        return t;
    }

    std::vector<double> thetas, alphas;
    for (const auto& c : cells) {
        if (const auto v = metric_value(c.metrics, "theta_star")) {
            thetas.push_back(*v);
        }
        if (const auto v = metric_value(c.metrics, "alpha_deg")) {
            alphas.push_back(*v);
        }
    }
    thetas = detail::distinct(thetas);
    alphas = detail::distinct(alphas);
    const bool slope = alphas.size() > 1 || (alphas.size() == 1 && alphas.front() != 0.0);

    t.rows = {"INDI", "PID"};
    std::vector<std::string> keys; ///< metric per column
    std::vector<double> axis;      ///< sweep coordinate per column
    if (slope) {
        t.layout = ReportLayout::Slope;
        if (thetas.size() > 1) {
            t.warnings.push_back("several theta_star values in a slope sweep; first cell per slope is shown");
        }
        for (double a : alphas) {
            const std::string tag = "alpha=" + format_g(a, 6) + "deg";
            for (const char* metric : {"rmse_y2", "phi_f_deg", "Y_drift"}) {
                t.columns.push_back(std::string(metric) + "@" + tag);
                keys.push_back(metric);
                axis.push_back(a);
            }
        }
    } else {
        t.layout = ReportLayout::Setpoint;
        std::stable_sort(thetas.begin(), thetas.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
        for (double th : thetas) {
            t.columns.push_back("rmse_y1@theta=" + format_g(th, 6));
            keys.push_back("rmse_y1");
            axis.push_back(th);
        }
    }

    t.values.assign(t.rows.size(), std::vector<std::optional<double>>(t.columns.size()));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (std::size_t col = 0; col < t.columns.size(); ++col) {
            const ReportCell* found = nullptr;
            for (const auto& c : cells) {
                const auto ctl = c.metrics.find("controller");
                const auto coord = metric_value(c.metrics, slope ? "alpha_deg" : "theta_star");
                if (ctl != c.metrics.end() && detail::label(ctl->second) == t.rows[r] && coord &&
                    *coord == axis[col]) {
                    found = &c;
                    break;
                }
            }
            if (!found) {
                t.warnings.push_back("missing cell: " + t.rows[r] + " " + t.columns[col]);
                continue;
            }
            t.values[r][col] = metric_value(found->metrics, keys[col]);
            if (!t.values[r][col]) {
                t.warnings.push_back("no value: " + t.rows[r] + " " + t.columns[col]);
            }
        }
    }
    return t;
}

inline ReportTable build_report(const std::filesystem::path& dir) {
    const bool single = std::filesystem::exists(dir / "metrics.txt");
    return build_report(collect_cells(dir), single);
}

inline std::string render_text(const ReportTable& t) {
    constexpr int kDigits = 4;
    std::vector<std::vector<std::string>> grid;
    grid.push_back({"controller"});
    for (const auto& c : t.columns) {
        grid.back().push_back(c);
    }
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        grid.push_back({t.rows[r]});
        for (const auto& v : t.values[r]) {
            grid.back().push_back(v ? format_g(*v, kDigits) : "");
        }
    }
    std::vector<std::size_t> width(grid.front().size(), 0);
    for (const auto& row : grid) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            width[i] = std::max(width[i], row[i].size());
        }
    }
    std::string out;
    for (std::size_t r = 0; r < grid.size(); ++r) {
        for (std::size_t i = 0; i < grid[r].size(); ++i) {
            std::string cell = grid[r][i];
            cell.resize(width[i], ' ');
            out += (i ? " | " : "") + cell;
        }
        while (!out.empty() && out.back() == ' ') {
            out.pop_back();
        }
        out += '\n';
        if (r == 0) {
            for (std::size_t i = 0; i < width.size(); ++i) {
                out += (i ? "-+-" : "") + std::string(width[i], '-');
            }
            out += '\n';
        }
    }
    return out;
}

inline std::string render_csv(const ReportTable& t) {
    std::string out = "controller";
    for (const auto& c : t.columns) {
        out += "," + c;
    }
    out += '\n';
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out += t.rows[r];
        for (const auto& v : t.values[r]) {
            out += "," + (v ? format_g(*v, kMetricDigits) : std::string());
        }
        out += '\n';
    }
    return out;
}

} // namespace flowland::io
