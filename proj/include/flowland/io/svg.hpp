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


// Dependency-free SVG figures from logged runs: stacked time-series panels
// and a side view of the descent with periodic vehicle snapshots.
#pragma once

#include "flowland/errors.hpp"
#include "flowland/io/csv.hpp"
#include "flowland/io/text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flowland::io {

struct PlotSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

struct PlotPanel {
    std::string ylabel;
    std::vector<PlotSeries> series;
};

namespace detail {

inline std::string n(double v) { return format_g(v, 6); }

inline std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    /// Guarantees a non-degenerate, finite interval.
    Range padded() const {
        Range r = *this;
        if (!std::isfinite(r.lo)) {
            return {0.0, 1.0};
        }
        if (r.hi - r.lo < 1e-12 * std::max(1.0, std::abs(r.lo))) {
            const double d = std::max(1e-3, 0.05 * std::abs(r.lo));
            r.lo -= d;
            r.hi += d;
        }
        return r;
    }
};

/// Round tick positions (1, 2, 5 x 10^k spacing) covering [lo, hi].
inline std::vector<double> ticks(double lo, double hi, int target = 5) {
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) {
            break;
        }
    }
    std::vector<double> out;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) {
        out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    }
    return out;
}

/// Keeps at most `max_points` evenly spaced samples plus the last one.
inline std::vector<std::size_t> thin(std::size_t size, std::size_t max_points = 1500) {
    std::vector<std::size_t> idx;
    if (size == 0) {
        return idx;
    }
    const std::size_t stride = std::max<std::size_t>(1, (size + max_points - 1) / max_points);
    for (std::size_t i = 0; i < size; i += stride) {
        idx.push_back(i);
    }
    if (idx.back() != size - 1) {
        idx.push_back(size - 1);
    }
    return idx;
}

inline constexpr double kWidth = 720.0;
inline constexpr double kPanelHeight = 150.0;
inline constexpr double kLeft = 80.0;
inline constexpr double kRight = 20.0;
inline constexpr double kTop = 40.0;
inline constexpr double kGap = 30.0;

} // namespace detail

/// Vertically stacked panels sharing the x axis. Each panel is emitted as a
/// <g class="panel"> element.
inline std::string render_panels(const std::vector<PlotPanel>& panels, const std::string& title,
                                 const std::string& xlabel) {
    using namespace detail;
    if (panels.empty()) {
        throw Error("plot: no panels");
    }
    Range xr;
    for (const auto& p : panels) {
        for (const auto& s : p.series) {
            for (double v : s.x) {
                xr.add(v);
            }
        }
    }
    xr = xr.padded();
    const double plot_w = kWidth - kLeft - kRight;
    const double height = kTop + panels.size() * (kPanelHeight + kGap) + 20.0;
    auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };

    std::string o;
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + n(kWidth) + "\" height=\"" + n(height) +
         "\" viewBox=\"0 0 " + n(kWidth) + " " + n(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o += "<text x=\"" + n(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
         "</text>\n";

    for (std::size_t i = 0; i < panels.size(); ++i) {
        const PlotPanel& p = panels[i];
        const double top = kTop + i * (kPanelHeight + kGap);
        Range yr;
        for (const auto& s : p.series) {
            for (double v : s.y) {
                yr.add(v);
            }
        }
        yr = yr.padded();
        auto sy = [&](double y) { return top + kPanelHeight - (y - yr.lo) / (yr.hi - yr.lo) * kPanelHeight; };

        o += "<g class=\"panel\">\n";
        o += "<rect x=\"" + n(kLeft) + "\" y=\"" + n(top) + "\" width=\"" + n(plot_w) + "\" height=\"" +
             n(kPanelHeight) + "\" fill=\"none\" stroke=\"#444\"/>\n";
        for (double tv : ticks(yr.lo, yr.hi)) {
            o += "<line x1=\"" + n(kLeft - 4) + "\" y1=\"" + n(sy(tv)) + "\" x2=\"" + n(kLeft) + "\" y2=\"" +
                 n(sy(tv)) + "\" stroke=\"#444\"/>";
            o += "<text x=\"" + n(kLeft - 6) + "\" y=\"" + n(sy(tv) + 4) + "\" text-anchor=\"end\">" + n(tv) +
                 "</text>\n";
        }
        for (double tv : ticks(xr.lo, xr.hi, 8)) {
            o += "<line x1=\"" + n(sx(tv)) + "\" y1=\"" + n(top + kPanelHeight) + "\" x2=\"" + n(sx(tv)) +
                 "\" y2=\"" + n(top + kPanelHeight + 4) + "\" stroke=\"#444\"/>";
            if (i + 1 == panels.size()) {
                o += "<text x=\"" + n(sx(tv)) + "\" y=\"" + n(top + kPanelHeight + 16) +
                     "\" text-anchor=\"middle\">" + n(tv) + "</text>";
            }
            o += "\n";
        }
        o += "<text x=\"16\" y=\"" + n(top + kPanelHeight / 2) + "\" transform=\"rotate(-90 16 " +
             n(top + kPanelHeight / 2) + ")\" text-anchor=\"middle\">" + escape(p.ylabel) + "</text>\n";
        for (const auto& s : p.series) {
            std::string pts;
            for (std::size_t k : thin(std::min(s.x.size(), s.y.size()))) {
                if (std::isfinite(s.x[k]) && std::isfinite(s.y[k])) {
                    pts += n(sx(s.x[k])) + "," + n(sy(s.y[k])) + " ";
                }
            }
            if (!pts.empty()) {
                pts.pop_back();
            }
            o += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"" +
                 (s.dashed ? " stroke-dasharray=\"5,4\"" : "") + " points=\"" + pts + "\"/>\n";
        }
        o += "</g>\n";
    }
    const double bottom = kTop + panels.size() * (kPanelHeight + kGap) + 4;
    o += "<text x=\"" + n(kLeft + plot_w / 2) + "\" y=\"" + n(bottom) + "\" text-anchor=\"middle\">" +
         escape(xlabel) + "</text>\n";
    o += "</svg>\n";
    return o;
}

/// Context for plots that need terrain or reference values absent from the log.
struct PlotContext {
    std::optional<double> theta_star;
    std::optional<double> alpha_deg;
    std::optional<double> eps_y;
    double bc = 0.2;
    double snapshot_interval = 0.5;
};

namespace detail {

inline PlotSeries constant(const std::vector<double>& t, double v, std::string color) {
    PlotSeries s;
    s.x = {t.front(), t.back()};
    s.y = {v, v};
    s.color = std::move(color);
    s.dashed = true;
    return s;
}

inline void require_rows(const LogTable& log) {
    if (log.empty()) {
        throw Error("plot: log has no samples");
    }
}

} // namespace detail

/// h, hdot, y1 and u1 against time.
inline std::string plot_timeseries(const LogTable& log, const PlotContext& ctx = {}) {
    detail::require_rows(log);
    const auto t = log.column("t");
    const auto thL = log.column("thetaL"), thR = log.column("thetaR");
    const auto hL = log.column("hL"), hR = log.column("hR");
    std::vector<double> hdot(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        hdot[i] = 0.5 * (thL[i] * hL[i] + thR[i] * hR[i]);
    }
    std::vector<PlotPanel> panels(4);
    panels[0] = {"h [m]", {{t, log.column("h")}}};
    panels[1] = {"hdot [m/s]", {{t, hdot}}};
    panels[2] = {"y1 [1/s]", {{t, log.column("y1")}}};
    if (ctx.theta_star) {
        panels[2].series.push_back(detail::constant(t, *ctx.theta_star, "#d62728"));
    }
    panels[3] = {"u1 [N]", {{t, log.column("u1")}}};
    return render_panels(panels, "Constant-divergence landing", "t [s]");
}

/// h, phi, y2, u1 and u2 against time.
inline std::string plot_slope_landing(const LogTable& log, const PlotContext& ctx = {}) {
    detail::require_rows(log);
    const auto t = log.column("t");
    std::vector<double> phi_deg = log.column("phi");
    for (double& v : phi_deg) {
        v *= 180.0 / 3.14159265358979323846;
    }
    std::vector<PlotPanel> panels(5);
    panels[0] = {"h [m]", {{t, log.column("h")}}};
    panels[1] = {"phi [deg]", {{t, phi_deg}}};
    if (ctx.alpha_deg) {
        panels[1].series.push_back(detail::constant(t, *ctx.alpha_deg, "#d62728"));
    }
    panels[2] = {"y2 [1/s]", {{t, log.column("y2")}}};
    if (ctx.eps_y) {
        panels[2].series.push_back(detail::constant(t, *ctx.eps_y, "#7f7f7f"));
        panels[2].series.push_back(detail::constant(t, -*ctx.eps_y, "#7f7f7f"));
    }
    panels[3] = {"u1 [N]", {{t, log.column("u1")}}};
    panels[4] = {"u2 [N m]", {{t, log.column("u2")}}};
    return render_panels(panels, "Landing on inclined terrain", "t [s]");
}

/// Times at which trajectory snapshots are drawn: every `interval` seconds
/// from the first sample, plus the final sample.
inline std::vector<std::size_t> snapshot_indices(const std::vector<double>& t, double interval) {
    if (!(interval > 0.0)) {
        throw Error("plot: snapshot interval must be positive");
    }
    std::vector<std::size_t> idx;
    if (t.empty()) {
        return idx;
    }
    double next = t.front();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= next - 1e-9) {
            idx.push_back(i);
            next = t.front() + std::floor((t[i] - t.front()) / interval + 1e-9 + 1.0) * interval;
        }
    }
    if (idx.back() != t.size() - 1) {
        idx.push_back(t.size() - 1);
    }
    return idx;
}

/// Side view in the Y-Z plane: terrain line, center path, and the vehicle
/// body with its thrust axis at fixed time intervals (<g class="snapshot">).
inline std::string plot_trajectory(const LogTable& log, const PlotContext& ctx = {}) {
    using namespace detail;
    require_rows(log);
    const auto t = log.column("t"), Y = log.column("Y"), Z = log.column("Z"), phi = log.column("phi");
    const double tan_a = std::tan(ctx.alpha_deg.value_or(0.0) * 3.14159265358979323846 / 180.0);
    const double bc = ctx.bc;

    Range yr, zr;
    for (std::size_t i = 0; i < Y.size(); ++i) {
        yr.add(Y[i] - bc);
        yr.add(Y[i] + bc);
        zr.add(Z[i] + bc);
    }
    yr = yr.padded();
    const double margin = 0.1 * (yr.hi - yr.lo) + bc;
    yr.lo -= margin;
    yr.hi += margin;
    zr.add(yr.lo * tan_a);
    zr.add(yr.hi * tan_a);
    zr = zr.padded();
    zr.hi += 0.05 * (zr.hi - zr.lo);

    const double w = kWidth - kLeft - kRight;
    const double scale = std::min(w / (yr.hi - yr.lo), 600.0 / (zr.hi - zr.lo));
    const double h = (zr.hi - zr.lo) * scale;
    const double height = kTop + h + 50.0;
    auto px = [&](double y) { return kLeft + (y - yr.lo) * scale; };
    auto pz = [&](double z) { return kTop + (zr.hi - z) * scale; };

    std::string o;
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + n(kWidth) + "\" height=\"" + n(height) +
         "\" viewBox=\"0 0 " + n(kWidth) + " " + n(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o += "<text x=\"" + n(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">Landing trajectory "
         "(snapshots every " + n(ctx.snapshot_interval) + " s)</text>\n";
    o += "<line class=\"terrain\" x1=\"" + n(px(yr.lo)) + "\" y1=\"" + n(pz(yr.lo * tan_a)) + "\" x2=\"" +
         n(px(yr.hi)) + "\" y2=\"" + n(pz(yr.hi * tan_a)) + "\" stroke=\"#8c564b\" stroke-width=\"2\"/>\n";

    std::string pts;
    for (std::size_t k : thin(Y.size())) {
        pts += n(px(Y[k])) + "," + n(pz(Z[k])) + " ";
    }
    pts.pop_back();
    o += "<polyline class=\"path\" fill=\"none\" stroke=\"#1f77b4\" stroke-dasharray=\"3,3\" points=\"" + pts +
         "\"/>\n";

    for (std::size_t k : snapshot_indices(t, ctx.snapshot_interval)) {
        const double c = std::cos(phi[k]), s = std::sin(phi[k]);
        const double arm = 0.6 * bc;
        o += "<g class=\"snapshot\" data-t=\"" + n(t[k]) + "\">";
        o += "<line x1=\"" + n(px(Y[k] - bc * c)) + "\" y1=\"" + n(pz(Z[k] - bc * s)) + "\" x2=\"" +
             n(px(Y[k] + bc * c)) + "\" y2=\"" + n(pz(Z[k] + bc * s)) + "\" stroke=\"#222\" stroke-width=\"2\"/>";
        o += "<line x1=\"" + n(px(Y[k])) + "\" y1=\"" + n(pz(Z[k])) + "\" x2=\"" + n(px(Y[k] - arm * s)) +
             "\" y2=\"" + n(pz(Z[k] + arm * c)) + "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>";
        o += "</g>\n";
    }

    o += "<text x=\"" + n(kLeft + w / 2) + "\" y=\"" + n(height - 12) + "\" text-anchor=\"middle\">Y [m] (" +
         n(yr.lo) + " to " + n(yr.hi) + "), Z [m] (" + n(zr.lo) + " to " + n(zr.hi) + ")</text>\n";
    o += "</svg>\n";
    return o;
}

} // namespace flowland::io
