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


// Shared fixtures and independent oracles for the test suite.
#pragma once

#include "flowland/dynamics.hpp"
#include "flowland/io/config.hpp"
#include "flowland/simulation.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

namespace flowland::test {

inline std::string source_path(const std::string& relative) {
    return std::string(FLOWLAND_SOURCE_DIR) + "/" + relative;
}

/// The shipped reference configuration.
inline io::RunConfig reference_config() { return io::load_config(source_path("configs/default.ini")); }

inline ScenarioConfig reference_scenario() { return reference_config().scenario; }

inline ScenarioConfig slope_scenario(double alpha_deg, ControllerKind kind = ControllerKind::Indi) {
    io::RunConfig cfg = reference_config();
    cfg.set_alpha_deg(alpha_deg);
    cfg.scenario.controller = kind;
    return cfg.scenario;
}

/// Reflection through the vertical plane Y = 0.
inline VehicleState mirror(const VehicleState& s) { return {-s.Y, s.Z, -s.phi, -s.Ydot, s.Zdot, -s.phidot}; }

/// Camera clearances by intersecting a vertical ray from each camera with
/// the terrain line through the origin at angle alpha, parametrised along
/// the line rather than through Z = Y tan(alpha).
struct RayClearances {
    double left = 0.0;
    double right = 0.0;
};

inline RayClearances ray_oracle(const VehicleState& s, double alpha, double bc) {
    auto ground_height_below = [&](double y) {
        const double along = y / std::cos(alpha); // distance along the terrain line
        return along * std::sin(alpha);
    };
    const double yl = s.Y - bc * std::cos(s.phi);
    const double zl = s.Z - bc * std::sin(s.phi);
    const double yr = s.Y + bc * std::cos(s.phi);
    const double zr = s.Z + bc * std::sin(s.phi);
    return {zl - ground_height_below(yl), zr - ground_height_below(yr)};
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::mt19937_64 rng{std::random_device{}()};
        path_ = std::filesystem::temp_directory_path() / ("flowland_" + tag + "_" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str(const std::string& child = {}) const { return child.empty() ? path_.string() : (path_ / child).string(); }

private:
    std::filesystem::path path_;
};

} // namespace flowland::test
