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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace flowland {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model function was evaluated on non-finite or out-of-domain input.
class ModelError : public Error {
public:
    using Error::Error;
};

/// The integrator produced a non-finite state component.
class IntegrationError : public Error {
public:
    IntegrationError(std::string component, const std::string& what)
        : Error(what), component_(std::move(component)) {}

    const std::string& component() const noexcept { return component_; }

private:
    std::string component_;
};

/// A camera station (or the body center) is at or below the terrain.
class GroundPenetrationError : public Error {
public:
    using Error::Error;
};

/// Flow observables are undefined because a clearance is non-positive.
class ObservationUnavailable : public Error {
public:
    using Error::Error;
};

/// Control effectiveness cannot be evaluated (non-positive clearance).
class EffectivenessUndefined : public Error {
public:
    using Error::Error;
};

/// A metric has no samples to work with, or its domain is violated.
class MetricError : public Error {
public:
    using Error::Error;
};

/// Every candidate in a PID tuning grid failed to land.
class TuningError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value. Carries the offending field (section.key)
/// and, when known, the 1-based line in the source file.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what, int line = 0)
        : Error(what), field_(std::move(field)), line_(line) {}

    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

} // namespace flowland
