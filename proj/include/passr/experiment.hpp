// SPDX-License-Identifier: Apache-2.0
//
// passr - joint transmit and pinching beamforming for PASS-assisted symbiotic radio
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

// Experiment description: a base cell, solver settings, the solvers to run and one sweep axis.
// Read from a sectioned key = value file; see README.md for the schema.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "passr/baselines.hpp"
#include "passr/lgd.hpp"
#include "passr/scapso.hpp"

namespace passr
{

enum class SweepAxis
{
    transmit_power_dbm,
    antennas_per_waveguide,
    iterations,
};

enum class SolverKind
{
    lgd,
    scapso,
    elementwise,
    fixedpa,
    mimo,
};

const char* to_string(SweepAxis a);
const char* to_string(SolverKind s);
/// Throws ConfigError on an unknown name.
SweepAxis parse_sweep_axis(std::string_view name);
SolverKind parse_solver(std::string_view name);
/// Comma-separated solver names; duplicates and empty lists are errors.
std::vector<SolverKind> parse_solver_list(std::string_view list);

struct SolverSettings
{
    LgdConfig lgd;
    ScaConfig sca;
    PsoConfig pso;
    OuterConfig outer;
    ElementWiseConfig elementwise;
};

struct ExperimentSpec
{
    std::string scenario = "default";
    SystemConfig system;
    SolverSettings settings;
    std::vector<SolverKind> solvers{SolverKind::lgd, SolverKind::scapso, SolverKind::elementwise, SolverKind::fixedpa,
                                    SolverKind::mimo};
    SweepAxis axis = SweepAxis::transmit_power_dbm;
    std::vector<double> values{30.0};
    int num_realizations = 100;
    std::uint64_t seed = 1;

    /// Cell used at one sweep value.
    SystemConfig config_at(double value) const;
    /// Solver settings used at one sweep value; the iterations axis sets every iteration cap.
    SolverSettings settings_at(double value) const;
    /// Checks the spec and every per-value config. Throws ConfigError.
    void validate() const;
};

/// Parses the sectioned text format. Unknown sections or keys are errors. `origin` names the
/// source in error messages.
ExperimentSpec parse_experiment(std::istream& in, const std::string& origin = "<input>");
ExperimentSpec parse_experiment_text(const std::string& text);
/// Reads a spec file. Throws ConfigError on bad content and std::runtime_error when unreadable.
ExperimentSpec load_experiment(const std::string& path);
/// Canonical text form; parse_experiment(format_experiment(s)) reproduces s.
std::string format_experiment(const ExperimentSpec& spec);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

} // namespace passr
