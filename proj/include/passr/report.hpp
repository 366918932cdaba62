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

#include <cstdint>
#include <string>
#include <vector>

#include "passr/model.hpp"

namespace passr
{

/// Residual slack below which a reported solution counts as feasible.
inline constexpr double kFeasibilityTolerance = 1e-6;

enum class SolveStatus
{
    ok,
    infeasible,  // finished, but the best point found violates a constraint
    failed,      // aborted (non-finite objective, exception)
};

const char* to_string(SolveStatus s);

/// Outcome of one solver run on one realization.
struct SolveReport
{
    std::string solver;
    PaPositionMatrix positions;  // empty for the co-located MIMO baseline
    TransmitBeam beam;
    /// Per-iteration objective in the solver's own sense: the penalized F (minimized)
    /// for LGD, the sum rate (maximized) for everything else.
    std::vector<double> trace;
    std::string trace_metric = "sum_rate";
    RateReport rates;
    DetectionMetric detection;
    Residuals residuals;
    int iterations = 0;
    double wall_ms = 0.0;
    std::uint64_t seed = 0;
    SolveStatus status = SolveStatus::ok;
    std::string message;
};

/// Evaluates rates, detection and residuals of (positions, beam) into `rep` and sets the
/// status to ok or infeasible from the residuals unless the run already failed.
void finalize_report(SolveReport& rep, const ChannelSet& chs, const SystemConfig& cfg);

} // namespace passr
