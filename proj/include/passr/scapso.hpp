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

// Two-stage alternating solver: SCA on the beam with the layout fixed, then penalized PSO on
// the layout with the beam fixed, repeated until the sum rate settles.

#include <cstdint>

#include "passr/pso.hpp"
#include "passr/sca.hpp"

namespace passr
{

struct OuterConfig
{
    int max_rounds = 30;
    double tol = 1e-3;  // sum-rate change that ends the alternation

    void validate() const;
};

/// Starts from the fixed layout and a random full-power beam. A PSO layout is kept only when it
/// is feasible and raises the sum rate for the current beam; a rejected round counts as converged.
SolveReport solve_sca_pso(const Geometry& geom, const SystemConfig& cfg, const ScaConfig& sca, const PsoConfig& pso,
                          const OuterConfig& outer, std::uint64_t seed);

} // namespace passr
