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

// Penalized particle swarm over antenna layouts with the transmit beam held fixed.
// A particle is the whole N x M layout, so the per-waveguide swarms share one fitness.

#include <cstdint>
#include <functional>
#include <vector>

#include "passr/report.hpp"
#include "passr/rng.hpp"

namespace passr
{

struct PsoConfig
{
    int num_particles = 30;   // Q
    int max_iterations = 200;  // T
    double cognitive = 1.5;    // c1
    double social = 1.5;       // c2
    double inertia_max = 0.9;
    double inertia_min = 0.4;
    double penalty = 10.0;        // mu, per violation
    double velocity_clamp = 0.2;  // fraction of S_x

    void validate() const;
};

struct Swarm
{
    std::vector<Eigen::MatrixXd> position;
    std::vector<Eigen::MatrixXd> velocity;
    std::vector<Eigen::MatrixXd> best_position;
    std::vector<double> best_fitness;
    Eigen::MatrixXd global_best;
    double global_best_fitness = 0.0;
};

using LayoutFitness = std::function<double(const PaPositionMatrix&)>;

/// Adjacent pairs closer than d_min plus one if the detection constraint fails.
int violation_count(const PaPositionMatrix& x, const TransmitBeam& w, const ChannelSet& chs, const SystemConfig& cfg);

/// Sum rate minus mu times violation_count.
double pso_fitness(const PaPositionMatrix& x, const TransmitBeam& w, const Geometry& geom, const SystemConfig& cfg,
                   double mu);

/// Uniform sample of sorted layouts that meet spacing and range.
PaPositionMatrix random_feasible_layout(const SystemConfig& cfg, Rng& rng);

/// Random feasible particles; particle 0 starts at `incumbent` when given.
Swarm init_swarm(const PsoConfig& pso, const SystemConfig& cfg, Rng& rng, const LayoutFitness& eval,
                 const PaPositionMatrix* incumbent = nullptr);

/// One generation: inertia schedule, velocity and position update with clamping, best updates.
void pso_step(Swarm& swarm, int t, const PsoConfig& pso, const SystemConfig& cfg, Rng& rng,
              const LayoutFitness& eval);

/// Sorts each row, then takes the Euclidean projection onto {x_{m+1} - x_m >= d_min, 0 <= x <= S_x}.
PaPositionMatrix repair_layout(const PaPositionMatrix& x, const SystemConfig& cfg);

struct PsoResult
{
    PaPositionMatrix x;
    std::vector<double> trace;  // global-best fitness after initialization and every generation
    double fitness = 0.0;       // of the repaired layout
    bool penalized = false;     // repaired layout still violates a constraint
};

PsoResult solve_pso(const TransmitBeam& w, const Geometry& geom, const SystemConfig& cfg, const PsoConfig& pso,
                    std::uint64_t seed, const PaPositionMatrix* incumbent = nullptr);

} // namespace passr
