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

// Learning-aided gradient descent: antenna positions are reparameterized as non-negative
// offsets, the beamformer is a free complex matrix, and both are driven by Adam on the
// penalized objective F. Constraints are restored after every step by ReLU clamping,
// offset-budget normalization and power projection.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "passr/report.hpp"
#include "passr/rng.hpp"

namespace passr
{

struct LgdConfig
{
    double learning_rate = 1e-4;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    double penalty_weight = 10.0;  // xi
    int max_iterations = 5000;
    double convergence_tol = 1e-5;
    int patience = 20;  // consecutive iterations below convergence_tol

    void validate() const;
};

struct AdamMoments
{
    Eigen::VectorXd first;
    Eigen::VectorXd second;
    long step = 0;
};

struct LgdState
{
    OffsetMatrix offsets;
    TransmitBeam w;
    AdamMoments adam;
    int iteration = 0;
    std::vector<double> trace;
};

struct LgdGradient
{
    double objective = 0.0;
    double kl = 0.0;
    Eigen::MatrixXd offsets;  // dF/d dx
    Eigen::MatrixXcd w;       // dF/dRe(w) + j dF/dIm(w)
};

/// x_{n,1} = dx_{n,1}; x_{n,m} = (m-1) d_min + sum_{j<=m} dx_{n,j}.
PaPositionMatrix offsets_to_positions(const OffsetMatrix& dx, const SystemConfig& cfg);
/// Inverse of offsets_to_positions.
OffsetMatrix positions_to_offsets(const PaPositionMatrix& x, const SystemConfig& cfg);

/// Rescales rows whose sum exceeds S_x - (M-1) d_min onto that budget; other rows pass through.
OffsetMatrix normalize_offsets(OffsetMatrix dx, const SystemConfig& cfg);

/// Radial projection onto tr(W W^H) <= P_max.
TransmitBeam project_power(TransmitBeam w, const SystemConfig& cfg);

/// Interleaved parameter vector [dx row-major, Re w, Im w, ...] used by the optimizer.
Eigen::VectorXd pack_parameters(const OffsetMatrix& dx, const TransmitBeam& w);
void unpack_parameters(const Eigen::VectorXd& theta, OffsetMatrix& dx, TransmitBeam& w);

LgdGradient lgd_gradient(const LgdState& state, const Geometry& geom, const SystemConfig& cfg, double xi);

/// Bias-corrected Adam descent step on a flat parameter vector.
void adam_update(AdamMoments& moments, Eigen::VectorXd& theta, const Eigen::VectorXd& grad, const LgdConfig& cfg);

/// One Adam step on every learnable parameter followed by the constraint-restoring maps.
LgdState adam_step(LgdState state, const LgdGradient& grad, const SystemConfig& cfg, const LgdConfig& lgd);

/// Evenly spread layout expressed as offsets (the default starting point).
OffsetMatrix uniform_offsets(const SystemConfig& cfg);

/// Complex Gaussian beam scaled to full power.
TransmitBeam random_full_power_beam(const SystemConfig& cfg, Rng& rng);

SolveReport solve_lgd(const Geometry& geom, const SystemConfig& cfg, const LgdConfig& lgd, std::uint64_t seed,
                      const std::optional<std::pair<OffsetMatrix, TransmitBeam>>& init = std::nullopt);

} // namespace passr
