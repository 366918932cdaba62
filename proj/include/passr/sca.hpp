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

// Successive convex approximation of the transmit beam for a fixed antenna layout.
// Each SINR ratio is replaced by its convex-over-linear tangent lower bound and the detection
// power by its tangent plane; the resulting concave program over the power ball and the
// linearized detection half-space is solved by projected gradient ascent.

#include <string>
#include <vector>

#include "passr/report.hpp"

namespace passr
{

struct ScaConfig
{
    double tol = 1e-3;  // stop when the sum rate changes by at most this much
    int max_iterations = 100;
    int subproblem_max_steps = 500;
    double subproblem_tol = 1e-6;  // objective change that ends the inner ascent
    bool enforce_detection = true;

    void validate() const;
};

/// Linearization anchors for every PR: u = a w_k and v = sum_{i != k} |a w_i|^2 + delta^2
/// for a = h_k (branch 1) and a = h_k + f_k h_bd (branch 2), evaluated at `beam`.
struct SurrogatePoint
{
    Eigen::VectorXcd u1;
    Eigen::VectorXd v1;
    Eigen::VectorXcd u2;
    Eigen::VectorXd v2;
    TransmitBeam beam;
};

SurrogatePoint make_surrogate_point(const ChannelSet& chs, const TransmitBeam& anchor, const SystemConfig& cfg);

struct RateBound
{
    double t1 = 0.0;
    double t2 = 0.0;
};

/// 2 Re(conj(u_a) u) / v_a - |u_a|^2 v / v_a^2 for both branches of PR k.
RateBound taylor_rate_bound(const TransmitBeam& w, const SurrogatePoint& anchor, const ChannelSet& chs,
                            const SystemConfig& cfg, int k);

/// Tangent plane of the backscatter power: 2 Re<b W_a, b W> - ||b W_a||^2 with b the IR cascade.
double detection_linearization(const TransmitBeam& w, const TransmitBeam& anchor_w, const ChannelSet& chs);

/// sum_k log2(1 + t1) + log2(1 + t2) with bounds in place of the ratios; -inf where a bound is <= -1.
double surrogate_objective(const TransmitBeam& w, const SurrogatePoint& anchor, const ChannelSet& chs,
                           const SystemConfig& cfg);

/// Ascent direction of surrogate_objective as dS/dRe(w) + j dS/dIm(w).
Eigen::MatrixXcd surrogate_gradient(const TransmitBeam& w, const SurrogatePoint& anchor, const ChannelSet& chs,
                                    const SystemConfig& cfg);

/// Real half-space Re<a, W> >= beta, with <A, B> = sum conj(A) B.
struct HalfSpace
{
    Eigen::MatrixXcd a;
    double beta = 0.0;
};

/// Feasible set of the linearized detection constraint at `anchor_w` (tightened by a relative 1e-9).
HalfSpace detection_halfspace(const TransmitBeam& anchor_w, const ChannelSet& chs, const SystemConfig& cfg);

/// Euclidean projection onto {||W||^2 <= power} intersected with `hs` (if given).
/// Returns false when the intersection is empty; `w` is then left on the ball.
bool project_feasible(Eigen::MatrixXcd& w, double power, const HalfSpace* hs);

/// Beam that maximizes the backscatter power at full power: rank one along conj(b).
TransmitBeam max_detection_beam(const ChannelSet& chs, const TransmitBeam& hint, const SystemConfig& cfg);

/// Returns a beam meeting the detection constraint, as close to `w` as the linearization at `w`
/// allows, falling back to max_detection_beam. Sets `ok` to false if no beam can meet it.
TransmitBeam restore_detection(const ChannelSet& chs, const TransmitBeam& w, const SystemConfig& cfg, bool& ok);

struct SubproblemResult
{
    TransmitBeam w;
    double objective = 0.0;  // surrogate value at w
    int steps = 0;
    bool feasible = true;
};

SubproblemResult solve_sca_subproblem(const SurrogatePoint& anchor, const ChannelSet& chs, const SystemConfig& cfg,
                                      const ScaConfig& sca);

struct ScaResult
{
    TransmitBeam w;
    std::vector<double> trace;  // sum rate at the start and after every iteration
    int iterations = 0;
    bool feasible = true;
    std::string message;
};

ScaResult sca_loop(const ChannelSet& chs, const TransmitBeam& w0, const SystemConfig& cfg, const ScaConfig& sca);
ScaResult sca_loop(const PaPositionMatrix& x, const TransmitBeam& w0, const Geometry& geom, const SystemConfig& cfg,
                   const ScaConfig& sca);

} // namespace passr
