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

// Channel, rate and detection model of the PASS-assisted downlink symbiotic radio cell.
// Every solver and baseline evaluates candidates through these functions.

#include <vector>

#include "passr/config.hpp"

namespace passr
{

/// Equivalent channels for one placement of the pinching antennas.
struct ChannelSet
{
    Eigen::MatrixXcd h_eq_pr;        // K x N, row k = h_k^H(X) G(X)
    Eigen::RowVectorXcd h_eq_bd;     // 1 x N
    Eigen::VectorXcd f_bd_pr;        // K reflection links BD -> PR k
    cplx f_bd_ir{0.0, 0.0};          // reflection link BD -> IR
    Eigen::MatrixXcd cascade_pr;     // K x N, row k = f_bd_pr(k) * h_eq_bd
    Eigen::RowVectorXcd cascade_ir;  // f_bd_ir * h_eq_bd

    int num_prs() const { return static_cast<int>(h_eq_pr.rows()); }
    int num_feeds() const { return static_cast<int>(h_eq_pr.cols()); }
};

struct RateReport
{
    std::vector<double> per_pr_rate;  // bits/s/Hz
    std::vector<double> sinr_direct;  // BD off branch
    std::vector<double> sinr_combined;  // BD on branch
    double sum_rate = 0.0;
};

struct DetectionMetric
{
    double gamma_b = 0.0;  // backscatter power at the IR after SIC [W]
    double rho = 1.0;
    double kl = 0.0;  // D(P0 || P1)
    double pe_upper_bound = 1.0;
};

/// Signed constraint slacks; a constraint holds when its residual is >= -tol.
/// Vacuous constraints (single antenna per waveguide, no placement) report 0.
struct Residuals
{
    double power = 0.0;      // P_max - tr(W W^H)
    double detection = 0.0;  // kl - 2 eps^2
    double spacing = 0.0;    // min x_{n,m+1} - x_{n,m} - d_min
    double range = 0.0;      // min distance of any x_{n,m} to the ends of [0, S_x]

    bool feasible(double tol) const
    {
        return power >= -tol && detection >= -tol && spacing >= -tol && range >= -tol;
    }
};

/// Free-space LoS coefficient kappa exp(-j beta r) / r. Throws std::domain_error at r = 0.
cplx free_space_channel(const Vec3& pa_pos, const Vec3& rx_pos, const SystemConfig& cfg);

/// In-waveguide response g(x_n): upsilon_m exp(-j beta_g x_{n,m}).
Eigen::VectorXcd waveguide_response(const Eigen::RowVectorXd& x_row, const SystemConfig& cfg);

/// BD -> receiver reflection coefficient: alpha exp(-j beta r).
cplx reflection_link(const Vec3& bd, const Vec3& rx, double alpha, const SystemConfig& cfg);

/// Contribution of PA m at x on the waveguide at lateral offset y to the equivalent channel of rx.
cplx pinching_path(double x, double waveguide_y, int m, const Vec3& rx, const SystemConfig& cfg);

/// Equivalent row h^H(X) G(X) from all antennas to one receiver.
Eigen::RowVectorXcd equivalent_channel(const PaPositionMatrix& x, const std::vector<double>& waveguide_y,
                                       const Vec3& rx, const SystemConfig& cfg);

ChannelSet build_channels(const PaPositionMatrix& x, const Geometry& geom, const SystemConfig& cfg);

/// Fills the reflection links and cascades of `chs` from its h_eq_bd and the geometry.
void attach_backscatter(ChannelSet& chs, const Geometry& geom, const SystemConfig& cfg);

/// SINR of PR k when it sees the row `channel`; interference from every other column of W.
double branch_sinr(const Eigen::RowVectorXcd& channel, const TransmitBeam& w, int k, double noise);

double rate_k(const ChannelSet& chs, const TransmitBeam& w, int k, const SystemConfig& cfg);
RateReport sum_rate(const ChannelSet& chs, const TransmitBeam& w, const SystemConfig& cfg);

/// ln(rho) + 1/rho - 1, accurate down to rho - 1 ~ 1e-300.
double kl_per_symbol(double rho);

DetectionMetric detection_metric(const ChannelSet& chs, const TransmitBeam& w, const SystemConfig& cfg);
DetectionMetric detection_from_gamma(double gamma_b, const SystemConfig& cfg);

/// Root of ln(rho) + 1/rho - 1 = target on rho >= 1.
double detection_root(double target);
/// Upper root a_1 for target 2 eps^2 / L. The detection constraint holds iff rho >= a_1.
double detection_root(const SystemConfig& cfg);
/// Minimum backscatter power (a_1 - 1) delta_IR^2 that satisfies the detection constraint.
double min_backscatter_power(const SystemConfig& cfg);

/// F = -sum R_k + xi * max(0, 2 eps^2 - kl)^2
double penalty_objective(const ChannelSet& chs, const TransmitBeam& w, const SystemConfig& cfg, double xi);

Residuals feasibility_check(const PaPositionMatrix& x, const TransmitBeam& w, const ChannelSet& chs,
                            const SystemConfig& cfg);

/// Derivatives of F with respect to every real degree of freedom.
struct PenaltyGradient
{
    double value = 0.0;
    double kl = 0.0;     // detection divergence at the evaluation point
    Eigen::MatrixXcd w;  // dF/dRe(w) + j dF/dIm(w)
    Eigen::MatrixXd x;   // dF/dx_{n,m}
};

/// Sensitivity of F to the equivalent channels, expressed as dF/d conj(h).
struct ChannelSensitivity
{
    Eigen::MatrixXcd pr;     // K x N
    Eigen::RowVectorXcd bd;  // 1 x N
};

/// Value and W-gradient of F for fixed channels; also returns dF/d conj(h) for the position chain rule.
double penalty_gradient_w(const ChannelSet& chs, const TransmitBeam& w, const SystemConfig& cfg, double xi,
                          Eigen::MatrixXcd& grad_w, ChannelSensitivity& sens);

/// Full analytic gradient of F through positions -> channels -> rates/detection.
PenaltyGradient penalty_gradient(const PaPositionMatrix& x, const TransmitBeam& w, const Geometry& geom,
                                 const SystemConfig& cfg, double xi);

} // namespace passr
