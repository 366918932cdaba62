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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace passr
{

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;

/// Speed of light in vacuum [m/s].
inline constexpr double kSpeedOfLight = 299792458.0;

/// Thrown when a configuration violates one of its invariants.
class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a solver cannot produce a usable result (non-finite objective, etc.).
class SolverError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Physical and scenario constants of one PASS-assisted symbiotic radio cell. SI units throughout.
struct SystemConfig
{
    double carrier_frequency_hz = 28e9;
    double effective_refractive_index = 1.4;
    int num_waveguides = 2;         // N
    int num_pas_per_waveguide = 3;  // M
    int num_prs = 2;                // K
    double pa_height_m = 5.0;
    double region_x_m = 30.0;  // waveguide length S_x
    double region_y_m = 4.0;
    double min_spacing_m = 0.1;
    double max_power_w = 1.0;  // 30 dBm
    double noise_power_w_pr = 1e-11;
    double noise_power_w_ir = 1e-11;
    int symbol_ratio = 50;  // L = T_c / T_s
    double detection_threshold = 0.95;
    Vec3 bd_position_m{5.0, 2.0, 2.0};
    double bd_reflection_pr = 0.8;
    double bd_reflection_ir = 0.8;
    /// Per-PA in-waveguide amplitudes. Empty means the equal split 1/sqrt(M).
    std::vector<double> amplitude_profile;

    double wavelength() const { return kSpeedOfLight / carrier_frequency_hz; }
    double kappa() const;               // c / (4 pi f_c)
    double free_space_wavenumber() const;  // 2 pi / lambda
    double guided_wavenumber() const;      // 2 pi n_eff / lambda
    double max_offset_budget() const;      // S_x - (M-1) d_min
    double amplitude(int m) const;
    /// 2 eps^2, the KL divergence the IoT receiver needs.
    double kl_target() const { return 2.0 * detection_threshold * detection_threshold; }

    /// Throws ConfigError naming the first violated invariant.
    void validate() const;
};

/// Receiver placement for one channel realization.
struct Geometry
{
    std::vector<double> waveguide_y_m;  // N entries, strictly increasing
    std::vector<Vec3> pr_positions_m;   // K entries, z = 0
    Vec3 ir_position_m = Vec3::Zero();
    Vec3 bd_position_m = Vec3::Zero();

    void validate(const SystemConfig& cfg) const;
};

/// Waveguides at the centres of N equal strips of the y extent.
std::vector<double> waveguide_grid(const SystemConfig& cfg);

Geometry make_geometry(const SystemConfig& cfg, std::vector<Vec3> prs, const Vec3& ir);

/// x_{n,m}: N x M antenna coordinates along the waveguides [m].
struct PaPositionMatrix
{
    Eigen::MatrixXd x;
};

/// Non-negative offsets that generate a PaPositionMatrix by cumulative summation.
struct OffsetMatrix
{
    Eigen::MatrixXd dx;
};

/// W: N x K complex transmit beamformer, column k serves PR k.
struct TransmitBeam
{
    Eigen::MatrixXcd w;

    double power() const { return w.squaredNorm(); }
};

} // namespace passr
