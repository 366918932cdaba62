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
#include "passr/config.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace passr
{

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double SystemConfig::kappa() const { return kSpeedOfLight / (4.0 * std::numbers::pi * carrier_frequency_hz); }

double SystemConfig::free_space_wavenumber() const { return 2.0 * std::numbers::pi / wavelength(); }

double SystemConfig::guided_wavenumber() const
{
    return 2.0 * std::numbers::pi * effective_refractive_index / wavelength();
}

double SystemConfig::max_offset_budget() const
{
    return region_x_m - (num_pas_per_waveguide - 1) * min_spacing_m;
}

double SystemConfig::amplitude(int m) const
{
    if (amplitude_profile.empty())
        return 1.0 / std::sqrt(static_cast<double>(num_pas_per_waveguide));
    return amplitude_profile.at(static_cast<std::size_t>(m));
}

namespace
{

void require(bool ok, const char* what)
{
    if (!ok)
        throw ConfigError(what);
}

} // namespace

void SystemConfig::validate() const
{
    require(std::isfinite(carrier_frequency_hz) && carrier_frequency_hz > 0, "carrier_frequency_hz must be > 0");
    require(effective_refractive_index > 0, "effective_refractive_index must be > 0");
    require(num_waveguides >= 1, "num_waveguides must be >= 1");
    require(num_pas_per_waveguide >= 1, "num_pas_per_waveguide must be >= 1");
    require(num_prs >= 1, "num_prs must be >= 1");
    require(num_waveguides >= num_prs, "num_waveguides must be >= num_prs");
    require(pa_height_m > 0, "pa_height_m must be > 0");
    require(region_x_m > 0 && region_y_m > 0, "region dimensions must be > 0");
    require(min_spacing_m > 0, "min_spacing_m must be > 0");
    require(num_pas_per_waveguide * min_spacing_m <= region_x_m,
            "num_pas_per_waveguide * min_spacing_m must not exceed region_x_m");
    require(max_power_w > 0, "max_power_w must be > 0");
    require(noise_power_w_pr > 0 && noise_power_w_ir > 0, "noise powers must be > 0");
    require(symbol_ratio >= 1, "symbol_ratio must be >= 1");
    require(detection_threshold > 0 && detection_threshold < 1, "detection_threshold must lie in (0, 1)");
    require(bd_reflection_pr >= 0 && bd_reflection_ir >= 0, "bd reflection magnitudes must be >= 0");
    require(bd_position_m.allFinite(), "bd_position_m must be finite");
    if (!amplitude_profile.empty())
    {
        require(static_cast<int>(amplitude_profile.size()) == num_pas_per_waveguide,
                "amplitude_profile must have num_pas_per_waveguide entries");
        for (double a : amplitude_profile)
            require(a > 0 && a <= 1, "amplitude_profile entries must lie in (0, 1]");
    }
}

std::vector<double> waveguide_grid(const SystemConfig& cfg)
{
    std::vector<double> y(static_cast<std::size_t>(cfg.num_waveguides));
    const double step = cfg.region_y_m / cfg.num_waveguides;
    for (int n = 0; n < cfg.num_waveguides; ++n)
        y[static_cast<std::size_t>(n)] = (n + 0.5) * step;
    return y;
}

Geometry make_geometry(const SystemConfig& cfg, std::vector<Vec3> prs, const Vec3& ir)
{
    Geometry g;
    g.waveguide_y_m = waveguide_grid(cfg);
    g.pr_positions_m = std::move(prs);
    g.ir_position_m = ir;
    g.bd_position_m = cfg.bd_position_m;
    return g;
}

void Geometry::validate(const SystemConfig& cfg) const
{
    require(static_cast<int>(waveguide_y_m.size()) == cfg.num_waveguides, "geometry: one y per waveguide");
    for (std::size_t n = 1; n < waveguide_y_m.size(); ++n)
        require(waveguide_y_m[n] > waveguide_y_m[n - 1], "geometry: waveguide y must be strictly increasing");
    require(static_cast<int>(pr_positions_m.size()) == cfg.num_prs, "geometry: one position per PR");
    auto inside = [&](const Vec3& p) {
        return p.x() >= 0 && p.x() <= cfg.region_x_m && p.y() >= 0 && p.y() <= cfg.region_y_m;
    };
    for (const auto& p : pr_positions_m)
        require(inside(p), "geometry: PR outside the service region");
    require(inside(ir_position_m), "geometry: IR outside the service region");
}

} // namespace passr
