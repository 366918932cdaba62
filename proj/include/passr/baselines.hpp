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

// Reference schemes: element-wise coordinate search (near-optimal oracle on small cells),
// the evenly spread fixed layout, and a co-located antenna array at the origin.

#include <cstdint>

#include "passr/report.hpp"
#include "passr/sca.hpp"

namespace passr
{

struct ElementWiseConfig
{
    double grid_resolution = 0.01;  // metres between coarse candidates
    int max_rounds = 100;
    double tol = 1e-4;  // stop when a round gains less sum rate than this
    bool refresh_per_antenna = false;  // re-run SCA after every antenna instead of every round
    bool reverse_order = false;        // visit antennas from (N, M) back to (1, 1)
    int refine_candidates = 5;  // best coarse points that get a local fine scan
    int refine_levels = 3;      // each level scans +-1 step of the previous level in 40 sub-steps
    bool zero_forcing_candidates = true;  // also score each candidate under its zero-forcing beam

    void validate(const SystemConfig& cfg) const;
};

/// x_{n,m} = (m + 1/2) S_x / M on every waveguide. Throws ConfigError when S_x / M < d_min.
PaPositionMatrix fixed_pa_layout(const SystemConfig& cfg);

/// Unit-norm pseudo-inverse columns of the direct channels, power split evenly over the streams.
TransmitBeam zero_forcing_beam(const ChannelSet& chs, const SystemConfig& cfg);

SolveReport element_wise_search(const Geometry& geom, const SystemConfig& cfg, const ElementWiseConfig& ew,
                                const ScaConfig& sca, std::uint64_t seed);

SolveReport fixed_pa_baseline(const Geometry& geom, const SystemConfig& cfg, const ScaConfig& sca,
                              std::uint64_t seed);

/// Antenna n of the co-located array sits at (0, n lambda / 2, pa height).
std::vector<Vec3> mimo_array(const SystemConfig& cfg);

/// Channels of the co-located array: plain free-space links, no in-waveguide term.
ChannelSet mimo_channels(const Geometry& geom, const SystemConfig& cfg);

SolveReport conventional_mimo_baseline(const Geometry& geom, const SystemConfig& cfg, const ScaConfig& sca,
                                       std::uint64_t seed);

} // namespace passr
