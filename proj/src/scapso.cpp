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
#include "passr/scapso.hpp"

#include <chrono>
#include <cmath>

#include "passr/baselines.hpp"
#include "passr/lgd.hpp"

namespace passr
{

void OuterConfig::validate() const
{
    if (max_rounds < 1)
        throw ConfigError("outer.max_rounds must be >= 1");
    if (!(tol > 0))
        throw ConfigError("outer.tol must be > 0");
}

SolveReport solve_sca_pso(const Geometry& geom, const SystemConfig& cfg, const ScaConfig& sca, const PsoConfig& pso,
                          const OuterConfig& outer, std::uint64_t seed)
{
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(seed);
    SolveReport rep;
    rep.solver = "scapso";
    rep.seed = seed;

    PaPositionMatrix x = fixed_pa_layout(cfg);
    ChannelSet chs = build_channels(x, geom, cfg);
    ScaResult beam = sca_loop(chs, random_full_power_beam(cfg, rng), cfg, sca);
    TransmitBeam w = beam.w;
    double rate = sum_rate(chs, w, cfg).sum_rate;
    rep.trace.push_back(rate);
    if (!beam.feasible)
        rep.message = beam.message;

    for (int round = 0; round < outer.max_rounds && beam.feasible; ++round)
    {
        const PsoResult moved = solve_pso(w, geom, cfg, pso, derive_seed(seed, {kPsoRoundStream, std::uint64_t(round)}), &x);
        if (!moved.penalized)
        {
            ChannelSet cand = build_channels(moved.x, geom, cfg);
            if (sum_rate(cand, w, cfg).sum_rate > rate)
            {
                x = moved.x;
                chs = std::move(cand);
            }
        }
        beam = sca_loop(chs, w, cfg, sca);
        if (!beam.feasible)
        {
            rep.message = beam.message;
            break;
        }
        w = beam.w;
        const double next = sum_rate(chs, w, cfg).sum_rate;
        rep.trace.push_back(next);
        ++rep.iterations;
        const double change = next - rate;
        rate = next;
        if (std::abs(change) < outer.tol)
            break;
    }

    rep.positions = x;
    rep.beam = w;
    finalize_report(rep, chs, cfg);
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace passr
