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
#include "passr/report.hpp"

namespace passr
{

const char* to_string(SolveStatus s)
{
    switch (s)
    {
    case SolveStatus::ok:
        return "ok";
    case SolveStatus::infeasible:
        return "infeasible";
    case SolveStatus::failed:
        return "failed";
    }
    return "unknown";
}

void finalize_report(SolveReport& rep, const ChannelSet& chs, const SystemConfig& cfg)
{
    rep.rates = sum_rate(chs, rep.beam, cfg);
    rep.detection = detection_metric(chs, rep.beam, cfg);
    rep.residuals = feasibility_check(rep.positions, rep.beam, chs, cfg);
    if (rep.status != SolveStatus::failed)
        rep.status = rep.residuals.feasible(kFeasibilityTolerance) ? SolveStatus::ok : SolveStatus::infeasible;
}

} // namespace passr
