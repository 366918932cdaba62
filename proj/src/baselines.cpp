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
#include "passr/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "passr/lgd.hpp"

namespace passr
{

TransmitBeam zero_forcing_beam(const ChannelSet& chs, const SystemConfig& cfg)
{
    Eigen::MatrixXcd w = chs.h_eq_pr.completeOrthogonalDecomposition().pseudoInverse();
    for (Eigen::Index k = 0; k < w.cols(); ++k)
    {
        const double norm = w.col(k).norm();
        if (norm > 0.0)
            w.col(k) /= norm;
    }
    w *= std::sqrt(cfg.max_power_w / static_cast<double>(w.cols()));
    return TransmitBeam{w};
}

namespace
{

double elapsed_ms(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// Scores one antenna's candidate positions by patching a single column of the channels.
class AntennaProbe
{
  public:
    AntennaProbe(const ChannelSet& chs, const PaPositionMatrix& x, int n, int m, const TransmitBeam& w,
                 const Geometry& geom, const SystemConfig& cfg)
        : chs_(chs), w_(w), geom_(geom), cfg_(cfg), n_(n), m_(m)
    {
        const int k_count = chs.num_prs();
        const double y = geom.waveguide_y_m[static_cast<std::size_t>(n)];
        base_pr_ = Eigen::VectorXcd::Zero(k_count);
        for (Eigen::Index j = 0; j < x.x.cols(); ++j)
        {
            if (j == m)
                continue;
            for (int k = 0; k < k_count; ++k)
                base_pr_(k) += pinching_path(x.x(n, j), y, static_cast<int>(j),
                                             geom.pr_positions_m[static_cast<std::size_t>(k)], cfg);
            base_bd_ += pinching_path(x.x(n, j), y, static_cast<int>(j), geom.bd_position_m, cfg);
        }
    }

    const ChannelSet& place(double xv)
    {
        const double y = geom_.waveguide_y_m[static_cast<std::size_t>(n_)];
        for (int k = 0; k < chs_.num_prs(); ++k)
            chs_.h_eq_pr(k, n_) =
                base_pr_(k) + pinching_path(xv, y, m_, geom_.pr_positions_m[static_cast<std::size_t>(k)], cfg_);
        chs_.h_eq_bd(n_) = base_bd_ + pinching_path(xv, y, m_, geom_.bd_position_m, cfg_);
        for (int k = 0; k < chs_.num_prs(); ++k)
            chs_.cascade_pr(k, n_) = chs_.f_bd_pr(k) * chs_.h_eq_bd(n_);
        chs_.cascade_ir(n_) = chs_.f_bd_ir * chs_.h_eq_bd(n_);
        return chs_;
    }

    /// Best score over the current beam and, when enabled, the zero-forcing beam of the candidate.
    double score(double xv)
    {
        place(xv);
        double s = score_beam(w_);
        if (zero_forcing_)
            s = std::max(s, score_beam(zero_forcing_beam(chs_, cfg_)));
        return s;
    }

    /// Sum rate if the detection constraint holds, otherwise a large negative value ordered by violation.
    double score_beam(const TransmitBeam& w) const
    {
        const double kl = detection_metric(chs_, w, cfg_).kl;
        if (kl < cfg_.kl_target())
            return -1e9 - (cfg_.kl_target() - kl);
        return sum_rate(chs_, w, cfg_).sum_rate;
    }

    void use_zero_forcing(bool on) { zero_forcing_ = on; }

  private:
    ChannelSet chs_;
    const TransmitBeam& w_;
    const Geometry& geom_;
    const SystemConfig& cfg_;
    int n_;
    int m_;
    bool zero_forcing_ = false;
    Eigen::VectorXcd base_pr_;
    cplx base_bd_{0.0, 0.0};
};

// Feasible interval of antenna (n, m) given its neighbours, tightened so the computed gaps are >= d_min.
std::pair<double, double> antenna_interval(const PaPositionMatrix& x, Eigen::Index n, Eigen::Index m,
                                           const SystemConfig& cfg)
{
    const double d = cfg.min_spacing_m;
    double lo = 0.0;
    double hi = cfg.region_x_m;
    if (m > 0)
    {
        const double prev = x.x(n, m - 1);
        lo = prev + d;
        while (lo - prev - d < 0.0)
            lo = std::nextafter(lo, hi);
    }
    if (m + 1 < x.x.cols())
    {
        const double next = x.x(n, m + 1);
        hi = next - d;
        while (next - hi - d < 0.0)
            hi = std::nextafter(hi, lo);
    }
    return {lo, hi};
}

double search_antenna(AntennaProbe& probe, double current, double lo, double hi, const ElementWiseConfig& ew)
{
    double best_x = current;
    double best = probe.score(current);
    auto consider = [&](double xv) {
        const double s = probe.score(xv);
        if (s > best)
        {
            best = s;
            best_x = xv;
        }
        return s;
    };

    std::vector<std::pair<double, double>> coarse;  // (score, x)
    const auto steps = static_cast<long>(std::floor((hi - lo) / ew.grid_resolution));
    for (long i = 0; i <= steps; ++i)
    {
        const double xv = std::min(hi, lo + static_cast<double>(i) * ew.grid_resolution);
        coarse.emplace_back(consider(xv), xv);
    }
    if (coarse.empty() || coarse.back().second < hi)
        coarse.emplace_back(consider(hi), hi);

    const auto top = std::min<std::size_t>(coarse.size(), static_cast<std::size_t>(ew.refine_candidates));
    std::partial_sort(coarse.begin(), coarse.begin() + static_cast<long>(top), coarse.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t c = 0; c < top; ++c)
    {
        double centre = coarse[c].second;
        double centre_score = coarse[c].first;
        double step = ew.grid_resolution;
        for (int level = 0; level < ew.refine_levels; ++level)
        {
            const double sub = step / 20.0;
            double next_centre = centre;
            for (int i = -20; i <= 20; ++i)
            {
                const double xv = std::clamp(centre + i * sub, lo, hi);
                const double s = consider(xv);
                if (s > centre_score)
                {
                    centre_score = s;
                    next_centre = xv;
                }
            }
            centre = next_centre;
            step = sub;
        }
    }
    return best_x;
}

} // namespace

void ElementWiseConfig::validate(const SystemConfig& cfg) const
{
    if (!(grid_resolution > 0 && grid_resolution <= cfg.min_spacing_m / 2))
        throw ConfigError("elementwise.grid_resolution must lie in (0, min_spacing_m / 2]");
    if (max_rounds < 1)
        throw ConfigError("elementwise.max_rounds must be >= 1");
    if (!(tol >= 0))
        throw ConfigError("elementwise.tol must be >= 0");
    if (refine_candidates < 0 || refine_levels < 0)
        throw ConfigError("elementwise refinement settings must be >= 0");
}

PaPositionMatrix fixed_pa_layout(const SystemConfig& cfg)
{
    const double pitch = cfg.region_x_m / cfg.num_pas_per_waveguide;
    if (pitch < cfg.min_spacing_m)
        throw ConfigError("fixed layout needs region_x_m / num_pas_per_waveguide >= min_spacing_m");
    PaPositionMatrix x{Eigen::MatrixXd(cfg.num_waveguides, cfg.num_pas_per_waveguide)};
    for (int m = 0; m < cfg.num_pas_per_waveguide; ++m)
        x.x.col(m).setConstant((m + 0.5) * pitch);
    return x;
}

SolveReport element_wise_search(const Geometry& geom, const SystemConfig& cfg, const ElementWiseConfig& ew,
                                const ScaConfig& sca, std::uint64_t seed)
{
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(seed);
    SolveReport rep;
    rep.solver = "elementwise";
    rep.seed = seed;

    PaPositionMatrix x = fixed_pa_layout(cfg);
    ChannelSet chs = build_channels(x, geom, cfg);
    ScaResult beam = sca_loop(chs, random_full_power_beam(cfg, rng), cfg, sca);
    TransmitBeam w = beam.w;
    double rate = sum_rate(chs, w, cfg).sum_rate;
    rep.trace.push_back(rate);

    for (int round = 0; round < ew.max_rounds; ++round)
    {
        const Eigen::Index count = x.x.size();
        for (Eigen::Index i = 0; i < count; ++i)
        {
            const Eigen::Index flat = ew.reverse_order ? count - 1 - i : i;
            const Eigen::Index n = flat / x.x.cols();
            const Eigen::Index m = flat % x.x.cols();
            const auto [lo, hi] = antenna_interval(x, n, m, cfg);
            AntennaProbe probe(chs, x, static_cast<int>(n), static_cast<int>(m), w, geom, cfg);
            probe.use_zero_forcing(ew.zero_forcing_candidates);
            x.x(n, m) = search_antenna(probe, x.x(n, m), lo, hi, ew);
            chs = probe.place(x.x(n, m));
            if (ew.zero_forcing_candidates)
            {
                const TransmitBeam z = zero_forcing_beam(chs, cfg);
                if (probe.score_beam(z) > probe.score_beam(w))
                    w = sca_loop(chs, z, cfg, sca).w;
            }
            if (ew.refresh_per_antenna)
                w = sca_loop(chs, w, cfg, sca).w;
        }
        if (!ew.refresh_per_antenna)
        {
            beam = sca_loop(chs, w, cfg, sca);
            w = beam.w;
        }
        // Rebuild from scratch so patched columns do not accumulate rounding.
        chs = build_channels(x, geom, cfg);
        const double next = sum_rate(chs, w, cfg).sum_rate;
        rep.trace.push_back(next);
        ++rep.iterations;
        const double gain = next - rate;
        rate = next;
        if (gain < ew.tol)
            break;
    }

    rep.positions = x;
    rep.beam = w;
    finalize_report(rep, chs, cfg);
    rep.wall_ms = elapsed_ms(t0);
    return rep;
}

SolveReport fixed_pa_baseline(const Geometry& geom, const SystemConfig& cfg, const ScaConfig& sca,
                              std::uint64_t seed)
{
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(seed);
    SolveReport rep;
    rep.solver = "fixedpa";
    rep.seed = seed;
    rep.positions = fixed_pa_layout(cfg);
    const ChannelSet chs = build_channels(rep.positions, geom, cfg);
    const ScaResult res = sca_loop(chs, random_full_power_beam(cfg, rng), cfg, sca);
    rep.beam = res.w;
    rep.trace = res.trace;
    rep.iterations = res.iterations;
    rep.message = res.message;
    finalize_report(rep, chs, cfg);
    rep.wall_ms = elapsed_ms(t0);
    return rep;
}

std::vector<Vec3> mimo_array(const SystemConfig& cfg)
{
    std::vector<Vec3> out;
    for (int n = 0; n < cfg.num_waveguides; ++n)
        out.emplace_back(0.0, n * cfg.wavelength() / 2.0, cfg.pa_height_m);
    return out;
}

ChannelSet mimo_channels(const Geometry& geom, const SystemConfig& cfg)
{
    const std::vector<Vec3> array = mimo_array(cfg);
    const auto n_ant = static_cast<Eigen::Index>(array.size());
    ChannelSet chs;
    chs.h_eq_pr.resize(static_cast<Eigen::Index>(geom.pr_positions_m.size()), n_ant);
    chs.h_eq_bd.resize(n_ant);
    for (Eigen::Index n = 0; n < n_ant; ++n)
    {
        const Vec3& a = array[static_cast<std::size_t>(n)];
        for (std::size_t k = 0; k < geom.pr_positions_m.size(); ++k)
            chs.h_eq_pr(static_cast<Eigen::Index>(k), n) = free_space_channel(a, geom.pr_positions_m[k], cfg);
        chs.h_eq_bd(n) = free_space_channel(a, geom.bd_position_m, cfg);
    }
    attach_backscatter(chs, geom, cfg);
    return chs;
}

SolveReport conventional_mimo_baseline(const Geometry& geom, const SystemConfig& cfg, const ScaConfig& sca,
                                       std::uint64_t seed)
{
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(seed);
    SolveReport rep;
    rep.solver = "mimo";
    rep.seed = seed;
    const ChannelSet chs = mimo_channels(geom, cfg);
    const ScaResult res = sca_loop(chs, random_full_power_beam(cfg, rng), cfg, sca);
    rep.beam = res.w;
    rep.trace = res.trace;
    rep.iterations = res.iterations;
    rep.message = res.message;
    finalize_report(rep, chs, cfg);
    rep.wall_ms = elapsed_ms(t0);
    return rep;
}

} // namespace passr
