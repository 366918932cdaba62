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
#include "passr/pso.hpp"

#include <algorithm>
#include <cmath>

namespace passr
{

void PsoConfig::validate() const
{
    if (num_particles < 2)
        throw ConfigError("pso.num_particles must be >= 2");
    if (max_iterations < 0)
        throw ConfigError("pso.max_iterations must be >= 0");
    if (!(cognitive >= 0 && social >= 0))
        throw ConfigError("pso acceleration coefficients must be >= 0");
    if (!(inertia_min > 0 && inertia_max >= inertia_min))
        throw ConfigError("pso inertia bounds must satisfy inertia_max >= inertia_min > 0");
    if (!(penalty > 0))
        throw ConfigError("pso.penalty must be > 0");
    if (!(velocity_clamp > 0))
        throw ConfigError("pso.velocity_clamp must be > 0");
}

int violation_count(const PaPositionMatrix& x, const TransmitBeam& w, const ChannelSet& chs, const SystemConfig& cfg)
{
    int count = 0;
    for (Eigen::Index n = 0; n < x.x.rows(); ++n)
        for (Eigen::Index m = 0; m + 1 < x.x.cols(); ++m)
            if (x.x(n, m + 1) - x.x(n, m) < cfg.min_spacing_m)
                ++count;
    if (detection_metric(chs, w, cfg).kl < cfg.kl_target())
        ++count;
    return count;
}

double pso_fitness(const PaPositionMatrix& x, const TransmitBeam& w, const Geometry& geom, const SystemConfig& cfg,
                   double mu)
{
    const ChannelSet chs = build_channels(x, geom, cfg);
    return sum_rate(chs, w, cfg).sum_rate - mu * violation_count(x, w, chs, cfg);
}

PaPositionMatrix random_feasible_layout(const SystemConfig& cfg, Rng& rng)
{
    std::uniform_real_distribution<double> u(0.0, cfg.max_offset_budget());
    PaPositionMatrix x{Eigen::MatrixXd(cfg.num_waveguides, cfg.num_pas_per_waveguide)};
    std::vector<double> y(static_cast<std::size_t>(cfg.num_pas_per_waveguide));
    for (int n = 0; n < cfg.num_waveguides; ++n)
    {
        for (double& v : y)
            v = u(rng);
        std::sort(y.begin(), y.end());
        for (int m = 0; m < cfg.num_pas_per_waveguide; ++m)
            x.x(n, m) = y[static_cast<std::size_t>(m)] + m * cfg.min_spacing_m;
    }
    return repair_layout(x, cfg);
}

Swarm init_swarm(const PsoConfig& pso, const SystemConfig& cfg, Rng& rng, const LayoutFitness& eval,
                 const PaPositionMatrix* incumbent)
{
    const double vmax = pso.velocity_clamp * cfg.region_x_m;
    std::uniform_real_distribution<double> uv(-vmax, vmax);
    Swarm s;
    for (int q = 0; q < pso.num_particles; ++q)
    {
        PaPositionMatrix x = (q == 0 && incumbent) ? *incumbent : random_feasible_layout(cfg, rng);
        Eigen::MatrixXd v(x.x.rows(), x.x.cols());
        for (Eigen::Index i = 0; i < v.size(); ++i)
            v(i) = uv(rng);
        const double f = eval(x);
        s.position.push_back(x.x);
        s.velocity.push_back(std::move(v));
        s.best_position.push_back(x.x);
        s.best_fitness.push_back(f);
        if (q == 0 || f > s.global_best_fitness)
        {
            s.global_best = x.x;
            s.global_best_fitness = f;
        }
    }
    return s;
}

void pso_step(Swarm& s, int t, const PsoConfig& pso, const SystemConfig& cfg, Rng& rng, const LayoutFitness& eval)
{
    const double inertia = pso.max_iterations > 0 ? pso.inertia_max - (pso.inertia_max - pso.inertia_min) *
                                                                          static_cast<double>(t) / pso.max_iterations
                                                  : pso.inertia_max;
    const double vmax = pso.velocity_clamp * cfg.region_x_m;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t q = 0; q < s.position.size(); ++q)
    {
        const double r1 = u(rng);
        const double r2 = u(rng);
        Eigen::MatrixXd& x = s.position[q];
        Eigen::MatrixXd& v = s.velocity[q];
        v = inertia * v + r1 * pso.cognitive * (s.best_position[q] - x) + r2 * pso.social * (s.global_best - x);
        v = v.cwiseMax(-vmax).cwiseMin(vmax);
        x = (x + v).cwiseMax(0.0).cwiseMin(cfg.region_x_m);
        const double f = eval(PaPositionMatrix{x});
        if (f > s.best_fitness[q])
        {
            s.best_fitness[q] = f;
            s.best_position[q] = x;
        }
    }
    for (std::size_t q = 0; q < s.position.size(); ++q)
    {
        if (s.best_fitness[q] > s.global_best_fitness)
        {
            s.global_best_fitness = s.best_fitness[q];
            s.global_best = s.best_position[q];
        }
    }
}

PaPositionMatrix repair_layout(const PaPositionMatrix& in, const SystemConfig& cfg)
{
    PaPositionMatrix x = in;
    const Eigen::Index m_pa = x.x.cols();
    const double d = cfg.min_spacing_m;
    const double top = cfg.max_offset_budget();
    for (Eigen::Index n = 0; n < x.x.rows(); ++n)
    {
        std::vector<double> row(static_cast<std::size_t>(m_pa));
        for (Eigen::Index m = 0; m < m_pa; ++m)
            row[static_cast<std::size_t>(m)] = x.x(n, m);
        std::sort(row.begin(), row.end());

        // Pool adjacent violators on y_m = x_m - m d, then clip to the shifted range.
        std::vector<double> level;
        std::vector<int> weight;
        for (Eigen::Index m = 0; m < m_pa; ++m)
        {
            level.push_back(row[static_cast<std::size_t>(m)] - static_cast<double>(m) * d);
            weight.push_back(1);
            while (level.size() > 1 && level[level.size() - 2] > level.back())
            {
                const double w1 = weight[weight.size() - 2];
                const double w2 = weight.back();
                const double merged = (w1 * level[level.size() - 2] + w2 * level.back()) / (w1 + w2);
                level.pop_back();
                weight.pop_back();
                level.back() = merged;
                weight.back() += static_cast<int>(w2);
            }
        }
        Eigen::Index m = 0;
        for (std::size_t b = 0; b < level.size(); ++b)
            for (int c = 0; c < weight[b]; ++c, ++m)
                x.x(n, m) = std::clamp(level[b], 0.0, top) + static_cast<double>(m) * d;

        // Rounding in y + m d can leave a gap an ulp short of d_min.
        for (Eigen::Index k = 1; k < m_pa; ++k)
            while (x.x(n, k) - x.x(n, k - 1) - d < 0.0)
                x.x(n, k) = std::nextafter(x.x(n, k), cfg.region_x_m + 1.0);
        x.x(n, m_pa - 1) = std::min(x.x(n, m_pa - 1), cfg.region_x_m);
        for (Eigen::Index k = m_pa - 2; k >= 0; --k)
            while (x.x(n, k + 1) - x.x(n, k) - d < 0.0)
                x.x(n, k) = std::nextafter(x.x(n, k), -1.0);
    }
    return x;
}

PsoResult solve_pso(const TransmitBeam& w, const Geometry& geom, const SystemConfig& cfg, const PsoConfig& pso,
                    std::uint64_t seed, const PaPositionMatrix* incumbent)
{
    Rng rng(seed);
    const LayoutFitness eval = [&](const PaPositionMatrix& x) { return pso_fitness(x, w, geom, cfg, pso.penalty); };
    Swarm swarm = init_swarm(pso, cfg, rng, eval, incumbent);
    PsoResult res;
    res.trace.push_back(swarm.global_best_fitness);
    for (int t = 0; t < pso.max_iterations; ++t)
    {
        pso_step(swarm, t, pso, cfg, rng, eval);
        res.trace.push_back(swarm.global_best_fitness);
    }
    res.x = repair_layout(PaPositionMatrix{swarm.global_best}, cfg);
    const ChannelSet chs = build_channels(res.x, geom, cfg);
    const int violations = violation_count(res.x, w, chs, cfg);
    res.fitness = sum_rate(chs, w, cfg).sum_rate - pso.penalty * violations;
    res.penalized = violations > 0;
    return res;
}

} // namespace passr
