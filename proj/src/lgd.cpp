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
#include "passr/lgd.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace passr
{

void LgdConfig::validate() const
{
    if (!(learning_rate > 0))
        throw ConfigError("lgd.learning_rate must be > 0");
    if (!(adam_beta1 > 0 && adam_beta1 < 1 && adam_beta2 > 0 && adam_beta2 < 1))
        throw ConfigError("lgd adam betas must lie in (0, 1)");
    if (!(adam_epsilon > 0))
        throw ConfigError("lgd.adam_epsilon must be > 0");
    if (!(penalty_weight > 0))
        throw ConfigError("lgd.penalty_weight must be > 0");
    if (max_iterations < 1)
        throw ConfigError("lgd.max_iterations must be >= 1");
    if (!(convergence_tol >= 0) || patience < 1)
        throw ConfigError("lgd convergence settings invalid");
}

PaPositionMatrix offsets_to_positions(const OffsetMatrix& dx, const SystemConfig& cfg)
{
    PaPositionMatrix x{Eigen::MatrixXd(dx.dx.rows(), dx.dx.cols())};
    for (Eigen::Index n = 0; n < dx.dx.rows(); ++n)
    {
        double acc = 0.0;
        for (Eigen::Index m = 0; m < dx.dx.cols(); ++m)
        {
            acc += dx.dx(n, m);
            x.x(n, m) = static_cast<double>(m) * cfg.min_spacing_m + acc;
        }
    }
    return x;
}

OffsetMatrix positions_to_offsets(const PaPositionMatrix& x, const SystemConfig& cfg)
{
    OffsetMatrix dx{Eigen::MatrixXd(x.x.rows(), x.x.cols())};
    for (Eigen::Index n = 0; n < x.x.rows(); ++n)
        for (Eigen::Index m = 0; m < x.x.cols(); ++m)
            dx.dx(n, m) = m == 0 ? x.x(n, 0) : x.x(n, m) - x.x(n, m - 1) - cfg.min_spacing_m;
    return dx;
}

OffsetMatrix normalize_offsets(OffsetMatrix dx, const SystemConfig& cfg)
{
    const double budget = cfg.max_offset_budget();
    for (Eigen::Index n = 0; n < dx.dx.rows(); ++n)
    {
        const double total = dx.dx.row(n).sum();
        if (total <= budget)
            continue;
        double factor = budget / total;
        Eigen::RowVectorXd row = dx.dx.row(n) * factor;
        // Rounding can leave the rescaled sum an ulp above the budget.
        while (row.sum() > budget)
        {
            factor = std::nextafter(factor, 0.0);
            row = dx.dx.row(n) * factor;
        }
        dx.dx.row(n) = row;
    }
    return dx;
}

TransmitBeam project_power(TransmitBeam w, const SystemConfig& cfg)
{
    const double power = w.power();
    if (power <= cfg.max_power_w)
        return w;
    double factor = std::sqrt(cfg.max_power_w / power);
    Eigen::MatrixXcd scaled = w.w * factor;
    while (scaled.squaredNorm() > cfg.max_power_w)
    {
        factor = std::nextafter(factor, 0.0);
        scaled = w.w * factor;
    }
    w.w = std::move(scaled);
    return w;
}

Eigen::VectorXd pack_parameters(const OffsetMatrix& dx, const TransmitBeam& w)
{
    const Eigen::Index n_off = dx.dx.size();
    Eigen::VectorXd theta(n_off + 2 * w.w.size());
    Eigen::Index p = 0;
    for (Eigen::Index n = 0; n < dx.dx.rows(); ++n)
        for (Eigen::Index m = 0; m < dx.dx.cols(); ++m)
            theta(p++) = dx.dx(n, m);
    for (Eigen::Index i = 0; i < w.w.size(); ++i)
    {
        theta(p++) = w.w(i).real();
        theta(p++) = w.w(i).imag();
    }
    return theta;
}

void unpack_parameters(const Eigen::VectorXd& theta, OffsetMatrix& dx, TransmitBeam& w)
{
    Eigen::Index p = 0;
    for (Eigen::Index n = 0; n < dx.dx.rows(); ++n)
        for (Eigen::Index m = 0; m < dx.dx.cols(); ++m)
            dx.dx(n, m) = theta(p++);
    for (Eigen::Index i = 0; i < w.w.size(); ++i)
    {
        w.w(i) = cplx(theta(p), theta(p + 1));
        p += 2;
    }
}

LgdGradient lgd_gradient(const LgdState& state, const Geometry& geom, const SystemConfig& cfg, double xi)
{
    const PaPositionMatrix x = offsets_to_positions(state.offsets, cfg);
    const PenaltyGradient pg = penalty_gradient(x, state.w, geom, cfg, xi);
    LgdGradient g;
    g.objective = pg.value;
    g.kl = pg.kl;
    g.w = pg.w;
    // dx_{n,j} feeds every x_{n,m} with m >= j: reverse cumulative sum.
    g.offsets = Eigen::MatrixXd(pg.x.rows(), pg.x.cols());
    for (Eigen::Index n = 0; n < pg.x.rows(); ++n)
    {
        double acc = 0.0;
        for (Eigen::Index m = pg.x.cols() - 1; m >= 0; --m)
        {
            acc += pg.x(n, m);
            g.offsets(n, m) = acc;
        }
    }
    return g;
}

void adam_update(AdamMoments& mom, Eigen::VectorXd& theta, const Eigen::VectorXd& grad, const LgdConfig& cfg)
{
    if (mom.first.size() != theta.size())
    {
        mom.first = Eigen::VectorXd::Zero(theta.size());
        mom.second = Eigen::VectorXd::Zero(theta.size());
        mom.step = 0;
    }
    ++mom.step;
    mom.first = cfg.adam_beta1 * mom.first + (1.0 - cfg.adam_beta1) * grad;
    mom.second = cfg.adam_beta2 * mom.second + (1.0 - cfg.adam_beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(mom.step));
    const double c2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(mom.step));
    for (Eigen::Index i = 0; i < theta.size(); ++i)
        theta(i) -= cfg.learning_rate * (mom.first(i) / c1) / (std::sqrt(mom.second(i) / c2) + cfg.adam_epsilon);
}

namespace
{

void restore_constraints(LgdState& s, const SystemConfig& cfg)
{
    s.offsets.dx = s.offsets.dx.cwiseMax(0.0);
    s.offsets = normalize_offsets(std::move(s.offsets), cfg);
    s.w = project_power(std::move(s.w), cfg);
}

} // namespace

LgdState adam_step(LgdState state, const LgdGradient& grad, const SystemConfig& cfg, const LgdConfig& lgd)
{
    Eigen::VectorXd theta = pack_parameters(state.offsets, state.w);
    const Eigen::VectorXd g = pack_parameters(OffsetMatrix{grad.offsets}, TransmitBeam{grad.w});
    adam_update(state.adam, theta, g, lgd);
    unpack_parameters(theta, state.offsets, state.w);
    restore_constraints(state, cfg);
    ++state.iteration;
    return state;
}

OffsetMatrix uniform_offsets(const SystemConfig& cfg)
{
    PaPositionMatrix x{Eigen::MatrixXd(cfg.num_waveguides, cfg.num_pas_per_waveguide)};
    for (int m = 0; m < cfg.num_pas_per_waveguide; ++m)
        x.x.col(m).setConstant((m + 0.5) * cfg.region_x_m / cfg.num_pas_per_waveguide);
    OffsetMatrix dx = positions_to_offsets(x, cfg);
    dx.dx = dx.dx.cwiseMax(0.0);
    return dx;
}

TransmitBeam random_full_power_beam(const SystemConfig& cfg, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    TransmitBeam w{Eigen::MatrixXcd(cfg.num_waveguides, cfg.num_prs)};
    for (Eigen::Index i = 0; i < w.w.size(); ++i)
    {
        const double re = normal(rng);
        const double im = normal(rng);
        w.w(i) = cplx(re, im);
    }
    w.w *= std::sqrt(cfg.max_power_w) / w.w.norm();
    return project_power(std::move(w), cfg);
}

SolveReport solve_lgd(const Geometry& geom, const SystemConfig& cfg, const LgdConfig& lgd, std::uint64_t seed,
                      const std::optional<std::pair<OffsetMatrix, TransmitBeam>>& init)
{
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(seed);

    LgdState st;
    if (init)
    {
        st.offsets = init->first;
        st.w = init->second;
    }
    else
    {
        st.offsets = uniform_offsets(cfg);
        st.w = random_full_power_beam(cfg, rng);
    }
    restore_constraints(st, cfg);

    SolveReport rep;
    rep.solver = "lgd";
    rep.seed = seed;
    rep.trace_metric = "penalized_objective";

    // Last iterate that met the detection constraint, used if the final one does not.
    std::optional<LgdState> last_feasible;
    int calm = 0;
    for (int it = 0; it < lgd.max_iterations; ++it)
    {
        const LgdGradient g = lgd_gradient(st, geom, cfg, lgd.penalty_weight);
        if (!std::isfinite(g.objective) || !g.w.allFinite() || !g.offsets.allFinite())
        {
            rep.status = SolveStatus::failed;
            rep.message = "non-finite objective or gradient at iteration " + std::to_string(it);
            break;
        }
        if (g.kl >= cfg.kl_target())
            last_feasible = st;
        if (!st.trace.empty())
            calm = std::abs(g.objective - st.trace.back()) < lgd.convergence_tol ? calm + 1 : 0;
        st.trace.push_back(g.objective);
        if (calm >= lgd.patience)
            break;
        st = adam_step(std::move(st), g, cfg, lgd);
    }

    rep.iterations = static_cast<int>(st.trace.size());
    rep.trace = st.trace;
    rep.positions = offsets_to_positions(st.offsets, cfg);
    rep.beam = st.w;
    ChannelSet chs = build_channels(rep.positions, geom, cfg);
    finalize_report(rep, chs, cfg);
    if (rep.status != SolveStatus::failed && rep.residuals.detection < 0.0)
    {
        if (last_feasible)
        {
            rep.positions = offsets_to_positions(last_feasible->offsets, cfg);
            rep.beam = last_feasible->w;
            chs = build_channels(rep.positions, geom, cfg);
            finalize_report(rep, chs, cfg);
            rep.message = "final iterate violated detection; returned last feasible iterate";
        }
        else
        {
            rep.status = SolveStatus::infeasible;
            rep.message = "detection constraint never satisfied";
        }
    }
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace passr
