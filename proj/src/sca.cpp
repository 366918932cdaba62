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
#include "passr/sca.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "passr/lgd.hpp"

namespace passr
{

namespace
{

double real_inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
    return (a.array().conjugate() * b.array()).sum().real();
}

Eigen::RowVectorXcd branch_row(const ChannelSet& chs, int k, int branch)
{
    if (branch == 0)
        return chs.h_eq_pr.row(k);
    return chs.h_eq_pr.row(k) + chs.cascade_pr.row(k);
}

void anchor_values(const Eigen::RowVectorXcd& a, const TransmitBeam& w, int k, double noise, cplx& u, double& v)
{
    const Eigen::RowVectorXcd s = a * w.w;
    u = s(k);
    v = s.squaredNorm() - std::norm(s(k)) + noise;
}

// Lower bound 2 Re(conj(u_a) u) / v_a - |u_a|^2 v / v_a^2 for one branch.
double bound_value(cplx ua, double va, cplx u, double v)
{
    return 2.0 * std::real(std::conj(ua) * u) / va - std::norm(ua) * v / (va * va);
}

} // namespace

void ScaConfig::validate() const
{
    if (!(tol > 0))
        throw ConfigError("sca.tol must be > 0");
    if (max_iterations < 1)
        throw ConfigError("sca.max_iterations must be >= 1");
    if (subproblem_max_steps < 1)
        throw ConfigError("sca.subproblem_max_steps must be >= 1");
    if (!(subproblem_tol > 0))
        throw ConfigError("sca.subproblem_tol must be > 0");
}

SurrogatePoint make_surrogate_point(const ChannelSet& chs, const TransmitBeam& anchor, const SystemConfig& cfg)
{
    const int k_count = chs.num_prs();
    SurrogatePoint p;
    p.u1.resize(k_count);
    p.u2.resize(k_count);
    p.v1.resize(k_count);
    p.v2.resize(k_count);
    for (int k = 0; k < k_count; ++k)
    {
        anchor_values(branch_row(chs, k, 0), anchor, k, cfg.noise_power_w_pr, p.u1(k), p.v1(k));
        anchor_values(branch_row(chs, k, 1), anchor, k, cfg.noise_power_w_pr, p.u2(k), p.v2(k));
    }
    p.beam = anchor;
    return p;
}

RateBound taylor_rate_bound(const TransmitBeam& w, const SurrogatePoint& anchor, const ChannelSet& chs,
                            const SystemConfig& cfg, int k)
{
    cplx u;
    double v;
    RateBound b;
    anchor_values(branch_row(chs, k, 0), w, k, cfg.noise_power_w_pr, u, v);
    b.t1 = bound_value(anchor.u1(k), anchor.v1(k), u, v);
    anchor_values(branch_row(chs, k, 1), w, k, cfg.noise_power_w_pr, u, v);
    b.t2 = bound_value(anchor.u2(k), anchor.v2(k), u, v);
    return b;
}

double detection_linearization(const TransmitBeam& w, const TransmitBeam& anchor_w, const ChannelSet& chs)
{
    const Eigen::RowVectorXcd ra = chs.cascade_ir * anchor_w.w;
    const Eigen::RowVectorXcd rw = chs.cascade_ir * w.w;
    return 2.0 * ra.conjugate().cwiseProduct(rw).sum().real() - ra.squaredNorm();
}

double surrogate_objective(const TransmitBeam& w, const SurrogatePoint& anchor, const ChannelSet& chs,
                           const SystemConfig& cfg)
{
    double s = 0.0;
    for (int k = 0; k < chs.num_prs(); ++k)
    {
        const RateBound b = taylor_rate_bound(w, anchor, chs, cfg, k);
        if (!(b.t1 > -1.0) || !(b.t2 > -1.0))
            return -std::numeric_limits<double>::infinity();
        s += std::log2(1.0 + b.t1) + std::log2(1.0 + b.t2);
    }
    return s;
}

Eigen::MatrixXcd surrogate_gradient(const TransmitBeam& w, const SurrogatePoint& anchor, const ChannelSet& chs,
                                    const SystemConfig& cfg)
{
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(w.w.rows(), w.w.cols());  // dS/dW*
    for (int k = 0; k < chs.num_prs(); ++k)
    {
        for (int branch = 0; branch < 2; ++branch)
        {
            const Eigen::RowVectorXcd a = branch_row(chs, k, branch);
            const cplx ua = branch == 0 ? anchor.u1(k) : anchor.u2(k);
            const double va = branch == 0 ? anchor.v1(k) : anchor.v2(k);
            cplx u;
            double v;
            anchor_values(a, w, k, cfg.noise_power_w_pr, u, v);
            const double coef = 1.0 / ((1.0 + bound_value(ua, va, u, v)) * std::numbers::ln2);
            const Eigen::VectorXcd ah = a.adjoint();
            const Eigen::RowVectorXcd s = a * w.w;
            for (Eigen::Index i = 0; i < w.w.cols(); ++i)
            {
                if (i == k)
                    g.col(i) += (coef * ua / va) * ah;
                else
                    g.col(i) -= (coef * std::norm(ua) / (va * va) * s(i)) * ah;
            }
        }
    }
    return 2.0 * g;
}

HalfSpace detection_halfspace(const TransmitBeam& anchor_w, const ChannelSet& chs, const SystemConfig& cfg)
{
    const Eigen::RowVectorXcd ra = chs.cascade_ir * anchor_w.w;
    HalfSpace hs;
    hs.a = 2.0 * (chs.cascade_ir.adjoint() * ra);
    hs.beta = min_backscatter_power(cfg) * (1.0 + 1e-9) + ra.squaredNorm();
    return hs;
}

bool project_feasible(Eigen::MatrixXcd& w, double power, const HalfSpace* hs)
{
    SystemConfig ball;
    ball.max_power_w = power;
    auto onto_ball = [&](Eigen::MatrixXcd m) { return project_power(TransmitBeam{std::move(m)}, ball).w; };

    if (hs == nullptr)
    {
        w = onto_ball(w);
        return true;
    }
    const double na2 = hs->a.squaredNorm();
    if (na2 == 0.0 || hs->beta > std::sqrt(power * na2))
    {
        w = onto_ball(w);
        return hs->beta <= 0.0;
    }

    const Eigen::MatrixXcd wb = onto_ball(w);
    if (real_inner(hs->a, wb) >= hs->beta)
    {
        w = wb;
        return true;
    }
    const double gap = hs->beta - real_inner(hs->a, w);
    const Eigen::MatrixXcd wh = gap > 0.0 ? Eigen::MatrixXcd(w + (gap / na2) * hs->a) : w;
    if (wh.squaredNorm() <= power)
    {
        w = wh;
        return true;
    }

    // Both constraints active: closest point of the circle where the sphere meets the hyperplane.
    const Eigen::MatrixXcd centre = (hs->beta / na2) * hs->a;
    const double radius = std::sqrt(std::max(0.0, power - hs->beta * hs->beta / na2));
    Eigen::MatrixXcd d = wh - centre;
    if (d.norm() == 0.0)
        d = cplx(0.0, 1.0) * hs->a;
    w = onto_ball(centre + (radius / d.norm()) * d);
    return true;
}

TransmitBeam max_detection_beam(const ChannelSet& chs, const TransmitBeam& hint, const SystemConfig& cfg)
{
    const Eigen::RowVectorXcd& b = chs.cascade_ir;
    if (b.norm() == 0.0)
        return project_power(hint, cfg);
    Eigen::RowVectorXcd u = b * hint.w;
    if (u.norm() == 0.0)
        u = Eigen::RowVectorXcd::Ones(hint.w.cols());
    TransmitBeam w{b.adjoint() * u};
    w.w *= std::sqrt(cfg.max_power_w) / w.w.norm();
    return project_power(std::move(w), cfg);
}

TransmitBeam restore_detection(const ChannelSet& chs, const TransmitBeam& w, const SystemConfig& cfg, bool& ok)
{
    const double need = min_backscatter_power(cfg);
    ok = true;
    if (detection_metric(chs, w, cfg).gamma_b >= need)
        return w;
    const HalfSpace hs = detection_halfspace(w, chs, cfg);
    TransmitBeam near{w.w};
    if (project_feasible(near.w, cfg.max_power_w, &hs) && detection_metric(chs, near, cfg).gamma_b >= need)
        return near;
    TransmitBeam best = max_detection_beam(chs, w, cfg);
    ok = detection_metric(chs, best, cfg).gamma_b >= need;
    return best;
}

namespace
{

SubproblemResult ascend(const SurrogatePoint& anchor, const ChannelSet& chs, const SystemConfig& cfg,
                        const ScaConfig& sca, bool allow_restore)
{
    SubproblemResult res;
    HalfSpace hs;
    const HalfSpace* hp = nullptr;
    if (sca.enforce_detection)
    {
        hs = detection_halfspace(anchor.beam, chs, cfg);
        hp = &hs;
    }

    Eigen::MatrixXcd w = anchor.beam.w;
    if (!project_feasible(w, cfg.max_power_w, hp))
    {
        bool ok = false;
        const TransmitBeam restored = restore_detection(chs, anchor.beam, cfg, ok);
        if (!ok || !allow_restore)
        {
            res.w = anchor.beam;
            res.objective = surrogate_objective(anchor.beam, anchor, chs, cfg);
            res.feasible = false;
            return res;
        }
        return ascend(make_surrogate_point(chs, restored, cfg), chs, cfg, sca, false);
    }

    double value = surrogate_objective(TransmitBeam{w}, anchor, chs, cfg);
    double step = -1.0;
    for (; res.steps < sca.subproblem_max_steps; ++res.steps)
    {
        const Eigen::MatrixXcd g = surrogate_gradient(TransmitBeam{w}, anchor, chs, cfg);
        const double gnorm = g.norm();
        if (!(gnorm > 0.0))
            break;
        if (step < 0.0)
            step = 0.1 * std::sqrt(cfg.max_power_w) / gnorm;

        bool accepted = false;
        Eigen::MatrixXcd next;
        double next_value = value;
        for (int bt = 0; bt < 60; ++bt)
        {
            next = w + step * g;
            project_feasible(next, cfg.max_power_w, hp);
            next_value = surrogate_objective(TransmitBeam{next}, anchor, chs, cfg);
            if (std::isfinite(next_value) && next_value >= value + 1e-4 * real_inner(g, next - w))
            {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            break;
        const double gain = next_value - value;
        w = std::move(next);
        value = next_value;
        step *= 2.0;
        if (gain <= sca.subproblem_tol)
            break;
    }
    res.w = TransmitBeam{w};
    res.objective = value;
    return res;
}

} // namespace

SubproblemResult solve_sca_subproblem(const SurrogatePoint& anchor, const ChannelSet& chs, const SystemConfig& cfg,
                                      const ScaConfig& sca)
{
    return ascend(anchor, chs, cfg, sca, true);
}

ScaResult sca_loop(const ChannelSet& chs, const TransmitBeam& w0, const SystemConfig& cfg, const ScaConfig& sca)
{
    ScaResult out;
    out.w = project_power(w0, cfg);
    if (sca.enforce_detection)
    {
        bool ok = false;
        out.w = restore_detection(chs, out.w, cfg, ok);
        if (!ok)
        {
            out.feasible = false;
            out.message = "detection constraint cannot be met at full power for this layout";
            out.trace.push_back(sum_rate(chs, out.w, cfg).sum_rate);
            return out;
        }
    }

    double rate = sum_rate(chs, out.w, cfg).sum_rate;
    out.trace.push_back(rate);
    for (int it = 0; it < sca.max_iterations; ++it)
    {
        const SubproblemResult sub = solve_sca_subproblem(make_surrogate_point(chs, out.w, cfg), chs, cfg, sca);
        if (!sub.feasible)
        {
            out.feasible = false;
            out.message = "linearized detection constraint infeasible";
            break;
        }
        const double next = sum_rate(chs, sub.w, cfg).sum_rate;
        ++out.iterations;
        if (next < rate)
            break;
        out.w = sub.w;
        out.trace.push_back(next);
        const double change = next - rate;
        rate = next;
        if (change <= sca.tol)
            break;
    }
    return out;
}

ScaResult sca_loop(const PaPositionMatrix& x, const TransmitBeam& w0, const Geometry& geom, const SystemConfig& cfg,
                   const ScaConfig& sca)
{
    return sca_loop(build_channels(x, geom, cfg), w0, cfg, sca);
}

} // namespace passr
