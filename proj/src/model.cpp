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
#include "passr/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace passr
{

namespace
{

constexpr cplx kJ{0.0, 1.0};

Vec3 pa_location(double x, double y, const SystemConfig& cfg) { return {x, y, cfg.pa_height_m}; }

// Path coefficient from the feed of waveguide n through PA (n,m) to rx, and its derivative in x_{n,m}.
struct PathTerm
{
    cplx value;
    cplx d_dx;
};

PathTerm path_term(double x, double y, int m, const Vec3& rx, const SystemConfig& cfg)
{
    const Vec3 d = rx - pa_location(x, y, cfg);
    const double r = d.norm();
    if (!(r > 0.0))
        throw std::domain_error("free-space channel evaluated at zero distance");
    const double bh = cfg.free_space_wavenumber();
    const double bg = cfg.guided_wavenumber();
    const cplx c = cfg.amplitude(m) * cfg.kappa() * std::exp(-kJ * (bh * r + bg * x)) / r;
    const double dr_dx = (x - rx.x()) / r;
    return {c, c * (-(kJ * bh + 1.0 / r) * dr_dx - kJ * bg)};
}

} // namespace

cplx free_space_channel(const Vec3& pa_pos, const Vec3& rx_pos, const SystemConfig& cfg)
{
    const double r = (rx_pos - pa_pos).norm();
    if (!(r > 0.0))
        throw std::domain_error("free-space channel evaluated at zero distance");
    return cfg.kappa() * std::exp(-kJ * cfg.free_space_wavenumber() * r) / r;
}

Eigen::VectorXcd waveguide_response(const Eigen::RowVectorXd& x_row, const SystemConfig& cfg)
{
    Eigen::VectorXcd g(x_row.size());
    const double bg = cfg.guided_wavenumber();
    for (Eigen::Index m = 0; m < x_row.size(); ++m)
        g(m) = cfg.amplitude(static_cast<int>(m)) * std::exp(-kJ * bg * x_row(m));
    return g;
}

cplx reflection_link(const Vec3& bd, const Vec3& rx, double alpha, const SystemConfig& cfg)
{
    const double r = (rx - bd).norm();
    if (!(r > 0.0))
        throw std::domain_error("reflection link evaluated at zero distance");
    return alpha * std::exp(-kJ * cfg.free_space_wavenumber() * r);
}

cplx pinching_path(double x, double waveguide_y, int m, const Vec3& rx, const SystemConfig& cfg)
{
    return path_term(x, waveguide_y, m, rx, cfg).value;
}

Eigen::RowVectorXcd equivalent_channel(const PaPositionMatrix& x, const std::vector<double>& waveguide_y,
                                       const Vec3& rx, const SystemConfig& cfg)
{
    const Eigen::Index n_wg = x.x.rows();
    Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(n_wg);
    for (Eigen::Index n = 0; n < n_wg; ++n)
        for (Eigen::Index m = 0; m < x.x.cols(); ++m)
            row(n) += path_term(x.x(n, m), waveguide_y[static_cast<std::size_t>(n)], static_cast<int>(m), rx, cfg)
                          .value;
    return row;
}

void attach_backscatter(ChannelSet& chs, const Geometry& geom, const SystemConfig& cfg)
{
    const int k_count = static_cast<int>(geom.pr_positions_m.size());
    chs.f_bd_pr.resize(k_count);
    chs.cascade_pr.resize(k_count, chs.h_eq_bd.size());
    for (int k = 0; k < k_count; ++k)
    {
        chs.f_bd_pr(k) = reflection_link(geom.bd_position_m, geom.pr_positions_m[static_cast<std::size_t>(k)],
                                         cfg.bd_reflection_pr, cfg);
        chs.cascade_pr.row(k) = chs.f_bd_pr(k) * chs.h_eq_bd;
    }
    chs.f_bd_ir = reflection_link(geom.bd_position_m, geom.ir_position_m, cfg.bd_reflection_ir, cfg);
    chs.cascade_ir = chs.f_bd_ir * chs.h_eq_bd;
}

ChannelSet build_channels(const PaPositionMatrix& x, const Geometry& geom, const SystemConfig& cfg)
{
    ChannelSet chs;
    const int k_count = static_cast<int>(geom.pr_positions_m.size());
    chs.h_eq_pr.resize(k_count, x.x.rows());
    for (int k = 0; k < k_count; ++k)
        chs.h_eq_pr.row(k) =
            equivalent_channel(x, geom.waveguide_y_m, geom.pr_positions_m[static_cast<std::size_t>(k)], cfg);
    chs.h_eq_bd = equivalent_channel(x, geom.waveguide_y_m, geom.bd_position_m, cfg);
    attach_backscatter(chs, geom, cfg);
    return chs;
}

double branch_sinr(const Eigen::RowVectorXcd& channel, const TransmitBeam& w, int k, double noise)
{
    const Eigen::RowVectorXcd s = channel * w.w;
    double interference = noise;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (i != k)
            interference += std::norm(s(i));
    return std::norm(s(k)) / interference;
}

double rate_k(const ChannelSet& chs, const TransmitBeam& w, int k, const SystemConfig& cfg)
{
    const double t1 = branch_sinr(chs.h_eq_pr.row(k), w, k, cfg.noise_power_w_pr);
    const double t2 = branch_sinr(chs.h_eq_pr.row(k) + chs.cascade_pr.row(k), w, k, cfg.noise_power_w_pr);
    return 0.5 * std::log2(1.0 + t1) + 0.5 * std::log2(1.0 + t2);
}

RateReport sum_rate(const ChannelSet& chs, const TransmitBeam& w, const SystemConfig& cfg)
{
    RateReport rep;
    const int k_count = chs.num_prs();
    rep.per_pr_rate.resize(static_cast<std::size_t>(k_count));
    rep.sinr_direct.resize(static_cast<std::size_t>(k_count));
    rep.sinr_combined.resize(static_cast<std::size_t>(k_count));
    for (int k = 0; k < k_count; ++k)
    {
        const auto kk = static_cast<std::size_t>(k);
        rep.sinr_direct[kk] = branch_sinr(chs.h_eq_pr.row(k), w, k, cfg.noise_power_w_pr);
        rep.sinr_combined[kk] = branch_sinr(chs.h_eq_pr.row(k) + chs.cascade_pr.row(k), w, k, cfg.noise_power_w_pr);
        rep.per_pr_rate[kk] = 0.5 * std::log2(1.0 + rep.sinr_direct[kk]) + 0.5 * std::log2(1.0 + rep.sinr_combined[kk]);
        rep.sum_rate += rep.per_pr_rate[kk];
    }
    return rep;
}

double kl_per_symbol(double rho)
{
    const double g = rho - 1.0;
    if (std::abs(g) < 1e-2)
    {
        // sum_{n>=2} (-1)^n (n-1)/n g^n
        double term = g;
        double acc = 0.0;
        for (int n = 2; n < 14; ++n)
        {
            term *= -g;
            acc -= term * (n - 1) / n;
        }
        return acc;
    }
    return std::log(rho) + 1.0 / rho - 1.0;
}

DetectionMetric detection_from_gamma(double gamma_b, const SystemConfig& cfg)
{
    DetectionMetric d;
    d.gamma_b = gamma_b;
    d.rho = (gamma_b + cfg.noise_power_w_ir) / cfg.noise_power_w_ir;
    d.kl = cfg.symbol_ratio * kl_per_symbol(d.rho);
    d.pe_upper_bound = std::clamp(1.0 - std::sqrt(std::max(d.kl, 0.0) / 2.0), 0.0, 1.0);
    return d;
}

DetectionMetric detection_metric(const ChannelSet& chs, const TransmitBeam& w, const SystemConfig& cfg)
{
    return detection_from_gamma((chs.cascade_ir * w.w).squaredNorm(), cfg);
}

double detection_root(double target)
{
    if (!(target > 0.0))
        return 1.0;
    // Solve in g = rho - 1 so roots close to 1 keep full relative precision.
    auto f = [](double g) { return kl_per_symbol(1.0 + g); };
    double lo = 0.0;
    double hi = std::max(1e-300, std::sqrt(2.0 * target));
    while (f(hi) < target)
        hi *= 2.0;
    for (int it = 0; it < 2000 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 1.0 + 0.5 * (lo + hi);
}

double detection_root(const SystemConfig& cfg) { return detection_root(cfg.kl_target() / cfg.symbol_ratio); }

double min_backscatter_power(const SystemConfig& cfg) { return (detection_root(cfg) - 1.0) * cfg.noise_power_w_ir; }

double penalty_objective(const ChannelSet& chs, const TransmitBeam& w, const SystemConfig& cfg, double xi)
{
    const double violation = std::max(0.0, cfg.kl_target() - detection_metric(chs, w, cfg).kl);
    return -sum_rate(chs, w, cfg).sum_rate + xi * violation * violation;
}

Residuals feasibility_check(const PaPositionMatrix& x, const TransmitBeam& w, const ChannelSet& chs,
                            const SystemConfig& cfg)
{
    Residuals r;
    r.power = cfg.max_power_w - w.power();
    r.detection = detection_metric(chs, w, cfg).kl - cfg.kl_target();
    if (x.x.size() > 0)
    {
        r.range = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < x.x.size(); ++i)
            r.range = std::min({r.range, x.x(i), cfg.region_x_m - x.x(i)});
    }
    if (x.x.cols() > 1)
    {
        r.spacing = std::numeric_limits<double>::infinity();
        for (Eigen::Index n = 0; n < x.x.rows(); ++n)
            for (Eigen::Index m = 0; m + 1 < x.x.cols(); ++m)
                r.spacing = std::min(r.spacing, x.x(n, m + 1) - x.x(n, m) - cfg.min_spacing_m);
    }
    return r;
}

// Wirtinger calculus throughout: for real F and complex z, dF = 2 Re(conj(dF/dz*) dz).
double penalty_gradient_w(const ChannelSet& chs, const TransmitBeam& w, const SystemConfig& cfg, double xi,
                          Eigen::MatrixXcd& grad_w, ChannelSensitivity& sens)
{
    const int k_count = chs.num_prs();
    const Eigen::Index n_feeds = chs.num_feeds();
    const double noise = cfg.noise_power_w_pr;
    const double scale = -0.5 / std::numbers::ln2;

    Eigen::MatrixXcd g_w = Eigen::MatrixXcd::Zero(n_feeds, w.w.cols());  // dF/dW*
    sens.pr = Eigen::MatrixXcd::Zero(k_count, n_feeds);
    sens.bd = Eigen::RowVectorXcd::Zero(n_feeds);

    double value = 0.0;
    for (int k = 0; k < k_count; ++k)
    {
        for (int branch = 0; branch < 2; ++branch)
        {
            const Eigen::RowVectorXcd a =
                branch == 0 ? Eigen::RowVectorXcd(chs.h_eq_pr.row(k))
                            : Eigen::RowVectorXcd(chs.h_eq_pr.row(k) + chs.cascade_pr.row(k));
            const Eigen::RowVectorXcd s = a * w.w;
            const double total = s.squaredNorm() + noise;
            const double denom = total - std::norm(s(k));
            value -= 0.5 * std::log2(total / denom);

            // d(log2 T - log2 den)/d|s_i|^2 up to the 1/ln2 folded into scale.
            Eigen::RowVectorXcd g_a = Eigen::RowVectorXcd::Zero(n_feeds);
            for (Eigen::Index i = 0; i < s.size(); ++i)
            {
                const double c = (i == k) ? 1.0 / total : 1.0 / total - 1.0 / denom;
                g_w.col(i) += (scale * c * s(i)) * a.adjoint();
                g_a += (scale * c * s(i)) * w.w.col(i).adjoint();
            }
            sens.pr.row(k) += g_a;
            if (branch == 1)
                sens.bd += std::conj(chs.f_bd_pr(k)) * g_a;
        }
    }

    const DetectionMetric det = detection_metric(chs, w, cfg);
    const double violation = std::max(0.0, cfg.kl_target() - det.kl);
    value += xi * violation * violation;
    if (violation > 0.0)
    {
        const double g = det.gamma_b / cfg.noise_power_w_ir;
        const double dkl_dgamma = cfg.symbol_ratio * g / (det.rho * det.rho * cfg.noise_power_w_ir);
        const double dp_dgamma = -2.0 * xi * violation * dkl_dgamma;
        const Eigen::RowVectorXcd s = chs.cascade_ir * w.w;
        Eigen::RowVectorXcd g_b = Eigen::RowVectorXcd::Zero(n_feeds);
        for (Eigen::Index i = 0; i < s.size(); ++i)
        {
            g_w.col(i) += (dp_dgamma * s(i)) * chs.cascade_ir.adjoint();
            g_b += (dp_dgamma * s(i)) * w.w.col(i).adjoint();
        }
        sens.bd += std::conj(chs.f_bd_ir) * g_b;
    }

    grad_w = 2.0 * g_w;
    return value;
}

PenaltyGradient penalty_gradient(const PaPositionMatrix& x, const TransmitBeam& w, const Geometry& geom,
                                 const SystemConfig& cfg, double xi)
{
    const ChannelSet chs = build_channels(x, geom, cfg);
    PenaltyGradient out;
    ChannelSensitivity sens;
    out.value = penalty_gradient_w(chs, w, cfg, xi, out.w, sens);
    out.kl = detection_metric(chs, w, cfg).kl;

    const Eigen::Index n_wg = x.x.rows();
    const Eigen::Index m_pa = x.x.cols();
    out.x = Eigen::MatrixXd::Zero(n_wg, m_pa);
    const int k_count = chs.num_prs();
    for (Eigen::Index n = 0; n < n_wg; ++n)
    {
        const double y = geom.waveguide_y_m[static_cast<std::size_t>(n)];
        for (Eigen::Index m = 0; m < m_pa; ++m)
        {
            double d = 0.0;
            for (int k = 0; k < k_count; ++k)
            {
                const PathTerm t =
                    path_term(x.x(n, m), y, static_cast<int>(m), geom.pr_positions_m[static_cast<std::size_t>(k)], cfg);
                d += 2.0 * std::real(std::conj(sens.pr(k, n)) * t.d_dx);
            }
            const PathTerm t = path_term(x.x(n, m), y, static_cast<int>(m), geom.bd_position_m, cfg);
            d += 2.0 * std::real(std::conj(sens.bd(n)) * t.d_dx);
            out.x(n, m) = d;
        }
    }
    return out;
}

} // namespace passr
