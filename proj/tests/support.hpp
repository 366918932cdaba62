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

// Shared fixtures and independent oracles for the unit and acceptance suites.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "passr/config.hpp"
#include "passr/lgd.hpp"
#include "passr/model.hpp"
#include "passr/rng.hpp"

namespace passr::test
{

inline SystemConfig small_config(int n, int k, int m)
{
    SystemConfig cfg;
    cfg.num_waveguides = n;
    cfg.num_prs = k;
    cfg.num_pas_per_waveguide = m;
    return cfg;
}

inline Geometry random_geometry(const SystemConfig& cfg, Rng& rng)
{
    std::uniform_real_distribution<double> ux(0.0, cfg.region_x_m);
    std::uniform_real_distribution<double> uy(0.0, cfg.region_y_m);
    std::vector<Vec3> prs;
    for (int k = 0; k < cfg.num_prs; ++k)
    {
        const double x = ux(rng);
        const double y = uy(rng);
        prs.emplace_back(x, y, 0.0);
    }
    const double ix = ux(rng);
    const double iy = uy(rng);
    return make_geometry(cfg, std::move(prs), Vec3(ix, iy, 0.0));
}

inline TransmitBeam random_beam(const SystemConfig& cfg, Rng& rng, double power)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    TransmitBeam w{Eigen::MatrixXcd(cfg.num_waveguides, cfg.num_prs)};
    for (Eigen::Index i = 0; i < w.w.size(); ++i)
    {
        const double re = nd(rng);
        const double im = nd(rng);
        w.w(i) = {re, im};
    }
    w.w *= std::sqrt(power) / w.w.norm();
    return w;
}

/// Sorted random layout that satisfies spacing and range.
inline PaPositionMatrix random_layout(const SystemConfig& cfg, Rng& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    OffsetMatrix dx{Eigen::MatrixXd(cfg.num_waveguides, cfg.num_pas_per_waveguide)};
    for (Eigen::Index i = 0; i < dx.dx.size(); ++i)
        dx.dx(i) = u(rng);
    for (Eigen::Index n = 0; n < dx.dx.rows(); ++n)
    {
        const double scale = cfg.max_offset_budget() * u(rng) / dx.dx.row(n).sum();
        dx.dx.row(n) *= scale;
    }
    return offsets_to_positions(dx, cfg);
}

/// h_k^H(X) G(X) assembled as the full 1 x NM row times the NM x N block-diagonal response.
inline Eigen::RowVectorXcd brute_force_equivalent(const PaPositionMatrix& x, const Geometry& geom, const Vec3& rx,
                                                  const SystemConfig& cfg)
{
    const Eigen::Index n_wg = x.x.rows();
    const Eigen::Index m_pa = x.x.cols();
    Eigen::RowVectorXcd h(n_wg * m_pa);
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n_wg * m_pa, n_wg);
    for (Eigen::Index n = 0; n < n_wg; ++n)
    {
        const Eigen::VectorXcd resp = waveguide_response(x.x.row(n), cfg);
        for (Eigen::Index m = 0; m < m_pa; ++m)
        {
            const Vec3 pa(x.x(n, m), geom.waveguide_y_m[static_cast<std::size_t>(n)], cfg.pa_height_m);
            h(n * m_pa + m) = free_space_channel(pa, rx, cfg);
            g(n * m_pa + m, n) = resp(m);
        }
    }
    return h * g;
}

/// Rate of PR k as the average over the equiprobable backscatter symbol c in {0, 1}, by explicit loops.
inline double enumerated_rate(const ChannelSet& chs, const TransmitBeam& w, int k, double noise)
{
    double acc = 0.0;
    for (int c = 0; c <= 1; ++c)
    {
        std::vector<std::complex<double>> s(static_cast<std::size_t>(w.w.cols()));
        for (Eigen::Index i = 0; i < w.w.cols(); ++i)
            for (Eigen::Index n = 0; n < w.w.rows(); ++n)
                s[static_cast<std::size_t>(i)] += (chs.h_eq_pr(k, n) + double(c) * chs.f_bd_pr(k) * chs.h_eq_bd(n)) * w.w(n, i);
        double den = noise;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (static_cast<int>(i) != k)
                den += std::norm(s[i]);
        acc += 0.5 * std::log2(1.0 + std::norm(s[static_cast<std::size_t>(k)]) / den);
    }
    return acc;
}

inline double central_difference(const std::function<double(double)>& f, double at, double h)
{
    return (f(at + h) - f(at - h)) / (2.0 * h);
}

/// Relative error with a floor so entries that are zero up to rounding do not dominate.
inline double relative_error(double a, double b, double floor)
{
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Spearman rank correlation (no ties expected).
inline double spearman(const std::vector<double>& a, const std::vector<double>& b)
{
    auto ranks = [](const std::vector<double>& v) {
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            double less = 0, equal = 0;
            for (double u : v)
            {
                if (u < v[i])
                    ++less;
                else if (u == v[i])
                    ++equal;
            }
            r[i] = less + (equal + 1.0) / 2.0;
        }
        return r;
    };
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        ma += ra[i] / n;
        mb += rb[i] / n;
    }
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

/// Max relative error of the analytic penalty gradient against central differences of
/// penalty_objective, over every Re/Im entry of W and every antenna offset.
inline double gradient_check(const Geometry& geom, const SystemConfig& cfg, const OffsetMatrix& dx,
                             const TransmitBeam& w, double xi)
{
    LgdState st;
    st.offsets = dx;
    st.w = w;
    const LgdGradient g = lgd_gradient(st, geom, cfg, xi);
    auto objective = [&](const OffsetMatrix& d, const TransmitBeam& b) {
        const PaPositionMatrix x = offsets_to_positions(d, cfg);
        return penalty_objective(build_channels(x, geom, cfg), b, cfg, xi);
    };

    double scale = 0.0;
    for (Eigen::Index i = 0; i < g.offsets.size(); ++i)
        scale = std::max(scale, std::abs(g.offsets(i)));
    for (Eigen::Index i = 0; i < g.w.size(); ++i)
        scale = std::max({scale, std::abs(g.w(i).real()), std::abs(g.w(i).imag())});
    const double floor = 1e-7 * scale;
    const double wmax = w.w.cwiseAbs().maxCoeff();

    double worst = 0.0;
    for (Eigen::Index i = 0; i < dx.dx.size(); ++i)
    {
        // Position steps are sized by the guided wavelength: the objective oscillates on that
        // scale, so a step relative to |x| (up to tens of metres) is dominated by truncation error.
        const double h = 1e-5 * cfg.wavelength() / cfg.effective_refractive_index;
        auto f = [&](double v) {
            OffsetMatrix d = dx;
            d.dx(i) = v;
            return objective(d, w);
        };
        worst = std::max(worst, relative_error(g.offsets(i), central_difference(f, dx.dx(i), h), floor));
    }
    for (Eigen::Index i = 0; i < w.w.size(); ++i)
    {
        for (int part = 0; part < 2; ++part)
        {
            const double base = part == 0 ? w.w(i).real() : w.w(i).imag();
            const double h = 1e-6 * std::max(std::abs(base), wmax);
            auto f = [&](double v) {
                TransmitBeam b = w;
                b.w(i) = part == 0 ? std::complex<double>(v, w.w(i).imag()) : std::complex<double>(w.w(i).real(), v);
                return objective(dx, b);
            };
            const double analytic = part == 0 ? g.w(i).real() : g.w(i).imag();
            worst = std::max(worst, relative_error(analytic, central_difference(f, base, h), floor));
        }
    }
    return worst;
}

} // namespace passr::test
