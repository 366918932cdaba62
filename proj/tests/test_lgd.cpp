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
#include <cmath>

#include "doctest.h"
#include "passr/lgd.hpp"
#include "support.hpp"

using namespace passr;
using passr::test::random_beam;
using passr::test::random_geometry;
using passr::test::random_layout;
using passr::test::small_config;

TEST_CASE("offsets and positions round-trip")
{
    const SystemConfig cfg;
    OffsetMatrix dx{Eigen::MatrixXd(2, 3)};
    dx.dx << 1.0, 2.0, 3.0, 0.0, 0.5, 0.25;
    const PaPositionMatrix x = offsets_to_positions(dx, cfg);
    CHECK(x.x(0, 0) == 1.0);
    CHECK(x.x(0, 1) == doctest::Approx(3.1));
    CHECK(x.x(0, 2) == doctest::Approx(6.2));
    CHECK(x.x(1, 2) == doctest::Approx(0.95));
    CHECK((positions_to_offsets(x, cfg).dx - dx.dx).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("normalize_offsets enforces the budget exactly")
{
    const SystemConfig cfg;
    Rng rng(4);
    std::uniform_real_distribution<double> u(0.0, 40.0);
    for (int trial = 0; trial < 500; ++trial)
    {
        OffsetMatrix dx{Eigen::MatrixXd(2, 3)};
        for (Eigen::Index i = 0; i < dx.dx.size(); ++i)
            dx.dx(i) = u(rng);
        const OffsetMatrix out = normalize_offsets(dx, cfg);
        for (Eigen::Index n = 0; n < 2; ++n)
        {
            CHECK(out.dx.row(n).sum() <= cfg.max_offset_budget());
            if (dx.dx.row(n).sum() <= cfg.max_offset_budget())
                CHECK(out.dx.row(n) == dx.dx.row(n));
        }
        const PaPositionMatrix x = offsets_to_positions(out, cfg);
        CHECK(x.x.maxCoeff() <= cfg.region_x_m + 1e-12);
    }
}

TEST_CASE("project_power lands inside the ball")
{
    SystemConfig cfg;
    Rng rng(8);
    for (int trial = 0; trial < 500; ++trial)
    {
        cfg.max_power_w = std::pow(10.0, -3.0 + 6.0 * (trial / 500.0));
        const TransmitBeam w = random_beam(cfg, rng, cfg.max_power_w * 3.7);
        const TransmitBeam p = project_power(w, cfg);
        CHECK(p.power() <= cfg.max_power_w);
        CHECK(p.power() == doctest::Approx(cfg.max_power_w).epsilon(1e-12));
        const TransmitBeam inside = random_beam(cfg, rng, cfg.max_power_w * 0.5);
        CHECK(project_power(inside, cfg).w == inside.w);
    }
}

TEST_CASE("pack and unpack are inverse")
{
    const SystemConfig cfg;
    Rng rng(10);
    OffsetMatrix dx = positions_to_offsets(random_layout(cfg, rng), cfg);
    TransmitBeam w = random_beam(cfg, rng, 1.0);
    const Eigen::VectorXd theta = pack_parameters(dx, w);
    CHECK(theta.size() == 6 + 8);
    CHECK(theta(6) == w.w(0).real());
    CHECK(theta(7) == w.w(0).imag());
    OffsetMatrix dx2{Eigen::MatrixXd::Zero(2, 3)};
    TransmitBeam w2{Eigen::MatrixXcd::Zero(2, 2)};
    unpack_parameters(theta, dx2, w2);
    CHECK(dx2.dx == dx.dx);
    CHECK(w2.w == w.w);
}

TEST_CASE("adam first step by hand")
{
    LgdConfig cfg;
    AdamMoments mom;
    Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 1.0);
    const Eigen::VectorXd g = Eigen::VectorXd::Constant(1, 2.0);
    adam_update(mom, theta, g, cfg);
    // m = 0.2, v = 0.004; bias-corrected m = 2, v = 4; step = 1e-4 * 2 / (2 + 1e-8)
    CHECK(theta(0) == doctest::Approx(1.0 - 1e-4 * 2.0 / (2.0 + 1e-8)).epsilon(1e-15));
    CHECK(mom.step == 1);
    CHECK(mom.first(0) == doctest::Approx(0.2));
    CHECK(mom.second(0) == doctest::Approx(0.004));

    adam_update(mom, theta, -g, cfg);
    // m = 0.9*0.2 - 0.2 = -0.02, v = 0.999*0.004 + 0.004; corrections 0.19 and 0.001999
    const double mhat = -0.02 / 0.19;
    const double vhat = (0.999 * 0.004 + 0.001 * 4.0) / (1.0 - 0.999 * 0.999);
    CHECK(theta(0) == doctest::Approx(1.0 - 1e-4 * 2.0 / (2.0 + 1e-8) - 1e-4 * mhat / (std::sqrt(vhat) + 1e-8)).epsilon(1e-14));
}

TEST_CASE("lgd config validation")
{
    LgdConfig c;
    CHECK_NOTHROW(c.validate());
    c.learning_rate = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = LgdConfig{};
    c.adam_beta2 = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = LgdConfig{};
    c.max_iterations = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("uniform layout is evenly spread")
{
    const SystemConfig cfg;
    const PaPositionMatrix x = offsets_to_positions(uniform_offsets(cfg), cfg);
    for (int n = 0; n < 2; ++n)
        for (int m = 0; m < 3; ++m)
            CHECK(x.x(n, m) == doctest::Approx((m + 0.5) * 10.0));
}

TEST_CASE("lgd gradient chains positions to offsets")
{
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial)
    {
        SystemConfig cfg;
        cfg.bd_reflection_ir = trial % 2 ? 0.8 : 2e-4;
        const Geometry geom = random_geometry(cfg, rng);
        const OffsetMatrix dx = positions_to_offsets(random_layout(cfg, rng), cfg);
        const TransmitBeam w = random_beam(cfg, rng, 0.9);
        CHECK(passr::test::gradient_check(geom, cfg, dx, w, 10.0) < 1e-4);
    }
}

TEST_CASE("solve_lgd returns a feasible point and is deterministic")
{
    SystemConfig cfg;
    LgdConfig lgd;
    lgd.max_iterations = 400;
    Rng rng(17);
    const Geometry geom = random_geometry(cfg, rng);
    const SolveReport a = solve_lgd(geom, cfg, lgd, 99);
    const SolveReport b = solve_lgd(geom, cfg, lgd, 99);
    CHECK(a.status == SolveStatus::ok);
    CHECK(a.residuals.feasible(1e-6));
    CHECK(a.trace == b.trace);
    CHECK(a.positions.x == b.positions.x);
    CHECK(a.iterations == static_cast<int>(a.trace.size()));
    CHECK(a.iterations <= 400);
    CHECK(a.trace_metric == "penalized_objective");
    CHECK(a.rates.sum_rate > 0.0);
    // The trace records -rate + penalty, so the end should be no worse than the start.
    CHECK(a.trace.back() <= a.trace.front());
}

TEST_CASE("lgd on a single user reaches capacity")
{
    SystemConfig cfg = small_config(1, 1, 1);
    cfg.bd_reflection_pr = 0.0;
    const Geometry geom = make_geometry(cfg, {Vec3(12.0, 1.0, 0.0)}, Vec3(20.0, 3.0, 0.0));
    LgdConfig lgd;
    const SolveReport rep = solve_lgd(geom, cfg, lgd, 5);
    const ChannelSet chs = build_channels(rep.positions, geom, cfg);
    const double h2 = std::norm(chs.h_eq_pr(0, 0));
    CHECK(rep.residuals.feasible(1e-6));
    CHECK(std::abs(rep.rates.sum_rate - std::log2(1.0 + cfg.max_power_w * h2 / cfg.noise_power_w_pr)) < 1e-3);
}
