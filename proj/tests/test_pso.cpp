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
#include <chrono>
#include <cmath>
#include <random>

#include "doctest.h"
#include "passr/pso.hpp"
#include "support.hpp"

using namespace passr;
using passr::test::random_beam;
using passr::test::random_geometry;
using passr::test::small_config;

TEST_CASE("pso config validation")
{
    PsoConfig c;
    CHECK_NOTHROW(c.validate());
    c.num_particles = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = PsoConfig{};
    c.inertia_min = 0.95;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = PsoConfig{};
    c.penalty = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("fitness of a feasible layout is the sum rate")
{
    SystemConfig cfg;
    Rng rng(61);
    const Geometry geom = random_geometry(cfg, rng);
    PaPositionMatrix x{Eigen::MatrixXd(2, 3)};
    x.x << 1.0, 5.0, 9.0, 2.0, 2.1, 20.0;
    const TransmitBeam w = random_beam(cfg, rng, 1.0);
    const ChannelSet chs = build_channels(x, geom, cfg);
    REQUIRE(detection_metric(chs, w, cfg).kl >= cfg.kl_target());
    CHECK(pso_fitness(x, w, geom, cfg, 10.0) == sum_rate(chs, w, cfg).sum_rate);

    x.x(1, 1) = 2.05;
    const ChannelSet chs2 = build_channels(x, geom, cfg);
    REQUIRE(detection_metric(chs2, w, cfg).kl >= cfg.kl_target());
    CHECK(pso_fitness(x, w, geom, cfg, 10.0) == doctest::Approx(sum_rate(chs2, w, cfg).sum_rate - 10.0));
}

TEST_CASE("fitness matches an independent recomposition")
{
    Rng rng(62);
    std::uniform_real_distribution<double> u(0.0, 30.0);
    std::uniform_real_distribution<double> a(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial)
    {
        SystemConfig cfg;
        cfg.bd_reflection_ir = trial % 2 ? 0.8 : 0.01;
        const Geometry geom = random_geometry(cfg, rng);
        PaPositionMatrix x{Eigen::MatrixXd(2, 3)};
        for (Eigen::Index i = 0; i < x.x.size(); ++i)
            x.x(i) = u(rng);
        if (trial % 3 == 0)
            x.x(0, 1) = x.x(0, 0) + 0.05;
        const TransmitBeam w = random_beam(cfg, rng, a(rng));
        const ChannelSet chs = build_channels(x, geom, cfg);
        double rate = 0.0;
        for (int k = 0; k < 2; ++k)
            rate += passr::test::enumerated_rate(chs, w, k, cfg.noise_power_w_pr);
        int bad = 0;
        for (int n = 0; n < 2; ++n)
            for (int m = 0; m < 2; ++m)
                bad += x.x(n, m + 1) - x.x(n, m) < 0.1;
        const double rho = 1.0 + (chs.cascade_ir * w.w).squaredNorm() / cfg.noise_power_w_ir;
        bad += cfg.symbol_ratio * (std::log(rho) + 1.0 / rho - 1.0) < 2.0 * 0.95 * 0.95;
        CHECK(pso_fitness(x, w, geom, cfg, 10.0) == doctest::Approx(rate - 10.0 * bad).epsilon(1e-10));
    }
}

TEST_CASE("random feasible layouts are feasible")
{
    SystemConfig cfg = small_config(3, 1, 5);
    Rng rng(63);
    for (int i = 0; i < 1000; ++i)
    {
        const PaPositionMatrix x = random_feasible_layout(cfg, rng);
        CHECK(x.x.minCoeff() >= 0.0);
        CHECK(x.x.maxCoeff() <= cfg.region_x_m);
        for (int n = 0; n < 3; ++n)
            for (int m = 0; m + 1 < 5; ++m)
                CHECK(x.x(n, m + 1) - x.x(n, m) - cfg.min_spacing_m >= 0.0);
    }
}

TEST_CASE("repair is the projection onto the spacing polytope")
{
    SystemConfig cfg = small_config(1, 1, 3);
    Rng rng(64);
    std::uniform_real_distribution<double> u(-2.0, 32.0);
    std::uniform_real_distribution<double> near(-0.2, 0.2);
    for (int trial = 0; trial < 500; ++trial)
    {
        PaPositionMatrix x{Eigen::MatrixXd(1, 3)};
        for (int m = 0; m < 3; ++m)
            x.x(0, m) = trial % 2 ? u(rng) : 15.0 + near(rng);
        const PaPositionMatrix p = repair_layout(x, cfg);
        CHECK(p.x.minCoeff() >= 0.0);
        CHECK(p.x.maxCoeff() <= cfg.region_x_m);
        for (int m = 0; m + 1 < 3; ++m)
            CHECK(p.x(0, m + 1) - p.x(0, m) - cfg.min_spacing_m >= 0.0);
        // Distance oracle against the sorted input, which the projection is taken from.
        Eigen::RowVectorXd sorted = x.x.row(0);
        std::sort(sorted.data(), sorted.data() + 3);
        const double dist = (p.x.row(0) - sorted).norm();
        for (int s = 0; s < 200; ++s)
        {
            const PaPositionMatrix y = random_feasible_layout(cfg, rng);
            CHECK(dist <= (y.x.row(0) - sorted).norm() + 1e-9);
        }
        CHECK((repair_layout(p, cfg).x - p.x).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("pso step keeps a converged particle still")
{
    SystemConfig cfg;
    Rng rng(65);
    const Eigen::MatrixXd x0 = random_feasible_layout(cfg, rng).x;
    Swarm s;
    s.position = {x0};
    s.velocity = {Eigen::MatrixXd::Zero(2, 3)};
    s.best_position = {x0};
    s.best_fitness = {1.0};
    s.global_best = x0;
    s.global_best_fitness = 1.0;
    int calls = 0;
    const LayoutFitness eval = [&](const PaPositionMatrix&) {
        ++calls;
        return 0.5;
    };
    pso_step(s, 0, PsoConfig{}, cfg, rng, eval);
    CHECK(s.position[0] == x0);
    CHECK(s.velocity[0].isZero());
    CHECK(calls == 1);
    CHECK(s.best_fitness[0] == 1.0);
}

TEST_CASE("constant inertia when the bounds coincide")
{
    SystemConfig cfg;
    Rng rng(66);
    PsoConfig pso;
    pso.inertia_max = pso.inertia_min = 0.7;
    pso.cognitive = pso.social = 0.0;
    Swarm s;
    s.position = {Eigen::MatrixXd::Constant(2, 3, 15.0)};
    s.velocity = {Eigen::MatrixXd::Constant(2, 3, 1.0)};
    s.best_position = s.position;
    s.best_fitness = {0.0};
    s.global_best = s.position[0];
    const LayoutFitness eval = [](const PaPositionMatrix&) { return 0.0; };
    double expected = 1.0;
    for (int t = 0; t < 5; ++t)
    {
        pso_step(s, t * 40, pso, cfg, rng, eval);
        expected *= 0.7;
        CHECK(s.velocity[0](0, 0) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("velocity and position are clamped")
{
    SystemConfig cfg;
    Rng rng(67);
    PsoConfig pso;
    Swarm s;
    s.position = {Eigen::MatrixXd::Constant(2, 3, 29.0)};
    s.velocity = {Eigen::MatrixXd::Constant(2, 3, 100.0)};
    s.best_position = s.position;
    s.best_fitness = {0.0};
    s.global_best = s.position[0];
    const LayoutFitness eval = [](const PaPositionMatrix&) { return 0.0; };
    pso_step(s, 0, pso, cfg, rng, eval);
    CHECK(s.velocity[0].maxCoeff() == doctest::Approx(6.0));
    CHECK(s.position[0].maxCoeff() == 30.0);
}

TEST_CASE("global best never decreases")
{
    for (int seed = 0; seed < 20; ++seed)
    {
        SystemConfig cfg;
        Rng rng(static_cast<std::uint64_t>(700 + seed));
        const Geometry geom = random_geometry(cfg, rng);
        PsoConfig pso;
        pso.max_iterations = 60;
        const PsoResult res = solve_pso(random_beam(cfg, rng, 1.0), geom, cfg, pso, static_cast<std::uint64_t>(seed));
        REQUIRE(res.trace.size() == 61);
        for (std::size_t i = 1; i < res.trace.size(); ++i)
            CHECK(res.trace[i] >= res.trace[i - 1]);
    }
}

TEST_CASE("pso with no generations returns the best initial particle")
{
    SystemConfig cfg;
    Rng rng(68);
    const Geometry geom = random_geometry(cfg, rng);
    const TransmitBeam w = random_beam(cfg, rng, 1.0);
    PsoConfig pso;
    pso.max_iterations = 0;
    const PsoResult res = solve_pso(w, geom, cfg, pso, 5);
    Rng again(5);
    const LayoutFitness eval = [&](const PaPositionMatrix& x) { return pso_fitness(x, w, geom, cfg, pso.penalty); };
    const Swarm s = init_swarm(pso, cfg, again, eval);
    double best = -1e300;
    for (double f : s.best_fitness)
        best = std::max(best, f);
    REQUIRE(res.trace.size() == 1);
    CHECK(res.trace[0] == best);
    CHECK(res.fitness == doctest::Approx(best));
}

TEST_CASE("pso is deterministic per seed and seeds the incumbent")
{
    SystemConfig cfg;
    Rng rng(69);
    const Geometry geom = random_geometry(cfg, rng);
    const TransmitBeam w = random_beam(cfg, rng, 1.0);
    PsoConfig pso;
    pso.max_iterations = 30;
    const PsoResult a = solve_pso(w, geom, cfg, pso, 77);
    const PsoResult b = solve_pso(w, geom, cfg, pso, 77);
    CHECK(a.x.x == b.x.x);
    CHECK(a.trace == b.trace);
    const PsoResult c = solve_pso(w, geom, cfg, pso, 78, &a.x);
    CHECK(c.trace.front() >= a.fitness);
}

TEST_CASE("single antenna pso finds the dense-grid optimum")
{
    SystemConfig cfg = small_config(1, 1, 1);
    cfg.bd_reflection_pr = 0.0;
    Rng rng(70);
    for (int trial = 0; trial < 5; ++trial)
    {
        const Geometry geom = random_geometry(cfg, rng);
        const TransmitBeam w{Eigen::MatrixXcd::Constant(1, 1, cplx(std::sqrt(0.5), std::sqrt(0.5)))};
        const int points = 10000;
        double best_x = 0.0, best_f = -1e300;
        for (int i = 0; i < points; ++i)
        {
            const double xv = cfg.region_x_m * i / (points - 1);
            const double f = pso_fitness(PaPositionMatrix{Eigen::MatrixXd::Constant(1, 1, xv)}, w, geom, cfg, 10.0);
            if (f > best_f)
            {
                best_f = f;
                best_x = xv;
            }
        }
        const PsoResult res = solve_pso(w, geom, cfg, PsoConfig{}, 100 + trial);
        CHECK(std::abs(res.x.x(0, 0) - best_x) <= cfg.region_x_m / (points - 1));
        CHECK(res.fitness >= best_f - 1e-9);
    }
}
