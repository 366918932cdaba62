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
#include <random>

#include "doctest.h"
#include "passr/baselines.hpp"
#include "passr/scapso.hpp"
#include "support.hpp"

using namespace passr;
using passr::test::random_geometry;
using passr::test::small_config;

namespace
{

// Rate of a single feed serving a single PR at full power with no backscatter term.
double single_user_rate(double x, const Geometry& geom, const SystemConfig& cfg)
{
    const PaPositionMatrix p{Eigen::MatrixXd::Constant(1, 1, x)};
    const double h2 = std::norm(build_channels(p, geom, cfg).h_eq_pr(0, 0));
    return std::log2(1.0 + cfg.max_power_w * h2 / cfg.noise_power_w_pr);
}

double dense_grid_best(const Geometry& geom, const SystemConfig& cfg, int points)
{
    double best = -1e300;
    for (int i = 0; i < points; ++i)
        best = std::max(best, single_user_rate(cfg.region_x_m * i / (points - 1), geom, cfg));
    return best;
}

ElementWiseConfig quick_elementwise()
{
    ElementWiseConfig ew;
    ew.max_rounds = 5;
    return ew;
}

} // namespace

TEST_CASE("fixed layout is the evenly spaced midpoint grid")
{
    SystemConfig cfg;
    const PaPositionMatrix x = fixed_pa_layout(cfg);
    REQUIRE(x.x.rows() == 2);
    for (int n = 0; n < 2; ++n)
    {
        CHECK(x.x(n, 0) == 5.0);
        CHECK(x.x(n, 1) == 15.0);
        CHECK(x.x(n, 2) == 25.0);
    }
    Rng rng(80);
    const Geometry geom = random_geometry(cfg, rng);
    const TransmitBeam w{Eigen::MatrixXcd::Constant(2, 2, cplx(0.5, 0.0))};
    const Residuals r = feasibility_check(x, w, build_channels(x, geom, cfg), cfg);
    CHECK(r.spacing >= 0.0);
    CHECK(r.range >= 0.0);
    CHECK(r.power >= 0.0);

    cfg.num_pas_per_waveguide = 301;
    cfg.region_x_m = 30.0;
    cfg.min_spacing_m = 0.0999;
    CHECK_THROWS_AS(fixed_pa_layout(cfg), ConfigError);
}

TEST_CASE("elementwise config validation")
{
    SystemConfig cfg;
    ElementWiseConfig ew;
    CHECK_NOTHROW(ew.validate(cfg));
    ew.grid_resolution = 0.06;
    CHECK_THROWS_AS(ew.validate(cfg), ConfigError);
    ew = ElementWiseConfig{};
    ew.max_rounds = 0;
    CHECK_THROWS_AS(ew.validate(cfg), ConfigError);
}

TEST_CASE("zero forcing nulls the cross terms at full power")
{
    SystemConfig cfg = small_config(3, 3, 2);
    Rng rng(81);
    for (int trial = 0; trial < 20; ++trial)
    {
        const Geometry geom = random_geometry(cfg, rng);
        const ChannelSet chs = build_channels(passr::test::random_layout(cfg, rng), geom, cfg);
        const TransmitBeam w = zero_forcing_beam(chs, cfg);
        CHECK(w.power() == doctest::Approx(cfg.max_power_w).epsilon(1e-12));
        const Eigen::MatrixXcd g = chs.h_eq_pr * w.w;
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j)
                if (k != j)
                    CHECK(std::abs(g(k, j)) <= 1e-9 * std::abs(g(k, k)));
    }
}

TEST_CASE("single antenna element-wise search matches the dense grid")
{
    SystemConfig cfg = small_config(1, 1, 1);
    cfg.bd_reflection_pr = 0.0;
    Rng rng(82);
    for (int trial = 0; trial < 4; ++trial)
    {
        const Geometry geom = random_geometry(cfg, rng);
        const double grid = dense_grid_best(geom, cfg, 10000);
        for (bool zf : {false, true})
        {
            ElementWiseConfig ew;
            ew.zero_forcing_candidates = zf;
            const SolveReport rep = element_wise_search(geom, cfg, ew, ScaConfig{}, 10 + trial);
            CHECK(rep.status == SolveStatus::ok);
            CHECK(rep.rates.sum_rate >= grid - 1e-6);
            CHECK(rep.rates.sum_rate <= single_user_rate(rep.positions.x(0, 0), geom, cfg) + 1e-9);
        }
    }
}

TEST_CASE("element-wise search is feasible and monotone across rounds")
{
    for (int seed = 0; seed < 6; ++seed)
    {
        SystemConfig cfg;
        cfg.num_pas_per_waveguide = 2;
        if (seed % 3 == 2)
            cfg.bd_reflection_ir = 0.02;
        Rng rng(static_cast<std::uint64_t>(900 + seed));
        const Geometry geom = random_geometry(cfg, rng);
        ElementWiseConfig ew = quick_elementwise();
        ew.zero_forcing_candidates = seed % 2 == 0;
        const SolveReport rep = element_wise_search(geom, cfg, ew, ScaConfig{}, static_cast<std::uint64_t>(seed));
        if (seed % 3 != 2)
            CHECK(rep.status == SolveStatus::ok);
        if (rep.status == SolveStatus::ok)
            CHECK(rep.residuals.feasible(kFeasibilityTolerance));
        CHECK(rep.trace.size() == static_cast<std::size_t>(rep.iterations) + 1);
        for (std::size_t i = 1; i < rep.trace.size(); ++i)
            CHECK(rep.trace[i] >= rep.trace[i - 1] - 1e-6);
        CHECK(rep.trace.back() == doctest::Approx(rep.rates.sum_rate).epsilon(1e-12));
    }
}

TEST_CASE("element-wise result does not depend on visiting order when waveguides decouple")
{
    // One PR and no backscatter term: with the matched beam the rate is a sum over waveguides.
    SystemConfig cfg = small_config(3, 1, 1);
    cfg.bd_reflection_pr = 0.0;
    Rng rng(83);
    for (int trial = 0; trial < 3; ++trial)
    {
        const Geometry geom = random_geometry(cfg, rng);
        ElementWiseConfig fwd;
        ElementWiseConfig rev;
        rev.reverse_order = true;
        const SolveReport a = element_wise_search(geom, cfg, fwd, ScaConfig{}, 20 + trial);
        const SolveReport b = element_wise_search(geom, cfg, rev, ScaConfig{}, 20 + trial);
        CHECK(a.rates.sum_rate == doctest::Approx(b.rates.sum_rate).epsilon(1e-6));
        CHECK((a.positions.x - b.positions.x).cwiseAbs().maxCoeff() <= 1e-4);
    }
}

TEST_CASE("element-wise search is deterministic")
{
    SystemConfig cfg;
    cfg.num_pas_per_waveguide = 2;
    Rng rng(84);
    const Geometry geom = random_geometry(cfg, rng);
    const SolveReport a = element_wise_search(geom, cfg, quick_elementwise(), ScaConfig{}, 3);
    const SolveReport b = element_wise_search(geom, cfg, quick_elementwise(), ScaConfig{}, 3);
    CHECK(a.positions.x == b.positions.x);
    CHECK(a.beam.w == b.beam.w);
    CHECK(a.trace == b.trace);
}

TEST_CASE("co-located array channels")
{
    SystemConfig cfg;
    cfg.num_waveguides = 1;
    cfg.num_prs = 1;
    const std::vector<Vec3> array = mimo_array(cfg);
    REQUIRE(array.size() == 1);
    CHECK(array[0] == Vec3(0.0, 0.0, cfg.pa_height_m));

    cfg.num_prs = 3;
    std::vector<Vec3> prs;
    for (double angle : {0.2, 0.7, 1.3})
        prs.emplace_back(12.0 * std::cos(angle), 12.0 * std::sin(angle), 0.0);
    const Geometry geom = make_geometry(cfg, prs, Vec3(3.0, 2.0, 0.0));
    const ChannelSet chs = mimo_channels(geom, cfg);
    const double r = std::hypot(12.0, cfg.pa_height_m);
    for (int k = 0; k < 3; ++k)
        CHECK(std::abs(chs.h_eq_pr(k, 0)) == doctest::Approx(cfg.kappa() / r).epsilon(1e-14));

    cfg = SystemConfig{};
    const std::vector<Vec3> pair = mimo_array(cfg);
    REQUIRE(pair.size() == 2);
    CHECK(pair[1].y() == doctest::Approx(cfg.wavelength() / 2.0).epsilon(1e-15));
}

TEST_CASE("baselines report feasible outputs")
{
    SystemConfig cfg;
    Rng rng(85);
    for (int trial = 0; trial < 5; ++trial)
    {
        const Geometry geom = random_geometry(cfg, rng);
        const SolveReport f = fixed_pa_baseline(geom, cfg, ScaConfig{}, trial);
        CHECK(f.status == SolveStatus::ok);
        CHECK(f.positions.x == fixed_pa_layout(cfg).x);
        const SolveReport m = conventional_mimo_baseline(geom, cfg, ScaConfig{}, trial);
        CHECK(m.status == SolveStatus::ok);
        CHECK(m.positions.x.size() == 0);
        CHECK(m.residuals.power >= 0.0);
    }
}

TEST_CASE("one outer round on a single user reaches the joint grid and matched-beam optimum")
{
    SystemConfig cfg = small_config(1, 1, 1);
    cfg.bd_reflection_pr = 0.0;
    Rng rng(86);
    for (int trial = 0; trial < 4; ++trial)
    {
        const Geometry geom = random_geometry(cfg, rng);
        const double grid = dense_grid_best(geom, cfg, 10000);
        OuterConfig outer;
        outer.max_rounds = 1;
        const SolveReport rep = solve_sca_pso(geom, cfg, ScaConfig{}, PsoConfig{}, outer, 30 + trial);
        CHECK(rep.status == SolveStatus::ok);
        CHECK(std::abs(rep.rates.sum_rate - grid) <= 1e-2);
    }
}

TEST_CASE("sca-pso outer trace never decreases")
{
    for (int seed = 0; seed < 5; ++seed)
    {
        SystemConfig cfg;
        cfg.num_pas_per_waveguide = 2;
        Rng rng(static_cast<std::uint64_t>(950 + seed));
        const Geometry geom = random_geometry(cfg, rng);
        PsoConfig pso;
        pso.max_iterations = 50;
        OuterConfig outer;
        outer.max_rounds = 5;
        const SolveReport rep = solve_sca_pso(geom, cfg, ScaConfig{}, pso, outer, static_cast<std::uint64_t>(seed));
        CHECK(rep.status == SolveStatus::ok);
        CHECK(rep.trace.size() == static_cast<std::size_t>(rep.iterations) + 1);
        for (std::size_t i = 1; i < rep.trace.size(); ++i)
            CHECK(rep.trace[i] >= rep.trace[i - 1] - 1e-6);
        const SolveReport again = solve_sca_pso(geom, cfg, ScaConfig{}, pso, outer, static_cast<std::uint64_t>(seed));
        CHECK(again.trace == rep.trace);
    }
}

TEST_CASE("outer config validation")
{
    OuterConfig o;
    CHECK_NOTHROW(o.validate());
    o.max_rounds = 0;
    CHECK_THROWS_AS(o.validate(), ConfigError);
    o = OuterConfig{};
    o.tol = 0.0;
    CHECK_THROWS_AS(o.validate(), ConfigError);
}
