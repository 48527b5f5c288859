// SPDX-License-Identifier: Apache-2.0
//
// priorccs: prior-aware 2D convolutional compressive sensing for mmWave beam alignment
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

#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <map>

using namespace priorccs;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
Scenario los_only()
{
    Scenario s;
    s.n = 8;
    s.blockage_prob = 0.0;
    s.wall_reflection = false;
    s.ground_reflection = false;
    return s;
}
} // namespace

TEST_CASE("LOS only, no blockage: exactly one path", "[channel-sim]")
{
    const Scenario s = los_only();
    auto rng = make_stream(3, StreamTag::channel, 0);
    for (int i = 0; i < 200; ++i)
    {
        const auto p = sample_paths(s, rng);
        REQUIRE(p.size() == 1);
        CHECK(p[0].bounces == 0);
    }
}

TEST_CASE("path count, ordering and angle ranges", "[channel-sim]")
{
    Scenario s;
    s.n = 8;
    s.max_paths = 2;
    auto rng = make_stream(4, StreamTag::channel, 0);
    for (int i = 0; i < 2000; ++i)
    {
        const auto p = sample_paths(s, rng);
        REQUIRE(!p.empty());
        REQUIRE(p.size() <= 2);
        for (std::size_t l = 0; l < p.size(); ++l)
        {
            CHECK(p[l].gain >= 0.0);
            CHECK(p[l].phase >= 0.0);
            CHECK(p[l].phase < 2.0 * std::numbers::pi);
            CHECK(p[l].elevation > 0.0);
            CHECK(p[l].elevation < std::numbers::pi);
            CHECK(p[l].azimuth > 0.0);
            CHECK(p[l].azimuth < std::numbers::pi);
            if (l > 0)
                CHECK(p[l - 1].gain >= p[l].gain);
        }
    }
}

TEST_CASE("receiver straight ahead of the array: hand geometry", "[channel-sim]")
{
    // BS at height 6, receiver 5.75 m ahead at height 1.5, no lateral offset.
    const auto p = detail::path_towards({0.0, 0.0, 6.0}, {0.0, 5.75, 1.5}, 0, 6.0);
    const double r = std::sqrt(5.75 * 5.75 + 4.5 * 4.5);
    CHECK_THAT(p.length, WithinRel(r, 1e-14));
    CHECK_THAT(p.elevation, WithinAbs(std::numbers::pi / 2.0 + std::atan(4.5 / 5.75), 1e-14));
    CHECK_THAT(p.azimuth, WithinAbs(std::numbers::pi / 2.0, 1e-14));
    CHECK_THAT(p.gain, WithinRel(1.0 / r, 1e-14));
    const auto refl = detail::path_towards({0.0, 0.0, 6.0}, {0.0, 5.75, 1.5}, 1, 6.0);
    CHECK_THAT(refl.gain, WithinRel(std::pow(10.0, -0.3) / r, 1e-14));
}

TEST_CASE("LOS directions lie on one strip per lane", "[channel-sim]")
{
    Scenario s = los_only();
    s.lane_jitter = 0.0;
    auto rng = make_stream(8, StreamTag::channel, 0);
    const double dz = s.bs_height - s.rx_height;
    const double lane_y[2] = {s.road_offset + 0.5 * s.lane_width, s.road_offset + 1.5 * s.lane_width};
    int hits[2] = {0, 0};
    const int draws = 10000;
    for (int i = 0; i < draws; ++i)
    {
        const auto p = sample_paths(s, rng).front();
        // u = cos(theta) = -dz / r, w = dy / r; a lane fixes u / w = -dz / y
        const double u = std::cos(p.elevation);
        const double v = std::sin(p.elevation) * std::cos(p.azimuth);
        const double w = std::sqrt(std::max(0.0, 1.0 - u * u - v * v));
        const double ratio = u / w;
        int lane = -1;
        for (int l = 0; l < 2; ++l)
            if (std::abs(ratio + dz / lane_y[l]) < 1e-9)
                lane = l;
        REQUIRE(lane >= 0);
        ++hits[lane];
    }
    CHECK(hits[0] > draws / 3);
    CHECK(hits[1] > draws / 3);
}

TEST_CASE("assemble_channel examples", "[channel-sim]")
{
    PathParams broadside{1.0, 0.0, std::numbers::pi / 2.0, std::numbers::pi / 2.0, 1.0, 0};
    const auto h = assemble_channel(std::span(&broadside, 1), 8);
    CHECK(max_abs_diff(h, ComplexGrid(8, 1.0)) < 1e-14);
    CHECK(max_abs_diff(idft2(h), ComplexGrid::delta(8, 0, 0, 8.0)) < 1e-12);
    CHECK_THROWS_AS(assemble_channel(std::span<const PathParams>{}, 8), std::invalid_argument);
}

TEST_CASE("two-path channel against the entrywise formula", "[channel-sim]")
{
    const std::vector<PathParams> paths{{0.8, 1.1, 1.2, 0.7, 1.0, 0}, {0.3, 4.0, 2.1, 2.5, 1.0, 1}};
    const auto h = assemble_channel(paths, 8);
    double worst = 0.0;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
        {
            cplx ref{};
            for (const auto &p : paths)
            {
                const double arg = std::numbers::pi * (static_cast<double>(i) * std::cos(p.elevation) +
                                                       static_cast<double>(j) * std::sin(p.elevation) *
                                                           std::cos(p.azimuth));
                ref += p.gain * std::exp(cplx(0.0, p.phase + arg));
            }
            worst = std::max(worst, std::abs(h(i, j) - ref));
        }
    CHECK(worst <= 1e-12);
}

TEST_CASE("single path: rank one with constant modulus", "[channel-sim]")
{
    PathParams p{0.7, 2.0, 1.3, 0.4, 1.0, 0};
    const auto h = assemble_channel(std::span(&p, 1), 6);
    for (const auto &v : h.flat())
        CHECK_THAT(std::abs(v), WithinAbs(0.7, 1e-12));
    // rank one: every 2x2 minor vanishes
    for (std::size_t i = 1; i < 6; ++i)
        for (std::size_t j = 1; j < 6; ++j)
            CHECK(std::abs(h(0, 0) * h(i, j) - h(0, j) * h(i, 0)) < 1e-12);
}

TEST_CASE("calibrate_noise examples", "[channel-sim]")
{
    std::vector<ComplexGrid> flat(3, ComplexGrid(4, 1.0));
    CHECK_THAT(calibrate_noise(flat, 10.0), WithinRel(0.1, 1e-14));
    CHECK_THAT(calibrate_noise(flat, 0.0), WithinRel(1.0, 1e-14));
    std::mt19937_64 rng(2);
    std::vector<ComplexGrid> mixed;
    double mean = 0.0;
    for (int i = 0; i < 5; ++i)
    {
        mixed.push_back(testsupport::random_grid(4, rng, 0.5 + i));
        double e = 0.0;
        for (const auto &v : mixed.back().flat())
            e += std::norm(v);
        mean += e / 16.0 / 5.0;
    }
    CHECK_THAT(calibrate_noise(mixed, 3.0), WithinRel(mean / std::pow(10.0, 0.3), 1e-12));
    CHECK_THROWS_AS(calibrate_noise(std::vector<ComplexGrid>{}, 10.0), std::invalid_argument);
}

TEST_CASE("wideband_aggregate examples", "[channel-sim]")
{
    std::mt19937_64 rng(4);
    const auto a = testsupport::random_grid(4, rng);
    const auto b = testsupport::random_grid(4, rng);
    CHECK(max_abs_diff(wideband_aggregate(std::vector{a}), a) == 0.0);
    CHECK(max_abs_diff(wideband_aggregate(std::vector{ComplexGrid(4), ComplexGrid(4)}), ComplexGrid(4)) == 0.0);
    ComplexGrid manual(4);
    for (std::size_t k = 0; k < 16; ++k)
        manual[k] = a[k] + b[k];
    CHECK(max_abs_diff(wideband_aggregate(std::vector{a, b}), manual) == 0.0);
    CHECK_THROWS_AS(wideband_aggregate(std::vector{a, ComplexGrid(5)}), DimensionError);
}

TEST_CASE("taps of a single path sum back to the narrowband channel at zero delay", "[channel-sim]")
{
    PathParams p{0.9, 0.3, 1.4, 1.2, 10.0, 0};
    const auto taps = assemble_taps(std::span(&p, 1), 4, 3, 0.6);
    CHECK(max_abs_diff(taps[0], assemble_channel(std::span(&p, 1), 4)) < 1e-14);
    CHECK(taps[1].frobenius_norm() < 1e-12);
}

TEST_CASE("empirical_prior examples", "[channel-sim]")
{
    PathParams p{1.0, 0.0, std::numbers::pi / 2.0, std::numbers::pi / 2.0, 1.0, 0};
    std::vector<ChannelRealization> same(4, make_realization(assemble_channel(std::span(&p, 1), 4), 0.1));
    const auto prior = empirical_prior(same);
    CHECK(prior[0] == 1.0);
    std::vector<ChannelRealization> two{make_realization(dft2(ComplexGrid::delta(4, 0, 1)), 0.0),
                                        make_realization(dft2(ComplexGrid::delta(4, 2, 0)), 0.0)};
    REQUIRE(two[0].true_best.value == 1);
    REQUIRE(two[1].true_best.value == 8);
    const auto half = empirical_prior(two);
    CHECK(half[two[0].true_best.value] == 0.5);
    CHECK(half[two[1].true_best.value] == 0.5);
    CHECK_THROWS_AS(empirical_prior(std::vector<ChannelRealization>{}), std::invalid_argument);
}

TEST_CASE("generated ensemble: reconstruction, normalization and determinism", "[channel-sim]")
{
    Scenario s;
    s.n = 16;
    const ChannelGenerator gen(s);
    const auto ens = gen.ensemble(400, 10.0);
    double power = 0.0;
    for (const auto &r : ens)
    {
        CHECK(max_abs_diff(dft2(r.x), r.h) <= 1e-9);
        CHECK(r.true_best == argmax_magnitude(r.x.flat()));
        power += r.h.frobenius_norm_sq() / 256.0;
    }
    // E[sum alpha^2] = 1, so the mean per-antenna power is close to one
    CHECK_THAT(power / 400.0, WithinAbs(1.0, 0.15));
    CHECK_THAT(ens.front().sigma2, WithinRel(power / 400.0 / 10.0, 1e-12));

    const auto again = ChannelGenerator(s).ensemble(400, 10.0, 0, 1);
    for (std::size_t i = 0; i < ens.size(); ++i)
        REQUIRE(max_abs_diff(ens[i].h, again[i].h) == 0.0);
}

TEST_CASE("generated prior is concentrated on a few directions", "[channel-sim]")
{
    Scenario s;
    const auto ens = ChannelGenerator(s).ensemble(3000, 10.0);
    const auto prior = empirical_prior(ens);
    std::vector<double> p(prior.values().begin(), prior.values().end());
    std::sort(p.rbegin(), p.rend());
    double top = 0.0;
    for (std::size_t k = 0; k < 64; ++k)
        top += p[k];
    CHECK(top >= 0.8);
    CHECK(prior.entropy() < 0.6 * std::log(1024.0));
}

TEST_CASE("LOS-only beamspace is approximately sparse", "[channel-sim]")
{
    Scenario s = los_only();
    s.n = 16;
    const auto ens = ChannelGenerator(s).ensemble(2000, 10.0);
    double frac = 0.0;
    for (const auto &r : ens)
        frac += std::norm(r.x[r.true_best.value]) / r.x.frobenius_norm_sq();
    CHECK(frac / 2000.0 >= 0.5);
}

TEST_CASE("scenario validation", "[channel-sim]")
{
    Scenario s;
    s.blockage_prob = 1.5;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = Scenario{};
    s.lane_width = -1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = Scenario{};
    s.n = 1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
