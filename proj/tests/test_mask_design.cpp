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

using namespace priorccs;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
double g_log(double s, double sigma2) { return std::log1p(-0.5 * std::exp(-s / (2.0 * sigma2))); }

// dg/ds for g(s) = log(1 - exp(-s / 2 sigma^2) / 2)
double g_prime(double s, double sigma2)
{
    const double e = std::exp(-s / (2.0 * sigma2));
    return e / (4.0 * sigma2) / (1.0 - 0.5 * e);
}

double bound_objective(std::span<const double> s, std::span<const double> p, double sigma2)
{
    double acc = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k)
        if (p[k] > 0.0)
            acc += p[k] * g_log(s[k], sigma2);
    return acc;
}

AoDPrior random_prior(std::size_t dirs, std::mt19937_64 &rng, double sparsity = 0.0)
{
    std::exponential_distribution<double> e(1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> w(dirs);
    for (auto &v : w)
        v = u(rng) < sparsity ? 0.0 : e(rng);
    w[rng() % dirs] += 1.0;
    return AoDPrior::from_weights(w);
}
} // namespace

TEST_CASE("lemma1_prob closed-form examples", "[mask-design]")
{
    CHECK_THAT(lemma1_prob(1e12), WithinAbs(0.5, 1e-12));
    CHECK_THAT(lemma1_prob(1.0 / (2.0 * std::numbers::ln2)), WithinAbs(0.75, 1e-15));
    CHECK(lemma1_prob(0.1) < 1.0);
    CHECK(lemma1_prob(0.1) > 0.5);
    CHECK_THROWS_AS(lemma1_prob(0.0), std::invalid_argument);
    CHECK_THROWS_AS(lemma1_prob(-1.0), std::invalid_argument);
}

TEST_CASE("lemma1_prob against Monte Carlo at xi^2 = 0.5", "[mask-design]")
{
    const double xi2 = 0.5;
    auto rng = make_stream(21, StreamTag::noise, 0);
    const int draws = 1000000;
    int wins = 0;
    for (int i = 0; i < draws; ++i)
    {
        const cplx x = complex_gaussian(rng, xi2);
        const cplx y = complex_gaussian(rng, xi2);
        wins += std::norm(1.0 + x) > std::norm(y);
    }
    CHECK_THAT(static_cast<double>(wins) / draws, WithinAbs(lemma1_prob(xi2), 3e-3));
}

TEST_CASE("success_prob examples", "[mask-design]")
{
    const std::vector<double> ones(4, 1.0);
    const auto uni = AoDPrior::uniform(4);
    CHECK_THAT(success_prob(ones, uni, 0.5), WithinRel(std::pow(1.0 - 0.5 * std::exp(-1.0), 3), 1e-14));

    std::vector<double> all_on_one(16, 0.0);
    all_on_one[6] = 16.0;
    const auto hot = AoDPrior::one_hot(16, FlatIndex{6});
    CHECK_THAT(success_prob(all_on_one, hot, 2.0), WithinRel(std::pow(1.0 - 0.5 * std::exp(-16.0 / 4.0), 15), 1e-14));

    CHECK_THAT(success_prob(ones, uni, 1e-4), WithinAbs(1.0, 1e-12));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i)
    {
        const auto p = random_prior(16, rng);
        const auto v = success_prob(MaskPower::uniform(4), p, 0.3 + 0.1 * i);
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
    CHECK_THROWS_AS(success_prob(ones, uni, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(success_prob(ones, AoDPrior::uniform(9), 0.5), DimensionError);
}

TEST_CASE("success_prob against a full-system Monte Carlo (N=2)", "[mask-design]")
{
    // one-sparse x at a uniformly drawn direction, unimodular mask, full
    // sampling, CN noise, argmax decode of the back-projected measurements
    const std::size_t n = 2;
    const double sigma2 = 0.5;
    const auto base = chirp_base(n);
    const auto omega = SamplingSet::full(n);
    auto rng = make_stream(22, StreamTag::noise, 0);
    std::mt19937_64 pick(22);
    const int trials = 100000;
    int hits = 0;
    for (int t = 0; t < trials; ++t)
    {
        const std::size_t k = pick() % 4;
        const auto meas = acquire(dft2(ComplexGrid::delta(n, k / n, k % n)), base, omega, sigma2, rng);
        hits += argmax_magnitude(backproject(meas.y, omega).flat()).value == k;
    }
    const double mc = static_cast<double>(hits) / trials;
    INFO("Monte Carlo " << mc << " vs closed form " << success_prob(MaskPower::uniform(n), AoDPrior::uniform(4), sigma2));
    CHECK_THAT(mc, WithinAbs(success_prob(MaskPower::uniform(n), AoDPrior::uniform(4), sigma2), 1e-2));
}

TEST_CASE("lower_bound properties", "[mask-design]")
{
    std::mt19937_64 rng(4);
    std::exponential_distribution<double> e(1.0);
    for (int i = 0; i < 100; ++i)
    {
        const auto p = random_prior(16, rng);
        std::vector<double> s(16);
        double tot = 0.0;
        for (auto &v : s)
            tot += (v = e(rng) + 0.01);
        for (auto &v : s)
            v *= 16.0 / tot;
        const double sigma2 = 0.1 + 0.05 * i;
        CHECK(lower_bound(s, p, sigma2) <= std::log(success_prob(s, p, sigma2)) + 1e-12);
    }
    const std::vector<double> flat(16, 1.0);
    const auto p = random_prior(16, rng);
    CHECK_THAT(lower_bound(flat, p, 0.4), WithinRel(std::log(success_prob(flat, p, 0.4)), 1e-12));
    CHECK_THAT(lower_bound(flat, AoDPrior::uniform(16), 0.4), WithinRel(15.0 * g_log(1.0, 0.4), 1e-14));
}

TEST_CASE("optimizer: uniform prior gives unit power", "[mask-design]")
{
    for (std::size_t n : {2u, 4u, 8u, 32u})
    {
        const auto s = optimize_mask_power(AoDPrior::uniform(n * n), 0.3, n);
        for (double v : s.values())
            REQUIRE_THAT(v, WithinAbs(1.0, 1e-6));
    }
}

TEST_CASE("optimizer: one-hot prior without floor", "[mask-design]")
{
    for (std::size_t n : {2u, 8u, 32u})
    {
        const FlatIndex hot{n + 1};
        const auto s = optimize_mask_power(AoDPrior::one_hot(n * n, hot), 0.5, n, {.floor = 0.0});
        CHECK_THAT(s[hot.value], WithinRel(static_cast<double>(n * n), 1e-9));
    }
}

TEST_CASE("optimizer matches a grid search at N=2", "[mask-design]")
{
    struct Instance
    {
        std::vector<double> p;
        double sigma2;
    };
    const std::vector<Instance> cases{{{0.75, 0.25, 0.0, 0.0}, 0.5}, {{0.4, 0.3, 0.2, 0.1}, 0.25}, {{0.6, 0.3, 0.1, 0.0}, 1.0}};
    const double floor = 0.01, step = 1e-3, budget = 4.0;
    for (const auto &inst : cases)
    {
        const auto prior = AoDPrior::from_weights(inst.p);
        const auto s = optimize_mask_power(prior, inst.sigma2, 2, {.floor = floor});
        const double got = bound_objective(s.values(), inst.p, inst.sigma2);

        // exact maximum over the 1e-3 power lattice
        const auto units = static_cast<std::size_t>(std::lround((budget - 4 * floor) / step));
        const double best = testsupport::lattice_max_separable(4, units, floor, step, [&](std::size_t k, double v) {
            return inst.p[k] > 0.0 ? inst.p[k] * g_log(v, inst.sigma2) : 0.0;
        });
        INFO("optimizer " << got << " grid " << best);
        CHECK(got >= best - 1e-12);
        CHECK(std::abs(got - best) <= 1e-4);
    }
}

TEST_CASE("optimizer satisfies KKT and the budget", "[mask-design]")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 40; ++i)
    {
        const std::size_t n = i % 2 ? 32 : 4;
        const auto p = random_prior(n * n, rng, i % 3 == 0 ? 0.9 : 0.0);
        const double sigma2 = std::pow(10.0, -2.0 + 0.1 * i);
        const double floor = 0.01;
        const auto s = optimize_mask_power(p, sigma2, n, {.floor = floor});
        CHECK_THAT(s.total(), WithinAbs(static_cast<double>(n * n), 1e-6));
        double lambda = -1.0;
        for (std::size_t k = 0; k < s.size(); ++k)
            if (s[k] > floor * (1.0 + 1e-9))
            {
                lambda = p[k] * g_prime(s[k], sigma2);
                break;
            }
        REQUIRE(lambda > 0.0);
        for (std::size_t k = 0; k < s.size(); ++k)
        {
            REQUIRE(s[k] >= floor * (1.0 - 1e-12));
            const double kkt = p[k] * g_prime(std::max(s[k], floor), sigma2);
            if (s[k] > floor * (1.0 + 1e-6))
                REQUIRE_THAT(kkt, WithinRel(lambda, 1e-5));
            else
                REQUIRE(kkt <= lambda * (1.0 + 1e-5));
        }
    }
}

TEST_CASE("optimizer never loses to the uniform mask on the exact objective", "[mask-design]")
{
    std::mt19937_64 rng(6);
    for (int i = 0; i < 100; ++i)
    {
        const std::size_t n = 4;
        const auto p = random_prior(n * n, rng, 0.5);
        const double sigma2 = 0.05 + 0.02 * i;
        const auto s = optimize_mask_power(p, sigma2, n);
        REQUIRE(success_prob(s, p, sigma2) >= success_prob(MaskPower::uniform(n), p, sigma2) - 1e-9);
    }
}

TEST_CASE("optimizer argument checks", "[mask-design]")
{
    CHECK_THROWS_AS(optimize_mask_power(AoDPrior::uniform(16), 0.5, 4, {.floor = 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(optimize_mask_power(AoDPrior::uniform(16), 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(optimize_mask_power(AoDPrior::uniform(9), 0.5, 4), DimensionError);
}

TEST_CASE("Gerchberg-Saxton: unimodular output, monotone residual", "[mask-design]")
{
    std::mt19937_64 rng(7);
    auto grng = make_stream(7, StreamTag::phase_init, 0);
    const auto prior = random_prior(64, rng, 0.7);
    const auto target = optimize_mask_power(prior, 0.1, 8).amplitude_grid();
    const auto res = gerchberg_saxton(target, 100, grng);
    for (const auto &v : res.base.grid().flat())
        REQUIRE(std::abs(std::abs(v) - 0.125) <= 1e-15);
    for (std::size_t i = 1; i < res.history.size(); ++i)
        REQUIRE(res.history[i] <= res.history[i - 1] * (1.0 + 1e-12) + 1e-14);
    CHECK(res.residual == *std::min_element(res.history.begin(), res.history.end()));
    CHECK(res.residual <= res.history.front());
    ComplexGrid bad = target;
    bad[0] = -1.0;
    CHECK_THROWS_AS(gerchberg_saxton(bad, 10, grng), std::invalid_argument);
    CHECK_THROWS_AS(gerchberg_saxton(target, 0, grng), std::invalid_argument);
}

TEST_CASE("Gerchberg-Saxton: K=100 no worse than K=1 from the same start", "[mask-design]")
{
    const auto target = optimize_mask_power(AoDPrior::one_hot(64, FlatIndex{9}), 0.2, 8).amplitude_grid();
    auto a = make_stream(8, StreamTag::phase_init, 0);
    auto b = make_stream(8, StreamTag::phase_init, 0);
    CHECK(gerchberg_saxton(target, 100, b).residual <= gerchberg_saxton(target, 1, a).residual);
}

TEST_CASE("Gerchberg-Saxton: constant target is reachable", "[mask-design]")
{
    // the quadratic-phase base realizes a flat mask exactly
    for (std::size_t n : {4u, 8u, 9u})
    {
        const auto z = realized_mask(chirp_base(n));
        for (const auto &v : z.flat())
            REQUIRE_THAT(std::abs(v), WithinAbs(1.0, 1e-12));
    }
    auto grng = make_stream(9, StreamTag::phase_init, 0);
    const auto res = gerchberg_saxton(ComplexGrid(8, 1.0), 200, grng);
    INFO("residual " << res.residual);
    CHECK(res.residual <= 1e-6);
}

TEST_CASE("Gerchberg-Saxton: construct-then-recover", "[mask-design]")
{
    std::mt19937_64 rng(10);
    for (std::size_t n : {4u, 8u})
    {
        const auto z0 = realized_mask(testsupport::random_base(n, rng));
        ComplexGrid target(n);
        for (std::size_t k = 0; k < z0.size(); ++k)
            target[k] = std::abs(z0[k]);
        auto grng = make_stream(10, StreamTag::phase_init, n);
        const auto res = gerchberg_saxton(target, 200, grng);
        INFO("N=" << n << " residual " << res.residual);
        CHECK(res.residual <= 1e-6);
    }
}
