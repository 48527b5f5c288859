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


#ifndef PRIORCCS_MASK_DESIGN_HPP
#define PRIORCCS_MASK_DESIGN_HPP

#include "codebook.hpp"
#include "prior.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

// Prior-driven mask design.
//
// Alignment model: the beamspace is one-sparse with a unit coefficient at
// direction k with probability p_k, and the decoder picks the largest entry
// of x .* z + v with v ~ CN(0, sigma^2 I). Per direction,
//   P(win pairwise) = 1 - exp(-s_k / (2 sigma^2)) / 2,   s_k = |z_k|^2,
// and the success probability treats the N^2 - 1 pairwise events as
// independent. The designer maximizes the Jensen lower bound
//   sum_k p_k g(s_k),  g(s) = log(1 - exp(-s / (2 sigma^2)) / 2)
// subject to sum_k s_k = N^2 and s_k >= floor. g is increasing and concave,
// so the KKT conditions p_k g'(s_k) = lambda (unfloored) are sufficient.

namespace priorccs
{
/// Per-direction mask power s_k = |z_k|^2 with sum N^2.
class MaskPower
{
  public:
    static constexpr double budget_tolerance = 1e-6;

    MaskPower(std::vector<double> s, std::size_t n) : s_(std::move(s)), n_(n)
    {
        if (s_.size() != n * n)
            throw DimensionError("MaskPower: expected N^2 entries");
        double total = 0.0;
        for (double v : s_)
        {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument("MaskPower: powers must be finite and nonnegative");
            total += v;
        }
        if (std::abs(total - static_cast<double>(n * n)) > budget_tolerance)
            throw std::invalid_argument("MaskPower: total power " + std::to_string(total) + " != N^2");
    }

    static MaskPower uniform(std::size_t n) { return MaskPower(std::vector<double>(n * n, 1.0), n); }

    std::size_t side() const noexcept { return n_; }
    std::size_t size() const noexcept { return s_.size(); }
    double operator[](std::size_t k) const noexcept { return s_[k]; }
    std::span<const double> values() const noexcept { return s_; }
    double total() const noexcept
    {
        double t = 0.0;
        for (double v : s_)
            t += v;
        return t;
    }

    /// |z| as an N x N real grid (row-major direction order).
    ComplexGrid amplitude_grid() const
    {
        ComplexGrid g(n_);
        for (std::size_t k = 0; k < s_.size(); ++k)
            g[k] = std::sqrt(s_[k]);
        return g;
    }

  private:
    std::vector<double> s_;
    std::size_t n_;
};

/// P(|1 + x|^2 >= |y|^2) for iid x, y ~ CN(0, xi2).
inline double lemma1_prob(double xi2)
{
    if (!(xi2 > 0.0))
        throw std::invalid_argument("lemma1_prob: variance must be positive");
    return 1.0 - 0.5 * std::exp(-1.0 / (2.0 * xi2));
}

namespace detail
{
inline void check_model_inputs(std::span<const double> s, const AoDPrior &p, double sigma2)
{
    if (s.size() != p.size())
        throw DimensionError("mask power and prior sizes differ");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("noise variance must be positive");
}

// log(1 - exp(-s / (2 sigma^2)) / 2)
inline double log_pairwise(double s, double sigma2) { return std::log1p(-0.5 * std::exp(-s / (2.0 * sigma2))); }
} // namespace detail

/// sum_k p_k (1 - exp(-s_k / (2 sigma^2)) / 2)^(N^2 - 1)
inline double success_prob(std::span<const double> s, const AoDPrior &p, double sigma2)
{
    detail::check_model_inputs(s, p, sigma2);
    const double others = static_cast<double>(s.size()) - 1.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k)
        if (p[k] > 0.0)
            acc += p[k] * std::exp(others * detail::log_pairwise(s[k], sigma2));
    return acc;
}
inline double success_prob(const MaskPower &s, const AoDPrior &p, double sigma2)
{
    return success_prob(s.values(), p, sigma2);
}

/// Jensen bound on log(success_prob): (N^2 - 1) sum_k p_k log(1 - exp(-s_k / (2 sigma^2)) / 2).
inline double lower_bound(std::span<const double> s, const AoDPrior &p, double sigma2)
{
    detail::check_model_inputs(s, p, sigma2);
    const double others = static_cast<double>(s.size()) - 1.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k)
        if (p[k] > 0.0)
            acc += p[k] * detail::log_pairwise(s[k], sigma2);
    return others * acc;
}
inline double lower_bound(const MaskPower &s, const AoDPrior &p, double sigma2)
{
    return lower_bound(s.values(), p, sigma2);
}

struct MaskOptimizerOptions
{
    double floor = 0.01;           // minimum per-direction power
    int max_bisections = 400;
};

/// Maximizes the Jensen bound over the power simplex {sum s = N^2, s >= floor}.
///
/// For a multiplier lambda the unfloored optimum solves p_k g'(s) = lambda in
/// closed form: with r = 2 sigma^2 lambda / p_k, u = r / (1 + r) and
/// s = -2 sigma^2 log(2u) (s = 0 once r >= 1). Total power is decreasing in
/// lambda, so log(lambda) is found by bisection.
inline MaskPower optimize_mask_power(const AoDPrior &p, double sigma2, std::size_t n, MaskOptimizerOptions opt = {})
{
    const std::size_t dirs = n * n;
    if (p.size() != dirs)
        throw DimensionError("optimize_mask_power: prior size must be N^2");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("optimize_mask_power: noise variance must be positive");
    if (!(opt.floor >= 0.0) || opt.floor * static_cast<double>(dirs) > static_cast<double>(dirs))
        throw std::invalid_argument("optimize_mask_power: infeasible power floor");

    const double budget = static_cast<double>(dirs);
    std::vector<double> s(dirs, opt.floor);
    if (opt.floor * budget >= budget)
        return MaskPower(std::move(s), n);

    // Works on log(lambda): peaked priors push lambda far below the double range.
    const double log_2s2 = std::log(2.0 * sigma2);
    auto allocate = [&](double log_lambda) {
        double total = 0.0;
        for (std::size_t k = 0; k < dirs; ++k)
        {
            double v = 0.0;
            if (p[k] > 0.0)
            {
                const double log_r = log_2s2 + log_lambda - std::log(p[k]);
                if (log_r < 0.0)
                    v = -2.0 * sigma2 * (std::numbers::ln2 + log_r - std::log1p(std::exp(log_r)));
            }
            s[k] = std::max(opt.floor, v);
            total += s[k];
        }
        return total;
    };

    double p_max = 0.0;
    for (std::size_t k = 0; k < dirs; ++k)
        p_max = std::max(p_max, p[k]);
    // At log_hi every direction sits at s = 0 before flooring.
    double log_hi = std::log(p_max) - log_2s2;
    double log_lo = log_hi - 1.0;
    while (allocate(log_lo) <= budget)
        log_lo -= 2.0 * (log_hi - log_lo);

    for (int it = 0; it < opt.max_bisections; ++it)
    {
        const double mid = 0.5 * (log_lo + log_hi);
        if (mid <= log_lo || mid >= log_hi)
            break;
        if (allocate(mid) > budget)
            log_lo = mid;
        else
            log_hi = mid;
    }
    const double total = allocate(log_lo);

    // Spread the last rounding residue over unfloored directions.
    double free_power = 0.0;
    for (double v : s)
        if (v > opt.floor)
            free_power += v - opt.floor;
    if (free_power > 0.0)
    {
        const double scale = 1.0 + (budget - total) / free_power;
        for (double &v : s)
            if (v > opt.floor)
                v = opt.floor + (v - opt.floor) * scale;
    }
    return MaskPower(std::move(s), n);
}

struct PhaseRetrievalResult
{
    BaseMatrix base;
    double residual = 0.0;           // || |realized mask| - target ||_F of the returned base
    std::vector<double> history;     // residual after each iteration
};

/// Gerchberg-Saxton: finds a unit-modulus base matrix whose realized mask
/// magnitude approximates `target` (nonnegative, ||target||_F = N).
/// Alternates between imposing the target magnitude on the mask and the
/// 1/N modulus on the base matrix; the mask-domain residual never increases.
inline PhaseRetrievalResult gerchberg_saxton(const ComplexGrid &target, int iterations, Rng &rng)
{
    const std::size_t n = target.side();
    if (iterations < 1)
        throw std::invalid_argument("gerchberg_saxton: need at least one iteration");
    const double norm = target.frobenius_norm();
    for (const auto &v : target.flat())
        if (v.imag() != 0.0 || v.real() < 0.0)
            throw std::invalid_argument("gerchberg_saxton: target must be real and nonnegative");
    if (std::abs(norm - static_cast<double>(n)) > 1e-6 * static_cast<double>(n))
        throw std::invalid_argument("gerchberg_saxton: target Frobenius norm must equal N");

    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    ComplexGrid z(n);
    for (std::size_t k = 0; k < z.size(); ++k)
        z[k] = std::polar(target[k].real(), -phase(rng)); // uniform on (-pi, pi]

    auto residual_of = [&](const ComplexGrid &zr) {
        double acc = 0.0;
        for (std::size_t k = 0; k < zr.size(); ++k)
        {
            const double d = std::abs(zr[k]) - target[k].real();
            acc += d * d;
        }
        return std::sqrt(acc);
    };

    PhaseRetrievalResult out{BaseMatrix::constant(n), 0.0, {}};
    out.history.reserve(static_cast<std::size_t>(iterations));
    double best = std::numeric_limits<double>::infinity();
    for (int it = 0; it < iterations; ++it)
    {
        // Base matrix whose realized mask is z: P = dft2(conj(z)) / N, then project onto |P| = 1/N.
        const BaseMatrix base = BaseMatrix::from_phases(dft2(conj(z)));
        const ComplexGrid zr = realized_mask(base);
        const double res = residual_of(zr);
        out.history.push_back(res);
        if (res <= best)
        {
            best = res;
            out.base = base;
            out.residual = res;
        }
        for (std::size_t k = 0; k < z.size(); ++k)
            z[k] = std::polar(target[k].real(), safe_arg(zr[k]));
    }
    return out;
}

} // namespace priorccs

#endif
