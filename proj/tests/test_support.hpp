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

#ifndef PRIORCCS_TEST_SUPPORT_HPP
#define PRIORCCS_TEST_SUPPORT_HPP

#include <priorccs/priorccs.hpp>

#include <cmath>
#include <limits>
#include <vector>
#include <numbers>
#include <random>

// Independent reference implementations used as oracles by the suites.

namespace testsupport
{
using priorccs::ComplexGrid;
using priorccs::cplx;

inline ComplexGrid random_grid(std::size_t n, std::mt19937_64 &rng, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, scale);
    ComplexGrid a(n);
    for (std::size_t k = 0; k < a.size(); ++k)
        a[k] = {g(rng), g(rng)};
    return a;
}

/// Base matrix with uniform random phases.
inline priorccs::BaseMatrix random_base(std::size_t n, std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> ph(-std::numbers::pi, std::numbers::pi);
    ComplexGrid p(n);
    for (std::size_t k = 0; k < p.size(); ++k)
        p[k] = std::polar(1.0 / static_cast<double>(n), ph(rng));
    return priorccs::BaseMatrix(std::move(p));
}

/// Direct O(N^4) unitary 2D transform with kernel exp(sign 2 pi i (jk + lm) / N) / N.
inline ComplexGrid direct_dft2(const ComplexGrid &a, int sign)
{
    const std::size_t n = a.side();
    const double dn = static_cast<double>(n);
    ComplexGrid out(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
        {
            cplx acc{};
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c)
                {
                    const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(j * r + l * c) / dn;
                    acc += a(r, c) * std::polar(1.0, ang);
                }
            out(j, l) = acc / dn;
        }
    return out;
}

/// Direct O(N^4) circular convolution sum.
inline ComplexGrid direct_conv(const ComplexGrid &a, const ComplexGrid &b)
{
    const std::size_t n = a.side();
    ComplexGrid out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
        {
            cplx acc{};
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c)
                    acc += a(r, c) * b((i + n - r) % n, (j + n - c) % n);
            out(i, j) = acc;
        }
    return out;
}

/// Exact maximum of sum_k f(k, s_k) over the lattice s_k = floor + u_k * step,
/// sum_k u_k = units. The objective is separable, so a knapsack recursion over
/// directions visits every lattice point implicitly.
template <class F>
double lattice_max_separable(std::size_t dirs, std::size_t units, double floor, double step, F &&f)
{
    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> best(units + 1, ninf), next(units + 1);
    for (std::size_t u = 0; u <= units; ++u)
        best[u] = f(0, floor + static_cast<double>(u) * step);
    for (std::size_t k = 1; k < dirs; ++k)
    {
        std::vector<double> fk(units + 1);
        for (std::size_t u = 0; u <= units; ++u)
            fk[u] = f(k, floor + static_cast<double>(u) * step);
        for (std::size_t total = 0; total <= units; ++total)
        {
            double v = ninf;
            for (std::size_t u = 0; u <= total; ++u)
                v = std::max(v, best[total - u] + fk[u]);
            next[total] = v;
        }
        best.swap(next);
    }
    return best[units];
}

} // namespace testsupport

#endif
