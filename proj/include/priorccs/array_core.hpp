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

#ifndef PRIORCCS_ARRAY_CORE_HPP
#define PRIORCCS_ARRAY_CORE_HPP

#include "grid.hpp"

#include <bit>
#include <numbers>
#include <utility>

// Grid algebra on N x N complex matrices.
//
// The DFT matrix is U(j,k) = w^(jk) / sqrt(N) with w = exp(-2 pi i / N).
//   dft2(A)  = U  A U    (forward, unitary)
//   idft2(A) = U* A U*   (inverse, unitary)
// With these conventions the beamspace of a channel H is X = idft2(H), and
// idft2(A (*) B) = N * idft2(A) .* idft2(B) for 2D circular convolution (*).

namespace priorccs
{
namespace detail
{
// exp(-2 pi i k / n) for k in [0, n), cached per thread for the last size used.
inline const std::vector<cplx> &roots_of_unity(std::size_t n)
{
    thread_local std::vector<cplx> table;
    thread_local std::size_t cached = 0;
    if (cached != n)
    {
        table.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            table[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
        cached = n;
    }
    return table;
}

// In-place 1D DFT with sign -1 (forward) or +1 (inverse), unscaled.
inline void dft1(std::span<cplx> x, int sign, std::vector<cplx> &scratch)
{
    const std::size_t n = x.size();
    if (n <= 1)
        return;
    const auto &w = roots_of_unity(n);
    auto root = [&](std::size_t k) { return sign < 0 ? w[k % n] : std::conj(w[k % n]); };
    if (std::has_single_bit(n))
    {
        // iterative radix-2 Cooley-Tukey
        for (std::size_t i = 1, j = 0; i < n; ++i)
        {
            std::size_t bit = n >> 1;
            for (; j & bit; bit >>= 1)
                j ^= bit;
            j ^= bit;
            if (i < j)
                std::swap(x[i], x[j]);
        }
        for (std::size_t len = 2; len <= n; len <<= 1)
        {
            const std::size_t stride = n / len;
            for (std::size_t i = 0; i < n; i += len)
            {
                for (std::size_t k = 0; k < len / 2; ++k)
                {
                    const cplx u = x[i + k];
                    const cplx v = x[i + k + len / 2] * root(k * stride);
                    x[i + k] = u + v;
                    x[i + k + len / 2] = u - v;
                }
            }
        }
        return;
    }
    // direct O(n^2) transform for other sizes
    scratch.assign(n, cplx{});
    for (std::size_t k = 0; k < n; ++k)
    {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += x[j] * root(j * k);
        scratch[k] = acc;
    }
    std::copy(scratch.begin(), scratch.end(), x.begin());
}

inline ComplexGrid transform2(const ComplexGrid &a, int sign)
{
    const std::size_t n = a.side();
    ComplexGrid out = a;
    std::vector<cplx> line(n), scratch;
    for (std::size_t r = 0; r < n; ++r)
        dft1(out.flat().subspan(r * n, n), sign, scratch);
    for (std::size_t c = 0; c < n; ++c)
    {
        for (std::size_t r = 0; r < n; ++r)
            line[r] = out(r, c);
        dft1(line, sign, scratch);
        for (std::size_t r = 0; r < n; ++r)
            out(r, c) = line[r];
    }
    out *= 1.0 / static_cast<double>(n);
    return out;
}
} // namespace detail

/// Unitary forward 2D-DFT, U A U.
inline ComplexGrid dft2(const ComplexGrid &a)
{
    if (a.side() < 2)
        throw DimensionError("dft2: side must be at least 2");
    return detail::transform2(a, -1);
}

/// Unitary inverse 2D-DFT, U* A U*.
inline ComplexGrid idft2(const ComplexGrid &a)
{
    if (a.side() < 2)
        throw DimensionError("idft2: side must be at least 2");
    return detail::transform2(a, +1);
}

/// out(i,j) = a((i - r) mod N, (j - c) mod N).
inline ComplexGrid circ_shift(const ComplexGrid &a, ShiftCoord s)
{
    const std::size_t n = a.side();
    const std::size_t r = s.r % n, c = s.c % n;
    ComplexGrid out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out((i + r) % n, (j + c) % n) = a(i, j);
    return out;
}

/// P_FC(k,l) = conj(P((N - k) mod N, (N - l) mod N)).
inline ComplexGrid flip_conjugate(const ComplexGrid &p)
{
    const std::size_t n = p.side();
    ComplexGrid out(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
            out(k, l) = std::conj(p((n - k) % n, (n - l) % n));
    return out;
}

/// 2D circular convolution, computed in the transform domain.
inline ComplexGrid circ_conv2(const ComplexGrid &a, const ComplexGrid &b)
{
    ComplexGrid::require_same_shape(a, b, "circ_conv2");
    const auto n = static_cast<double>(a.side());
    return dft2(hadamard(idft2(a), idft2(b)) * n);
}

/// Vandermonde steering vector a_N(delta)[n] = exp(j pi n delta).
inline std::vector<cplx> array_response(std::size_t n, double delta)
{
    std::vector<cplx> a(n);
    for (std::size_t i = 0; i < n; ++i)
        a[i] = std::polar(1.0, std::numbers::pi * static_cast<double>(i) * delta);
    return a;
}

} // namespace priorccs

#endif
