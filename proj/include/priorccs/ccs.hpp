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


#ifndef PRIORCCS_CCS_HPP
#define PRIORCCS_CCS_HPP

#include "codebook.hpp"
#include "mask_design.hpp"
#include "rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

// 2D convolutional compressive sensing.
//
// Measurement m projects the channel onto the base matrix circulantly shifted
// by Omega[m]:  y[m] = <H, shift(P, Omega[m])> + v[m].  Collecting all shifts
// gives G = H (*) P_FC, and idft2(G) = X .* Z with Z = N idft2(P_FC), so the
// measurements are a subsampled 2D-DFT of the masked beamspace:
//   y = P_Omega( U (X .* Z) U ) + v.

namespace priorccs
{
/// M distinct shifts drawn uniformly without replacement from [N] x [N].
inline SamplingSet sample_shift_set(std::size_t n, std::size_t m, Rng &rng)
{
    const std::size_t total = n * n;
    if (m == 0 || m > total)
        throw std::invalid_argument("sample_shift_set: need 1 <= M <= N^2");
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // partial Fisher-Yates
    for (std::size_t i = 0; i < m; ++i)
    {
        std::uniform_int_distribution<std::size_t> pick(i, total - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    std::vector<ShiftCoord> coords(m);
    for (std::size_t i = 0; i < m; ++i)
        coords[i] = {idx[i] / n, idx[i] % n};
    return SamplingSet(std::move(coords), n);
}

/// Noiseless measurements by direct projection onto each shifted base matrix.
inline std::vector<cplx> project_shifts(const ComplexGrid &h, const BaseMatrix &p, const SamplingSet &omega)
{
    ComplexGrid::require_same_shape(h, p.grid(), "project_shifts");
    std::vector<cplx> y(omega.size());
    for (std::size_t m = 0; m < omega.size(); ++m)
        y[m] = inner(h, circ_shift(p.grid(), omega[m]));
    return y;
}

/// Noiseless measurements as samples of H (*) P_FC.
inline std::vector<cplx> convolve_and_sample(const ComplexGrid &h, const BaseMatrix &p, const SamplingSet &omega)
{
    ComplexGrid::require_same_shape(h, p.grid(), "convolve_and_sample");
    const ComplexGrid g = circ_conv2(h, flip_conjugate(p.grid()));
    std::vector<cplx> y(omega.size());
    for (std::size_t m = 0; m < omega.size(); ++m)
        y[m] = g(omega[m].r, omega[m].c);
    return y;
}

/// Acquires y = P_Omega(H (*) P_FC) + v with v ~ CN(0, sigma2).
/// Builds with PRIORCCS_CHECK_DUAL_PATH also evaluate the direct projection
/// route and require agreement to 1e-9.
inline MeasurementVector acquire(const ComplexGrid &h, const BaseMatrix &p, const SamplingSet &omega, double sigma2,
                                 Rng &rng)
{
    if (omega.side() != h.side())
        throw DimensionError("acquire: sampling set side differs from channel side");
    if (!(sigma2 >= 0.0))
        throw std::invalid_argument("acquire: noise variance must be nonnegative");
    auto y = convolve_and_sample(h, p, omega);
#ifdef PRIORCCS_CHECK_DUAL_PATH
    {
        const auto direct = project_shifts(h, p, omega);
        double scale = 1.0;
        for (const auto &v : direct)
            scale = std::max(scale, std::abs(v));
        for (std::size_t m = 0; m < y.size(); ++m)
            if (std::abs(y[m] - direct[m]) > 1e-9 * scale)
                throw std::logic_error("acquire: convolution route disagrees with direct projection");
    }
#endif
    if (sigma2 > 0.0)
        for (auto &v : y)
            v += complex_gaussian(rng, sigma2);
    return MeasurementVector{std::move(y), omega, sigma2};
}

/// idft2 of the measurements zero-filled onto the Omega grid. With full
/// sampling this is X .* Z plus white noise of the original variance.
inline ComplexGrid backproject(std::span<const cplx> y, const SamplingSet &omega)
{
    if (y.size() != omega.size())
        throw DimensionError("backproject: measurement count differs from |Omega|");
    ComplexGrid embedded(omega.side());
    for (std::size_t i = 0; i < y.size(); ++i)
        embedded(omega[i].r, omega[i].c) = y[i];
    return idft2(embedded);
}

struct RecoveryResult
{
    ComplexGrid x_hat;
    std::vector<FlatIndex> support;  // in selection order
    std::vector<double> residual_norms; // ||r|| before the first and after each selection
};

/// Orthogonal matching pursuit on y = A x + v, where atom k is the
/// Omega-subsampled 2D-DFT atom for direction k scaled by z_k. The estimate
/// is for x itself (not x .* z).
///
/// Atom correlations come from one inverse transform per iteration:
/// A^H r = conj(z) .* idft2(R), where R places r at the Omega locations.
/// Atoms are ranked by |a_k^H r|, so high-mask directions are favoured.
inline RecoveryResult recover_beamspace_detailed(const MeasurementVector &meas, const Mask &mask,
                                                 std::size_t sparsity)
{
    const std::size_t n = mask.side();
    const std::size_t m = meas.y.size();
    if (meas.omega.side() != n || meas.omega.size() != m)
        throw DimensionError("recover_beamspace: measurement and mask dimensions disagree");
    if (sparsity == 0)
        throw std::invalid_argument("recover_beamspace: sparsity must be at least 1");
    if (sparsity > m)
        throw std::invalid_argument("recover_beamspace: sparsity exceeds measurement count");

    const ComplexGrid &z = mask.grid();
    const double dn = static_cast<double>(n);
    auto atom_entry = [&](std::size_t k, std::size_t row) {
        const std::size_t j = k / n, l = k % n;
        const auto &s = meas.omega[row];
        const std::size_t e = (s.r * j + s.c * l) % n;
        return std::polar(1.0 / dn, -2.0 * std::numbers::pi * static_cast<double>(e) / dn) * z[k];
    };

    Eigen::VectorXcd y(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i)
        y[static_cast<Eigen::Index>(i)] = meas.y[i];

    RecoveryResult out{ComplexGrid(n), {}, {}};
    Eigen::VectorXcd r = y;
    const double y_norm = y.norm();
    out.residual_norms.push_back(y_norm);
    if (y_norm == 0.0)
        return out;

    std::vector<char> chosen(n * n, 0);
    Eigen::MatrixXcd a_s(static_cast<Eigen::Index>(m), 0);
    Eigen::VectorXcd coeffs;
    for (std::size_t it = 0; it < sparsity; ++it)
    {
        const ComplexGrid corr = backproject(std::span(r.data(), static_cast<std::size_t>(r.size())), meas.omega);
        std::size_t best = 0;
        double best_val = -1.0;
        for (std::size_t k = 0; k < n * n; ++k)
        {
            if (chosen[k])
                continue;
            const double v = std::norm(corr[k]) * std::norm(z[k]); // |a_k^H r|^2 up to 1/N^2
            if (v > best_val)
            {
                best_val = v;
                best = k;
            }
        }
        chosen[best] = 1;
        out.support.push_back(FlatIndex{best});

        a_s.conservativeResize(Eigen::NoChange, a_s.cols() + 1);
        for (std::size_t i = 0; i < m; ++i)
            a_s(static_cast<Eigen::Index>(i), a_s.cols() - 1) = atom_entry(best, i);
        coeffs = a_s.colPivHouseholderQr().solve(y);
        r = y - a_s * coeffs;
        out.residual_norms.push_back(r.norm());
        if (r.norm() <= 1e-12 * y_norm)
            break;
    }
    for (std::size_t i = 0; i < out.support.size(); ++i)
        out.x_hat[out.support[i].value] = coeffs[static_cast<Eigen::Index>(i)];
    return out;
}

inline ComplexGrid recover_beamspace(const MeasurementVector &meas, const Mask &mask, std::size_t sparsity = 4)
{
    return recover_beamspace_detailed(meas, mask, sparsity).x_hat;
}

/// argmax_k |x_hat_k|, lowest index on ties.
inline FlatIndex estimate_best_beam(const ComplexGrid &x_hat)
{
    bool any = false;
    for (const auto &v : x_hat.flat())
        any = any || v != cplx{};
    if (!any)
        throw std::invalid_argument("estimate_best_beam: beamspace estimate is all zero");
    return argmax_magnitude(x_hat.flat());
}

/// Unit-modulus base matrix whose realized mask magnitude approximates |target|
/// (Gerchberg-Saxton, uniform random initial mask phases).
inline PhaseRetrievalResult base_from_mask(const ComplexGrid &target_magnitude, Rng &rng, int iterations = 100)
{
    return gerchberg_saxton(target_magnitude, iterations, rng);
}

} // namespace priorccs

#endif
