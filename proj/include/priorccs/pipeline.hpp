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


#ifndef PRIORCCS_PIPELINE_HPP
#define PRIORCCS_PIPELINE_HPP

#include "ccs.hpp"
#include "channel.hpp"
#include "mask_design.hpp"

#include <cmath>
#include <numbers>

// Glue from a prior or mask amplitude to an acquired-and-decoded beam.

namespace priorccs
{
/// Quadratic-phase base matrix whose realized mask is exactly unimodular.
/// Uses the chirp exp(j pi m^2 / N) (even N) or exp(j pi m (m + 1) / N) (odd N) per axis.
inline BaseMatrix chirp_base(std::size_t n)
{
    ComplexGrid p(n);
    const auto dn = static_cast<double>(n);
    auto chirp = [&](std::size_t m) {
        const auto dm = static_cast<double>(m);
        const double q = (n % 2 == 0) ? dm * dm : dm * (dm + 1.0);
        return std::fmod(q, 2.0 * dn) * std::numbers::pi / dn;
    };
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            p(r, c) = std::polar(1.0 / dn, chirp(r) + chirp(c));
    return BaseMatrix(std::move(p));
}

struct SensingDesign
{
    BaseMatrix base;
    Mask mask;                 // realized by `base`, used as the recovery dictionary scaling
    ComplexGrid target;        // requested |z|
    double phase_residual = 0; // GS residual against target
};

/// Amplitudes are rescaled to ||target||_F = N before phase retrieval.
inline SensingDesign design_from_amplitude(ComplexGrid amplitude, Rng &rng, int gs_iterations)
{
    const double norm = amplitude.frobenius_norm();
    if (!(norm > 0.0))
        throw std::invalid_argument("design_from_amplitude: zero amplitude");
    amplitude *= static_cast<double>(amplitude.side()) / norm;
    auto gs = gerchberg_saxton(amplitude, gs_iterations, rng);
    Mask mask = Mask::from_base(gs.base);
    return SensingDesign{std::move(gs.base), std::move(mask), std::move(amplitude), gs.residual};
}

inline SensingDesign design_from_prior(const AoDPrior &prior, double design_sigma2, std::size_t n,
                                       const MaskOptimizerOptions &opt, Rng &rng, int gs_iterations)
{
    const MaskPower power = optimize_mask_power(prior, design_sigma2, n, opt);
    return design_from_amplitude(power.amplitude_grid(), rng, gs_iterations);
}

inline SensingDesign unimodular_design(std::size_t n)
{
    BaseMatrix base = chirp_base(n);
    Mask mask = Mask::from_base(base);
    return SensingDesign{std::move(base), std::move(mask), ComplexGrid(n, 1.0), 0.0};
}

/// |<H, P>|^2
inline double bf_gain(const ComplexGrid &h, const BaseMatrix &p) { return std::norm(inner(h, p.grid())); }

/// exp(j phase(H)) / N, with phase(0) = 0.
inline BaseMatrix perfect_csi_bf(const ComplexGrid &h) { return BaseMatrix::from_phases(h); }

/// Conjugate-BF gain with full CSI: (||vec(H)||_1 / N)^2.
inline double optimal_gain(const ComplexGrid &h) { return bf_gain(h, perfect_csi_bf(h)); }

struct CcsOutcome
{
    FlatIndex chosen;
    ComplexGrid x_hat;
    double gain = 0.0; // conjugate BF on the reconstructed channel
};

/// One 2D-CCS alignment: random Omega of size m, acquire, OMP, decode, beamform.
inline CcsOutcome align_ccs(const ChannelRealization &ch, const SensingDesign &design, std::size_t m,
                            std::size_t sparsity, Rng &shift_rng, Rng &noise_rng)
{
    const std::size_t n = ch.h.side();
    const SamplingSet omega = sample_shift_set(n, m, shift_rng);
    const MeasurementVector meas = acquire(ch.h, design.base, omega, ch.sigma2, noise_rng);
    CcsOutcome out;
    out.x_hat = recover_beamspace(meas, design.mask, std::min(sparsity, m));
    bool any = false;
    for (const auto &v : out.x_hat.flat())
        any = any || v != cplx{};
    if (!any)
        return out; // nothing recovered: chosen stays 0, gain stays 0
    out.chosen = estimate_best_beam(out.x_hat);
    out.gain = bf_gain(ch.h, perfect_csi_bf(dft2(out.x_hat)));
    return out;
}

inline double loss_db(double reference_gain, double gain)
{
    constexpr double tiny = 1e-300;
    return 10.0 * std::log10(std::max(reference_gain, tiny) / std::max(gain, tiny));
}

} // namespace priorccs

#endif
