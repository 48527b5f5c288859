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


#ifndef PRIORCCS_CODEBOOK_HPP
#define PRIORCCS_CODEBOOK_HPP

#include "array_core.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Value types shared by the 2D-CCS engine and the mask designer.

namespace priorccs
{
/// Unit-modulus phase-shifter configuration: |P(k,l)| = 1/N, hence ||P||_F = 1.
class BaseMatrix
{
  public:
    static constexpr double modulus_tolerance = 1e-12;

    explicit BaseMatrix(ComplexGrid p) : p_(std::move(p))
    {
        const double target = 1.0 / static_cast<double>(p_.side());
        for (const auto &v : p_.flat())
            if (std::abs(std::abs(v) - target) > modulus_tolerance * target)
                throw std::invalid_argument("BaseMatrix: entries must have modulus exactly 1/N");
    }

    /// P = exp(j * phase) / N, entrywise.
    static BaseMatrix from_phases(const ComplexGrid &phase_source)
    {
        const std::size_t n = phase_source.side();
        ComplexGrid p(n);
        for (std::size_t i = 0; i < p.size(); ++i)
            p[i] = std::polar(1.0 / static_cast<double>(n), safe_arg(phase_source[i]));
        return BaseMatrix(std::move(p));
    }

    /// All entries 1/N. Its realized mask is N at direction 0 and zero elsewhere.
    static BaseMatrix constant(std::size_t n) { return BaseMatrix(ComplexGrid(n, 1.0 / static_cast<double>(n))); }

    std::size_t side() const noexcept { return p_.rows(); }
    const ComplexGrid &grid() const noexcept { return p_; }

  private:
    ComplexGrid p_;
};

/// Z = N * idft2(P_FC): the beamspace mask realized by base matrix P.
inline ComplexGrid realized_mask(const BaseMatrix &p)
{
    return idft2(flip_conjugate(p.grid())) * cplx(static_cast<double>(p.side()));
}

/// 2D-DFT domain sensing profile; ||Z||_F = N and no zero entries.
class Mask
{
  public:
    static constexpr double norm_tolerance = 1e-9;

    explicit Mask(ComplexGrid z) : z_(std::move(z))
    {
        const double n = static_cast<double>(z_.side());
        if (std::abs(z_.frobenius_norm() - n) > norm_tolerance * n)
            throw std::invalid_argument("Mask: Frobenius norm must equal N, got " + std::to_string(z_.frobenius_norm()));
        for (const auto &v : z_.flat())
            if (!(std::abs(v) > 0.0))
                throw std::invalid_argument("Mask: entries must be nonzero");
    }

    static Mask from_base(const BaseMatrix &p) { return Mask(realized_mask(p)); }

    /// Unimodular mask, all |z_k| = 1.
    static Mask uniform(std::size_t n) { return Mask(ComplexGrid(n, 1.0)); }

    std::size_t side() const noexcept { return z_.rows(); }
    const ComplexGrid &grid() const noexcept { return z_; }

  private:
    ComplexGrid z_;
};

/// Ordered set of distinct circulant shifts (Omega).
class SamplingSet
{
  public:
    SamplingSet(std::vector<ShiftCoord> coords, std::size_t n) : coords_(std::move(coords)), n_(n)
    {
        if (coords_.empty() || coords_.size() > n * n)
            throw std::invalid_argument("SamplingSet: need 1 <= M <= N^2 shifts");
        std::set<std::size_t> seen;
        for (auto &c : coords_)
        {
            c.r %= n;
            c.c %= n;
            if (!seen.insert(c.r * n + c.c).second)
                throw std::invalid_argument("SamplingSet: duplicate shift (" + std::to_string(c.r) + "," +
                                            std::to_string(c.c) + ")");
        }
    }

    static SamplingSet full(std::size_t n)
    {
        std::vector<ShiftCoord> c;
        c.reserve(n * n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t k = 0; k < n; ++k)
                c.push_back({r, k});
        return SamplingSet(std::move(c), n);
    }

    std::size_t size() const noexcept { return coords_.size(); }
    std::size_t side() const noexcept { return n_; }
    const ShiftCoord &operator[](std::size_t m) const noexcept { return coords_[m]; }
    const std::vector<ShiftCoord> &coords() const noexcept { return coords_; }

  private:
    std::vector<ShiftCoord> coords_;
    std::size_t n_;
};

struct MeasurementVector
{
    std::vector<cplx> y;
    SamplingSet omega;
    double sigma2 = 0.0;
};

} // namespace priorccs

#endif
