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

#ifndef PRIORCCS_RNG_HPP
#define PRIORCCS_RNG_HPP

#include "grid.hpp"

#include <cstdint>
#include <random>

namespace priorccs
{
using Rng = std::mt19937_64;

/// Purpose tags so that independent consumers of one seed never share a stream.
enum class StreamTag : std::uint64_t
{
    channel = 1,
    noise = 2,
    shifts = 3,
    phase_init = 4,
    sweep = 5,
    normalization = 6,
    misc = 7,
};

inline std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream for (seed, tag, index); the same triple always yields the same sequence.
inline Rng make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index = 0)
{
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
    h = splitmix64(h ^ index);
    std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return Rng(seq);
}

/// Circularly-symmetric complex Gaussian with E|v|^2 = variance.
inline cplx complex_gaussian(Rng &rng, double variance)
{
    std::normal_distribution<double> nd(0.0, std::sqrt(variance / 2.0));
    const double re = nd(rng);
    const double im = nd(rng);
    return {re, im};
}

inline double uniform01(Rng &rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

} // namespace priorccs

#endif
