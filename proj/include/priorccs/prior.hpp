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


#ifndef PRIORCCS_PRIOR_HPP
#define PRIORCCS_PRIOR_HPP

#include "grid.hpp"

#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace priorccs
{
/// Probability that each 2D-DFT beam direction is the strongest one.
class AoDPrior
{
  public:
    static constexpr double sum_tolerance = 1e-9;

    AoDPrior() = default;

    /// Takes probabilities as-is; they must be nonnegative and sum to one.
    explicit AoDPrior(std::vector<double> p) : p_(std::move(p)) { validate(); }

    static AoDPrior uniform(std::size_t directions)
    {
        if (directions == 0)
            throw std::invalid_argument("AoDPrior: need at least one direction");
        return AoDPrior(std::vector<double>(directions, 1.0 / static_cast<double>(directions)));
    }

    static AoDPrior one_hot(std::size_t directions, FlatIndex k)
    {
        std::vector<double> p(directions, 0.0);
        p.at(k.value) = 1.0;
        return AoDPrior(std::move(p));
    }

    /// Normalizes nonnegative weights; all-zero weights give the uniform prior.
    static AoDPrior from_weights(std::span<const double> w)
    {
        double total = 0.0;
        for (double v : w)
        {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument("AoDPrior: weights must be finite and nonnegative");
            total += v;
        }
        if (total <= 0.0)
            return uniform(w.size());
        std::vector<double> p(w.size());
        for (std::size_t i = 0; i < w.size(); ++i)
            p[i] = w[i] / total;
        return AoDPrior(std::move(p));
    }

    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t k) const noexcept { return p_[k]; }
    std::span<const double> values() const noexcept { return p_; }

    /// Side N of the square beam grid (size = N^2).
    std::size_t side() const
    {
        const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(p_.size()))));
        if (n * n != p_.size())
            throw DimensionError("AoDPrior: size is not a perfect square");
        return n;
    }

    /// Shannon entropy in nats.
    double entropy() const noexcept
    {
        double h = 0.0;
        for (double v : p_)
            if (v > 0.0)
                h -= v * std::log(v);
        return h;
    }

  private:
    void validate() const
    {
        if (p_.empty())
            throw std::invalid_argument("AoDPrior: empty");
        double total = 0.0;
        for (double v : p_)
        {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument("AoDPrior: probabilities must be finite and nonnegative");
            total += v;
        }
        if (std::abs(total - 1.0) > sum_tolerance)
            throw std::invalid_argument("AoDPrior: probabilities sum to " + std::to_string(total));
    }

    std::vector<double> p_;
};

} // namespace priorccs

#endif
