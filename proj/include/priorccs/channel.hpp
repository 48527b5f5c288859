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


#ifndef PRIORCCS_CHANNEL_HPP
#define PRIORCCS_CHANNEL_HPP

#include "array_core.hpp"
#include "parallel.hpp"
#include "prior.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

// Synthetic narrowband MISO channels for a base station on the side of a
// straight two-lane street canyon.
//
// Geometry (meters): the BS array sits at (0, 0, bs_height) facing +y. The
// road runs along x; lane l has its center at y = road_offset + (l + 1/2) *
// lane_width. The far building facade is the plane y = 2 * canyon_half_width,
// the ground is z = 0. Receivers sit at rx_height. Paths are the LOS ray plus
// single-bounce image-method reflections off the far facade and the ground.
//
// Angles follow the UPA steering model: theta is measured from the vertical
// array axis (+z), phi from the horizontal array axis (+x), so that
// cos(theta) = dz / r and sin(theta) cos(phi) = dx / r.

namespace priorccs
{
enum class VehicleLaw
{
    uniform,
    erlang,
};

struct Scenario
{
    std::size_t n = 32;          // UPA side
    std::size_t max_paths = 3;   // L_p
    double bs_height = 6.0;
    double rx_height = 1.5;
    double road_offset = 4.0;    // BS plane to near road edge (d0)
    double lane_width = 3.5;
    std::size_t lanes = 2;
    double lane_jitter = 0.5;    // uniform lateral spread around the lane center
    double canyon_half_width = 10.0;
    double coverage_length = 120.0;
    double reflection_loss_db = 6.0;
    double blockage_prob = 0.1;
    bool wall_reflection = true;
    bool ground_reflection = true;
    VehicleLaw vehicle_law = VehicleLaw::uniform;
    double erlang_shape = 2.0;   // only used with VehicleLaw::erlang
    double erlang_scale = 20.0;
    std::size_t wideband_taps = 0;     // 0 = narrowband path sum
    double tap_spacing_m = 0.6;        // tap delay spacing expressed as path length
    std::uint64_t seed = 1;

    void validate() const
    {
        auto positive = [](double v, const char *name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument(std::string("Scenario: ") + name + " must be positive");
        };
        if (n < 2)
            throw std::invalid_argument("Scenario: n must be at least 2");
        if (max_paths < 1)
            throw std::invalid_argument("Scenario: max_paths must be at least 1");
        if (lanes < 1)
            throw std::invalid_argument("Scenario: lanes must be at least 1");
        positive(bs_height, "bs_height");
        positive(rx_height, "rx_height");
        positive(road_offset, "road_offset");
        positive(lane_width, "lane_width");
        positive(canyon_half_width, "canyon_half_width");
        positive(coverage_length, "coverage_length");
        positive(tap_spacing_m, "tap_spacing_m");
        if (lane_jitter < 0.0 || lane_jitter > lane_width)
            throw std::invalid_argument("Scenario: lane_jitter must lie in [0, lane_width]");
        if (reflection_loss_db < 0.0)
            throw std::invalid_argument("Scenario: reflection_loss_db must be nonnegative");
        if (!(blockage_prob >= 0.0 && blockage_prob <= 1.0))
            throw std::invalid_argument("Scenario: blockage_prob must lie in [0, 1]");
        if (2.0 * canyon_half_width <= road_offset + static_cast<double>(lanes) * lane_width)
            throw std::invalid_argument("Scenario: far facade must lie beyond the last lane");
        if (vehicle_law == VehicleLaw::erlang)
        {
            positive(erlang_shape, "erlang_shape");
            positive(erlang_scale, "erlang_scale");
        }
    }
};

struct PathParams
{
    double gain = 0.0;       // alpha, linear amplitude
    double phase = 0.0;      // beta in [0, 2 pi)
    double elevation = 0.0;  // theta in (0, pi)
    double azimuth = 0.0;    // phi in (0, pi)
    double length = 0.0;     // propagation distance, meters
    int bounces = 0;
};

struct Position
{
    double x = 0.0, y = 0.0, z = 0.0;
};

namespace detail
{
inline PathParams path_towards(const Position &bs, const Position &target, int bounces, double loss_db)
{
    const double dx = target.x - bs.x, dy = target.y - bs.y, dz = target.z - bs.z;
    const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
    PathParams p;
    p.length = r;
    p.bounces = bounces;
    p.elevation = std::acos(std::clamp(dz / r, -1.0, 1.0));
    p.azimuth = std::atan2(dy, dx);
    p.gain = std::pow(10.0, -loss_db * bounces / 20.0) / r;
    return p;
}

// Raw geometry draw; gains are 1/r times bounce loss, not yet normalized.
inline std::vector<PathParams> draw_geometry(const Scenario &s, Rng &rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Position bs{0.0, 0.0, s.bs_height};
    for (;;)
    {
        const auto lane = static_cast<std::size_t>(unit(rng) * static_cast<double>(s.lanes)) % s.lanes;
        const double half = s.coverage_length / 2.0;
        double x = 0.0;
        if (s.vehicle_law == VehicleLaw::uniform)
            x = -half + unit(rng) * s.coverage_length;
        else
        {
            std::gamma_distribution<double> erl(s.erlang_shape, s.erlang_scale);
            x = -half + std::fmod(erl(rng), s.coverage_length);
        }
        const double y = s.road_offset + (static_cast<double>(lane) + 0.5) * s.lane_width +
                         (unit(rng) - 0.5) * s.lane_jitter;
        const Position rx{x, y, s.rx_height};
        const bool blocked = unit(rng) < s.blockage_prob;

        const double d = std::hypot(rx.x - bs.x, rx.y - bs.y, rx.z - bs.z);
        if (d < 1e-6)
            continue; // receiver on top of the BS

        std::vector<PathParams> paths;
        if (!blocked)
            paths.push_back(path_towards(bs, rx, 0, s.reflection_loss_db));
        if (s.wall_reflection)
        {
            const Position image{rx.x, 4.0 * s.canyon_half_width - rx.y, rx.z};
            paths.push_back(path_towards(bs, image, 1, s.reflection_loss_db));
        }
        if (s.ground_reflection)
        {
            const Position image{rx.x, rx.y, -rx.z};
            paths.push_back(path_towards(bs, image, 1, s.reflection_loss_db));
        }
        if (paths.empty())
            continue; // LOS blocked and no reflections enabled

        for (auto &p : paths)
            p.phase = unit(rng) * 2.0 * std::numbers::pi;
        std::stable_sort(paths.begin(), paths.end(),
                         [](const PathParams &a, const PathParams &b) { return a.gain > b.gain; });
        if (paths.size() > s.max_paths)
            paths.resize(s.max_paths);
        return paths;
    }
}
} // namespace detail

/// Amplitude scale that makes the ensemble average of sum(alpha^2) equal one.
/// Estimated once per scenario from a fixed pilot stream.
inline double gain_normalization(const Scenario &s, std::size_t pilot_draws = 4096)
{
    s.validate();
    auto rng = make_stream(s.seed, StreamTag::normalization);
    double acc = 0.0;
    for (std::size_t i = 0; i < pilot_draws; ++i)
        for (const auto &p : detail::draw_geometry(s, rng))
            acc += p.gain * p.gain;
    return 1.0 / std::sqrt(acc / static_cast<double>(pilot_draws));
}

/// Draws one path set. Gains are multiplied by gain_scale (see gain_normalization).
inline std::vector<PathParams> sample_paths(const Scenario &s, Rng &rng, double gain_scale = 1.0)
{
    s.validate();
    auto paths = detail::draw_geometry(s, rng);
    for (auto &p : paths)
        p.gain *= gain_scale;
    return paths;
}

/// H = sum_l alpha_l exp(j beta_l) a_N(cos theta_l) a_N(sin theta_l cos phi_l)^T.
inline ComplexGrid assemble_channel(std::span<const PathParams> paths, std::size_t n)
{
    if (paths.empty())
        throw std::invalid_argument("assemble_channel: empty path list");
    ComplexGrid h(n);
    for (const auto &p : paths)
    {
        const auto a_el = array_response(n, std::cos(p.elevation));
        const auto a_az = array_response(n, std::sin(p.elevation) * std::cos(p.azimuth));
        const cplx g = std::polar(p.gain, p.phase);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                h(i, j) += g * a_el[i] * a_az[j];
    }
    return h;
}

/// Entrywise sum of the tap matrices of a wideband channel.
inline ComplexGrid wideband_aggregate(std::span<const ComplexGrid> taps)
{
    if (taps.empty())
        throw std::invalid_argument("wideband_aggregate: no taps");
    ComplexGrid out = taps.front();
    for (std::size_t i = 1; i < taps.size(); ++i)
        out += taps[i];
    return out;
}

/// Per-tap channel matrices with sinc pulse shaping on excess path length.
inline std::vector<ComplexGrid> assemble_taps(std::span<const PathParams> paths, std::size_t n, std::size_t taps,
                                              double tap_spacing_m)
{
    if (paths.empty())
        throw std::invalid_argument("assemble_taps: empty path list");
    if (taps == 0)
        throw std::invalid_argument("assemble_taps: need at least one tap");
    double shortest = paths.front().length;
    for (const auto &p : paths)
        shortest = std::min(shortest, p.length);
    std::vector<ComplexGrid> out(taps, ComplexGrid(n));
    for (const auto &p : paths)
    {
        const double delay = (p.length - shortest) / tap_spacing_m;
        const ComplexGrid single = assemble_channel(std::span<const PathParams>(&p, 1), n);
        for (std::size_t l = 0; l < taps; ++l)
        {
            const double arg = std::numbers::pi * (static_cast<double>(l) - delay);
            const double w = std::abs(arg) < 1e-12 ? 1.0 : std::sin(arg) / arg;
            out[l] += single * cplx(w);
        }
    }
    return out;
}

/// sigma^2 = mean(||H||_F^2 / N^2) / 10^(snr_db / 10): quasi-omni SNR calibration.
inline double calibrate_noise(std::span<const ComplexGrid> ensemble, double target_snr_db)
{
    if (ensemble.empty())
        throw std::invalid_argument("calibrate_noise: empty ensemble");
    double acc = 0.0;
    for (const auto &h : ensemble)
        acc += h.frobenius_norm_sq() / static_cast<double>(h.size());
    return acc / static_cast<double>(ensemble.size()) / std::pow(10.0, target_snr_db / 10.0);
}

struct ChannelRealization
{
    ComplexGrid h;
    ComplexGrid x; // beamspace, idft2(h)
    FlatIndex true_best;
    double sigma2 = 0.0;
};

inline ChannelRealization make_realization(ComplexGrid h, double sigma2)
{
    ChannelRealization r;
    r.x = idft2(h);
    r.true_best = argmax_magnitude(r.x.flat());
    r.h = std::move(h);
    r.sigma2 = sigma2;
    return r;
}

/// Fraction of realizations whose strongest beamspace direction is k.
inline AoDPrior empirical_prior(std::span<const ChannelRealization> ensemble)
{
    if (ensemble.empty())
        throw std::invalid_argument("empirical_prior: empty ensemble");
    const std::size_t dirs = ensemble.front().x.size();
    std::vector<double> counts(dirs, 0.0);
    for (const auto &r : ensemble)
        counts.at(r.true_best.value) += 1.0;
    for (auto &c : counts)
        c /= static_cast<double>(ensemble.size());
    return AoDPrior(std::move(counts));
}

/// Stateless generator: realization i depends only on (scenario, i).
class ChannelGenerator
{
  public:
    explicit ChannelGenerator(Scenario s) : scenario_(std::move(s)), scale_(gain_normalization(scenario_)) {}

    const Scenario &scenario() const noexcept { return scenario_; }
    double gain_scale() const noexcept { return scale_; }

    std::vector<PathParams> paths(std::size_t index) const
    {
        auto rng = make_stream(scenario_.seed, StreamTag::channel, index);
        return sample_paths(scenario_, rng, scale_);
    }

    ComplexGrid channel(std::size_t index) const
    {
        const auto p = paths(index);
        if (scenario_.wideband_taps > 0)
            return wideband_aggregate(assemble_taps(p, scenario_.n, scenario_.wideband_taps, scenario_.tap_spacing_m));
        return assemble_channel(p, scenario_.n);
    }

    /// Realizations [first, first + count) with noise calibrated over that same set.
    std::vector<ChannelRealization> ensemble(std::size_t count, double snr_db, std::size_t first = 0,
                                             unsigned threads = 0) const
    {
        if (count == 0)
            throw std::invalid_argument("ChannelGenerator::ensemble: count must be positive");
        std::vector<ComplexGrid> hs(count);
        parallel_for(count, [&](std::size_t i) { hs[i] = channel(first + i); }, threads);
        const double sigma2 = calibrate_noise(hs, snr_db);
        std::vector<ChannelRealization> out(count);
        parallel_for(count, [&](std::size_t i) { out[i] = make_realization(std::move(hs[i]), sigma2); }, threads);
        return out;
    }

  private:
    Scenario scenario_;
    double scale_;
};

} // namespace priorccs

#endif
