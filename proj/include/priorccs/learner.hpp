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


#ifndef PRIORCCS_LEARNER_HPP
#define PRIORCCS_LEARNER_HPP

#include "pipeline.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Online AoD-prior learning from per-realization best-beam feedback.
// One compressive estimate plays every direction at once (superarm), so all
// play counts advance together and only the estimated best beam earns reward.

namespace priorccs
{
struct LearnerState
{
    std::size_t t = 0;
    std::vector<std::uint64_t> plays; // T_k
    std::vector<std::uint64_t> wins;  // reward total per direction
    std::vector<double> mu;           // empirical mean reward per direction

    explicit LearnerState(std::size_t directions) : plays(directions, 0), wins(directions, 0), mu(directions, 0.0)
    {
        if (directions == 0)
            throw std::invalid_argument("LearnerState: need at least one direction");
    }
    std::size_t size() const noexcept { return mu.size(); }
};

struct ExploreConfig
{
    double c = 0.1;           // sqrt(2 log(1/delta))
    double n_inf = 10000.0;   // index of never-played arms

    static ExploreConfig from_delta(double delta, double n_inf = 10000.0)
    {
        if (!(delta > 0.0 && delta < 1.0))
            throw std::invalid_argument("ExploreConfig: delta must lie in (0, 1)");
        return {std::sqrt(2.0 * std::log(1.0 / delta)), n_inf};
    }
    void validate() const
    {
        if (!(c >= 0.0) || !std::isfinite(c))
            throw std::invalid_argument("ExploreConfig: c must be finite and nonnegative");
        if (!(n_inf > 0.0) || !std::isfinite(n_inf))
            throw std::invalid_argument("ExploreConfig: n_inf must be finite and positive");
    }
};

struct MeasurementSchedule
{
    std::size_t m0 = 300;
    std::size_t delta_m = 20;
    std::size_t delta_t = 100;
    std::size_t m_min = 25;

    static MeasurementSchedule constant(std::size_t m) { return {m, 0, 1, m}; }
    void validate() const
    {
        if (m0 == 0 || delta_t == 0 || m_min == 0)
            throw std::invalid_argument("MeasurementSchedule: M0, delta_t and M_min must be positive");
        if (m_min > m0)
            throw std::invalid_argument("MeasurementSchedule: M_min exceeds M0");
    }
};

/// M(t) = max(M0 - floor(t / delta_t) * delta_M, M_min)
inline std::size_t schedule(std::size_t t, const MeasurementSchedule &s)
{
    s.validate();
    const std::size_t steps = t / s.delta_t;
    if (s.delta_m != 0 && steps > s.m0 / s.delta_m)
        return s.m_min; // also keeps steps * delta_M from overflowing
    const std::size_t drop = steps * s.delta_m;
    return drop >= s.m0 ? s.m_min : std::max(s.m0 - drop, s.m_min);
}

namespace detail
{
inline double exploration_bonus(std::uint64_t plays, const ExploreConfig &cfg)
{
    return plays == 0 ? cfg.n_inf : cfg.c / std::sqrt(static_cast<double>(plays));
}
} // namespace detail

/// n_inf for unplayed arms, mu_k + c / sqrt(T_k) otherwise.
inline std::vector<double> ucb_index(const LearnerState &st, const ExploreConfig &cfg)
{
    cfg.validate();
    std::vector<double> idx(st.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
        idx[k] = st.plays[k] == 0 ? cfg.n_inf : st.mu[k] + detail::exploration_bonus(st.plays[k], cfg);
    return idx;
}

inline AoDPrior ucb_prior(const LearnerState &st, const ExploreConfig &cfg)
{
    const auto idx = ucb_index(st, cfg);
    return AoDPrior::from_weights(idx);
}

/// Normalized empirical means; uniform before the first reward. Under the
/// superarm all T_k agree, so this is wins normalized by the step count, taken
/// from the integer tallies to avoid rounding drift in mu.
inline AoDPrior empirical_estimate(const LearnerState &st)
{
    std::vector<double> w(st.wins.begin(), st.wins.end());
    return AoDPrior::from_weights(w);
}

/// Superarm step: direction s earns reward 1, every other direction reward 0,
/// and each arm keeps the running mean of its own rewards.
inline void record_reward(LearnerState &st, FlatIndex s)
{
    if (s.value >= st.size())
        throw std::out_of_range("record_reward: direction out of range");
    ++st.wins[s.value];
    for (std::size_t k = 0; k < st.size(); ++k)
    {
        ++st.plays[k];
        st.mu[k] = static_cast<double>(st.wins[k]) / static_cast<double>(st.plays[k]);
    }
    ++st.t;
}

/// Mask amplitude |z| from the empirical prior plus the exploration bonus,
/// renormalized to ||z||_F = N. The amplitude is first scaled to unit sum, the
/// same normalization the UCB prior gets, so c carries the same weight in both.
inline ComplexGrid regularized_mask(const LearnerState &st, const ExploreConfig &cfg, double design_sigma2,
                                    std::size_t n, const MaskOptimizerOptions &opt = {})
{
    cfg.validate();
    if (st.size() != n * n)
        throw DimensionError("regularized_mask: state size must be N^2");
    const MaskPower power = optimize_mask_power(empirical_estimate(st), design_sigma2, n, opt);
    ComplexGrid amp = power.amplitude_grid();
    double total = 0.0;
    for (const auto &v : amp.flat())
        total += std::abs(v);
    amp *= 1.0 / total;
    for (std::size_t k = 0; k < amp.size(); ++k)
        amp[k] += detail::exploration_bonus(st.plays[k], cfg);
    amp *= static_cast<double>(n) / amp.frobenius_norm();
    return amp;
}

/// sqrt(sum (sqrt p - sqrt q)^2 / 2)
inline double hellinger(const AoDPrior &p, const AoDPrior &q)
{
    if (p.size() != q.size())
        throw DimensionError("hellinger: prior sizes differ");
    double acc = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k)
    {
        const double d = std::sqrt(p[k]) - std::sqrt(q[k]);
        acc += d * d;
    }
    return std::min(1.0, std::sqrt(0.5 * acc));
}

enum class LearnerKind
{
    ucb,        // prior from normalized UCB indices
    regmask,    // empirical prior, exploration added on the mask
    noexplore,  // UCB with zero exploration bonus
    oracle      // rewards from the true best beam, no sensing
};

inline std::string_view to_string(LearnerKind k)
{
    switch (k)
    {
    case LearnerKind::ucb: return "ucb";
    case LearnerKind::regmask: return "regmask";
    case LearnerKind::noexplore: return "noexplore";
    case LearnerKind::oracle: return "oracle";
    }
    return "?";
}

inline LearnerKind learner_from_string(std::string_view s)
{
    if (s == "ucb") return LearnerKind::ucb;
    if (s == "regmask") return LearnerKind::regmask;
    if (s == "noexplore") return LearnerKind::noexplore;
    if (s == "oracle") return LearnerKind::oracle;
    throw std::invalid_argument("unknown learner '" + std::string(s) + "' (expected ucb|regmask|noexplore|oracle)");
}

struct EpisodeConfig
{
    LearnerKind kind = LearnerKind::regmask;
    ExploreConfig explore{};
    MeasurementSchedule sched = MeasurementSchedule::constant(50);
    MaskOptimizerOptions optimizer{};
    std::size_t sparsity = 4;
    int gs_iterations = 100;
    std::optional<double> design_sigma2; // defaults to model_sigma2 of the episode ensemble
    std::size_t snapshot_every = 0;      // 0 disables mask snapshots
    std::uint64_t seed = 1;
};

struct TrajectoryPoint
{
    std::size_t t = 0;
    std::size_t m = 0;
    FlatIndex s;
    FlatIndex true_best;
    double hellinger = 0.0;     // empirical estimate after this step vs ground truth
    double bf_loss_db = 0.0;
    double prior_entropy = 0.0; // of the prior (or normalized mask power) used for sensing
};

struct MaskSnapshot
{
    std::size_t t = 0;
    ComplexGrid magnitude;
};

struct EpisodeResult
{
    std::vector<TrajectoryPoint> trajectory;
    std::vector<MaskSnapshot> snapshots;
    LearnerState final_state;
    AoDPrior ground_truth;
};

/// Mean |x_best|^2 over an ensemble.
inline double mean_peak_power(std::span<const ChannelRealization> ensemble)
{
    if (ensemble.empty())
        throw std::invalid_argument("mean_peak_power: empty ensemble");
    double peak = 0.0;
    for (const auto &r : ensemble)
        peak += std::norm(r.x[r.true_best.value]);
    if (!(peak > 0.0))
        throw std::invalid_argument("mean_peak_power: ensemble has no beamspace power");
    return peak / static_cast<double>(ensemble.size());
}

/// sigma^2 relative to the mean strongest-beam power, the scale at which the
/// mask designer's unit-coefficient model applies. Noiseless input maps to a
/// tiny positive variance.
inline double model_sigma2(double sigma2, double peak_power) { return std::max(sigma2 / peak_power, 1e-12); }

inline double model_sigma2(std::span<const ChannelRealization> ensemble)
{
    return model_sigma2(ensemble.front().sigma2, mean_peak_power(ensemble));
}

/// Runs one online episode over `realizations` in order; realization t is seen at step t.
inline EpisodeResult run_episode(std::span<const ChannelRealization> realizations, const EpisodeConfig &cfg)
{
    if (realizations.empty())
        throw std::invalid_argument("run_episode: no realizations");
    cfg.sched.validate();
    cfg.explore.validate();
    const std::size_t n = realizations.front().h.side();
    const std::size_t dirs = n * n;
    const double design_s2 = cfg.design_sigma2.value_or(model_sigma2(realizations));

    EpisodeResult out{{}, {}, LearnerState(dirs), empirical_prior(realizations)};
    LearnerState &st = out.final_state;
    out.trajectory.reserve(realizations.size());

    ExploreConfig explore = cfg.explore;
    if (cfg.kind == LearnerKind::noexplore)
        explore.c = 0.0;

    for (std::size_t t = 0; t < realizations.size(); ++t)
    {
        const auto &ch = realizations[t];
        if (ch.h.side() != n)
            throw DimensionError("run_episode: realizations differ in size");
        TrajectoryPoint pt;
        pt.t = t;
        pt.m = std::min(schedule(t, cfg.sched), dirs);
        pt.true_best = ch.true_best;

        if (cfg.kind == LearnerKind::oracle)
        {
            pt.s = ch.true_best;
            pt.prior_entropy = empirical_estimate(st).entropy();
        }
        else
        {
            auto phase_rng = make_stream(cfg.seed, StreamTag::phase_init, t);
            auto shift_rng = make_stream(cfg.seed, StreamTag::shifts, t);
            auto noise_rng = make_stream(cfg.seed, StreamTag::noise, t);

            ComplexGrid amplitude;
            if (cfg.kind == LearnerKind::regmask)
            {
                amplitude = regularized_mask(st, explore, design_s2, n, cfg.optimizer);
                std::vector<double> pw(dirs);
                for (std::size_t k = 0; k < dirs; ++k)
                    pw[k] = std::norm(amplitude[k]);
                pt.prior_entropy = AoDPrior::from_weights(pw).entropy();
            }
            else
            {
                const AoDPrior prior = ucb_prior(st, explore);
                pt.prior_entropy = prior.entropy();
                amplitude = optimize_mask_power(prior, design_s2, n, cfg.optimizer).amplitude_grid();
            }
            const SensingDesign design = design_from_amplitude(std::move(amplitude), phase_rng, cfg.gs_iterations);
            const CcsOutcome res = align_ccs(ch, design, pt.m, cfg.sparsity, shift_rng, noise_rng);
            pt.s = res.chosen;
            pt.bf_loss_db = loss_db(optimal_gain(ch.h), res.gain);
            if (cfg.snapshot_every != 0 && t % cfg.snapshot_every == 0)
            {
                ComplexGrid mag(n);
                for (std::size_t k = 0; k < dirs; ++k)
                    mag[k] = std::abs(design.mask.grid()[k]);
                out.snapshots.push_back({t, std::move(mag)});
            }
        }

        record_reward(st, pt.s);
        pt.hellinger = hellinger(empirical_estimate(st), out.ground_truth);
        out.trajectory.push_back(pt);
    }
    return out;
}

} // namespace priorccs

#endif
