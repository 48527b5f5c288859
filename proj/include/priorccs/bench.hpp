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


#ifndef PRIORCCS_BENCH_HPP
#define PRIORCCS_BENCH_HPP

#include "learner.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

// Baselines, trial records and batch campaigns.

namespace priorccs
{
/// DFT beam for direction k: <H, beam> = x_k.
inline BaseMatrix dft_beam(std::size_t n, FlatIndex k)
{
    const auto [j, l] = from_flat(k, n);
    ComplexGrid b(n);
    const double dn = static_cast<double>(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c)
        {
            const std::size_t e = (a * j + c * l) % n;
            b(a, c) = std::polar(1.0 / dn, -2.0 * std::numbers::pi * static_cast<double>(e) / dn);
        }
    return BaseMatrix(std::move(b));
}

namespace detail
{
// One noisy RSRP sample per direction, drawn in index order.
inline std::vector<double> swept_power(const ComplexGrid &x, double sigma2, Rng &rng)
{
    std::vector<double> p(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
    {
        const cplx v = sigma2 > 0.0 ? x[k] + complex_gaussian(rng, sigma2) : x[k];
        p[k] = std::norm(v);
    }
    return p;
}
} // namespace detail

/// Best DFT beam by noisy RSRP over all N^2 directions.
inline FlatIndex exhaustive_sweep(const ComplexGrid &h, double sigma2, Rng &rng)
{
    if (!(sigma2 >= 0.0))
        throw std::invalid_argument("exhaustive_sweep: noise variance must be nonnegative");
    const auto p = detail::swept_power(idft2(h), sigma2, rng);
    return FlatIndex{static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin())};
}

/// Directions ordered by decreasing prior probability, lower index first on ties.
inline std::vector<std::size_t> prior_order(const AoDPrior &prior)
{
    std::vector<std::size_t> order(prior.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return prior[a] > prior[b]; });
    return order;
}

/// Sweep restricted to the M most probable directions.
inline FlatIndex top_m_sweep(const ComplexGrid &h, const AoDPrior &prior, std::size_t m, double sigma2, Rng &rng)
{
    if (prior.size() != h.size())
        throw DimensionError("top_m_sweep: prior size must be N^2");
    if (m == 0 || m > prior.size())
        throw std::invalid_argument("top_m_sweep: need 1 <= M <= N^2");
    if (!(sigma2 >= 0.0))
        throw std::invalid_argument("top_m_sweep: noise variance must be nonnegative");
    // Noise for every direction keeps the draw sequence identical to the exhaustive sweep.
    const auto p = detail::swept_power(idft2(h), sigma2, rng);
    auto order = prior_order(prior);
    order.resize(m);
    std::sort(order.begin(), order.end());
    std::size_t best = order.front();
    for (std::size_t k : order)
        if (p[k] > p[best])
            best = k;
    return FlatIndex{best};
}

enum class Method
{
    perfect_csi,
    exhaustive,
    top_m,
    ccs_prior,
    ccs_uniform
};

inline std::string_view to_string(Method m)
{
    switch (m)
    {
    case Method::perfect_csi: return "perfect_csi";
    case Method::exhaustive: return "exhaustive";
    case Method::top_m: return "top_m";
    case Method::ccs_prior: return "ccs_prior";
    case Method::ccs_uniform: return "ccs_uniform";
    }
    return "?";
}

inline Method method_from_string(std::string_view s)
{
    for (Method m : {Method::perfect_csi, Method::exhaustive, Method::top_m, Method::ccs_prior, Method::ccs_uniform})
        if (s == to_string(m))
            return m;
    throw std::invalid_argument("unknown method '" + std::string(s) +
                                "' (expected perfect_csi|exhaustive|top_m|ccs_prior|ccs_uniform)");
}

/// Methods whose result depends on the measurement budget M.
inline bool uses_budget(Method m) { return m == Method::top_m || m == Method::ccs_prior || m == Method::ccs_uniform; }

struct TrialRecord
{
    std::size_t trial = 0;
    Method method = Method::perfect_csi;
    std::size_t m = 0; // N^2 for budget-free methods
    FlatIndex chosen;
    double rsrp_db = 0.0;
    double bf_gain = 0.0;
    double bf_loss_db = 0.0;
};

struct CampaignConfig
{
    Scenario scenario{};
    std::vector<Method> methods{Method::perfect_csi, Method::exhaustive, Method::ccs_prior, Method::ccs_uniform};
    std::vector<std::size_t> m_values{20};
    std::size_t trials = 500;
    std::uint64_t seed = 1;
    double snr_db = 10.0;
    std::size_t train_count = 3000;          // realizations behind the perfect prior
    std::size_t train_offset = 1'000'000;    // keeps training indices disjoint from trial indices
    std::size_t sparsity = 4;
    int gs_iterations = 100;
    MaskOptimizerOptions optimizer{};
    unsigned threads = 0;

    void validate() const
    {
        scenario.validate();
        if (methods.empty())
            throw std::invalid_argument("CampaignConfig: method list is empty");
        if (trials == 0)
            throw std::invalid_argument("CampaignConfig: trial count must be positive");
        if (train_count == 0)
            throw std::invalid_argument("CampaignConfig: train_count must be positive");
        if (sparsity == 0)
            throw std::invalid_argument("CampaignConfig: sparsity must be positive");
        if (gs_iterations < 1)
            throw std::invalid_argument("CampaignConfig: gs_iterations must be positive");
        const std::size_t dirs = scenario.n * scenario.n;
        for (auto m : m_values)
            if (m == 0 || m > dirs)
                throw std::invalid_argument("CampaignConfig: M values must lie in [1, N^2]");
        if (m_values.empty() && std::any_of(methods.begin(), methods.end(), uses_budget))
            throw std::invalid_argument("CampaignConfig: budgeted methods need at least one M value");
        if (train_offset < trials)
            throw std::invalid_argument("CampaignConfig: training indices overlap trial indices");
    }
};

struct SummaryRow
{
    Method method = Method::perfect_csi;
    std::size_t m = 0;
    std::size_t count = 0;
    double mean_rsrp_db = 0.0;
    double mean_loss_db = 0.0;      // mean of per-trial losses
    double loss_of_mean_db = 0.0;   // 10 log10(mean optimal gain / mean method gain)
};

struct CampaignResult
{
    std::vector<TrialRecord> records; // ordered by (trial, method, M)
    std::vector<SummaryRow> summary;  // ordered by (method, M)
    AoDPrior prior;
    double sigma2 = 0.0;
    double design_sigma2 = 0.0;
    ComplexGrid prior_mask;           // |z| realized for ccs_prior
};

/// Beamformed power over the calibrated noise floor; plain gain in dB when noiseless.
inline double rsrp_db(double gain, double sigma2)
{
    return 10.0 * std::log10(std::max(gain, 1e-300) / (sigma2 > 0.0 ? sigma2 : 1.0));
}

inline std::vector<SummaryRow> summarize(std::span<const TrialRecord> records)
{
    std::vector<SummaryRow> rows;
    std::map<std::pair<int, std::size_t>, std::size_t> slot;
    std::vector<double> gain_sum, opt_sum;
    for (const auto &r : records)
    {
        const auto key = std::make_pair(static_cast<int>(r.method), r.m);
        auto it = slot.find(key);
        if (it == slot.end())
        {
            it = slot.emplace(key, rows.size()).first;
            rows.push_back(SummaryRow{r.method, r.m, 0, 0.0, 0.0, 0.0});
            gain_sum.push_back(0.0);
            opt_sum.push_back(0.0);
        }
        auto &row = rows[it->second];
        ++row.count;
        row.mean_rsrp_db += r.rsrp_db;
        row.mean_loss_db += r.bf_loss_db;
        gain_sum[it->second] += r.bf_gain;
        // per-trial optimal gain, recovered from the loss
        opt_sum[it->second] += r.bf_gain * std::pow(10.0, r.bf_loss_db / 10.0);
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        const double c = static_cast<double>(rows[i].count);
        rows[i].mean_rsrp_db /= c;
        rows[i].mean_loss_db /= c;
        rows[i].loss_of_mean_db = loss_db(opt_sum[i], gain_sum[i]);
    }
    std::sort(rows.begin(), rows.end(), [](const SummaryRow &a, const SummaryRow &b) {
        return std::make_pair(static_cast<int>(a.method), a.m) < std::make_pair(static_cast<int>(b.method), b.m);
    });
    return rows;
}

namespace detail
{
// Paired streams: the same (trial, M) draws identical shifts and noise for every CCS mask.
inline std::size_t trial_stream(std::size_t trial, std::size_t m) { return (trial << 20) | m; }
} // namespace detail

inline CampaignResult run_campaign(const CampaignConfig &cfg)
{
    cfg.validate();
    const std::size_t n = cfg.scenario.n;
    const std::size_t dirs = n * n;
    const ChannelGenerator gen(cfg.scenario);

    const auto test = gen.ensemble(cfg.trials, cfg.snr_db, 0, cfg.threads);
    const auto train = gen.ensemble(cfg.train_count, cfg.snr_db, cfg.train_offset, cfg.threads);

    CampaignResult out{{}, {}, empirical_prior(train), test.front().sigma2, 0.0, ComplexGrid(n)};
    out.design_sigma2 = model_sigma2(out.sigma2, mean_peak_power(train));

    auto has = [&](Method m) { return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end(); };
    std::optional<SensingDesign> prior_design, uniform_design;
    if (has(Method::ccs_prior))
    {
        auto rng = make_stream(cfg.seed, StreamTag::phase_init, 0);
        prior_design = design_from_prior(out.prior, out.design_sigma2, n, cfg.optimizer, rng, cfg.gs_iterations);
        for (std::size_t k = 0; k < dirs; ++k)
            out.prior_mask[k] = std::abs(prior_design->mask.grid()[k]);
    }
    if (has(Method::ccs_uniform))
        uniform_design = unimodular_design(n);

    std::vector<std::vector<TrialRecord>> per_trial(cfg.trials);
    parallel_for(
        cfg.trials,
        [&](std::size_t i) {
            const auto &ch = test[i];
            const double optimal = optimal_gain(ch.h);
            auto &recs = per_trial[i];
            auto push = [&](Method method, std::size_t m, FlatIndex chosen, double gain) {
                recs.push_back(TrialRecord{i, method, m, chosen, rsrp_db(gain, ch.sigma2), gain, loss_db(optimal, gain)});
            };
            auto beam_gain = [&](FlatIndex k) { return std::norm(ch.x[k.value]); };
            for (Method method : cfg.methods)
            {
                switch (method)
                {
                case Method::perfect_csi:
                    push(method, dirs, ch.true_best, optimal);
                    break;
                case Method::exhaustive: {
                    auto rng = make_stream(cfg.seed, StreamTag::sweep, detail::trial_stream(i, 0));
                    const FlatIndex k = exhaustive_sweep(ch.h, ch.sigma2, rng);
                    push(method, dirs, k, beam_gain(k));
                    break;
                }
                case Method::top_m:
                    for (auto m : cfg.m_values)
                    {
                        auto rng = make_stream(cfg.seed, StreamTag::sweep, detail::trial_stream(i, m));
                        const FlatIndex k = top_m_sweep(ch.h, out.prior, m, ch.sigma2, rng);
                        push(method, m, k, beam_gain(k));
                    }
                    break;
                case Method::ccs_prior:
                case Method::ccs_uniform:
                    for (auto m : cfg.m_values)
                    {
                        auto shift_rng = make_stream(cfg.seed, StreamTag::shifts, detail::trial_stream(i, m));
                        auto noise_rng = make_stream(cfg.seed, StreamTag::noise, detail::trial_stream(i, m));
                        const auto &design = method == Method::ccs_prior ? *prior_design : *uniform_design;
                        const auto res = align_ccs(ch, design, m, cfg.sparsity, shift_rng, noise_rng);
                        push(method, m, res.chosen, res.gain);
                    }
                    break;
                }
            }
        },
        cfg.threads);

    for (auto &recs : per_trial)
        for (auto &r : recs)
            out.records.push_back(r);
    out.summary = summarize(out.records);
    return out;
}

namespace detail
{
inline std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}
} // namespace detail

inline void write_records_csv(std::ostream &os, std::span<const TrialRecord> records)
{
    os << "trial,method,m,chosen,rsrp_db,bf_gain,bf_loss_db\n";
    for (const auto &r : records)
        os << r.trial << ',' << to_string(r.method) << ',' << r.m << ',' << r.chosen.value << ','
           << detail::fmt_double(r.rsrp_db) << ',' << detail::fmt_double(r.bf_gain) << ','
           << detail::fmt_double(r.bf_loss_db) << '\n';
}

inline void write_summary_csv(std::ostream &os, std::span<const SummaryRow> rows)
{
    os << "method,m,trials,mean_rsrp_db,mean_bf_loss_db,loss_of_mean_gain_db\n";
    for (const auto &r : rows)
        os << to_string(r.method) << ',' << r.m << ',' << r.count << ',' << detail::fmt_double(r.mean_rsrp_db) << ','
           << detail::fmt_double(r.mean_loss_db) << ',' << detail::fmt_double(r.loss_of_mean_db) << '\n';
}

} // namespace priorccs

#endif
