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


#ifndef PRIORCCS_CONFIG_HPP
#define PRIORCCS_CONFIG_HPP

#include "bench.hpp"
#include "learner.hpp"

#include <charconv>
#include <functional>
#include <istream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

// Flat `key = value` run configuration. '#' starts a comment; blank lines are ignored.

namespace priorccs
{
class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

namespace detail
{
inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;)
    {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

template <class T> T parse_number(const std::string &text)
{
    T v{};
    const char *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end)
        throw std::invalid_argument("'" + text + "' is not a valid number");
    return v;
}

inline double parse_double(const std::string &text)
{
    std::size_t used = 0;
    double v = 0.0;
    try
    {
        v = std::stod(text, &used);
    }
    catch (const std::exception &)
    {
        throw std::invalid_argument("'" + text + "' is not a valid number");
    }
    if (used != text.size() || !std::isfinite(v))
        throw std::invalid_argument("'" + text + "' is not a valid finite number");
    return v;
}

inline bool parse_bool(const std::string &text)
{
    if (text == "true" || text == "1" || text == "yes")
        return true;
    if (text == "false" || text == "0" || text == "no")
        return false;
    throw std::invalid_argument("'" + text + "' is not a boolean");
}

// shortest text that reads back to the same double
inline std::string fmt(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <class T> std::string join(const std::vector<T> &v, auto &&to_text)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::string(to_text(v[i]));
    return s;
}
} // namespace detail

/// Everything a CLI run needs; each field has a config key.
struct RunConfig
{
    Scenario scenario{};
    std::size_t trials = 500;
    double snr_db = 10.0;
    std::vector<Method> methods{Method::perfect_csi, Method::exhaustive, Method::top_m, Method::ccs_prior,
                                Method::ccs_uniform};
    std::vector<std::size_t> m_values{20};
    std::size_t train_count = 3000;
    std::size_t sparsity = 4;
    int gs_iterations = 100;
    double power_floor = 0.01;
    unsigned threads = 0;
    LearnerKind learner = LearnerKind::regmask;
    double c = 0.1;
    double n_inf = 10000.0;
    MeasurementSchedule sched = MeasurementSchedule::constant(50);
    std::size_t steps = 3000;
    std::size_t snapshot_every = 500;

    struct Key
    {
        const char *name;
        std::function<void(RunConfig &, const std::string &)> set;
        std::function<std::string(const RunConfig &)> get;
    };

    static const std::vector<Key> &keys()
    {
        using detail::fmt;
        using detail::parse_double;
        using detail::parse_number;
        auto size_key = [](const char *name, std::size_t RunConfig::*field) {
            return Key{name, [field](RunConfig &c, const std::string &v) { c.*field = parse_number<std::size_t>(v); },
                       [field](const RunConfig &c) { return std::to_string(c.*field); }};
        };
        auto dbl_key = [](const char *name, double RunConfig::*field) {
            return Key{name, [field](RunConfig &c, const std::string &v) { c.*field = parse_double(v); },
                       [field](const RunConfig &c) { return fmt(c.*field); }};
        };
        auto sc_dbl = [](const char *name, double Scenario::*field) {
            return Key{name, [field](RunConfig &c, const std::string &v) { c.scenario.*field = parse_double(v); },
                       [field](const RunConfig &c) { return fmt(c.scenario.*field); }};
        };
        auto sc_size = [](const char *name, std::size_t Scenario::*field) {
            return Key{name,
                       [field](RunConfig &c, const std::string &v) { c.scenario.*field = parse_number<std::size_t>(v); },
                       [field](const RunConfig &c) { return std::to_string(c.scenario.*field); }};
        };
        auto sc_bool = [](const char *name, bool Scenario::*field) {
            return Key{name, [field](RunConfig &c, const std::string &v) { c.scenario.*field = detail::parse_bool(v); },
                       [field](const RunConfig &c) { return std::string(c.scenario.*field ? "true" : "false"); }};
        };
        static const std::vector<Key> table{
            sc_size("n", &Scenario::n),
            Key{"seed", [](RunConfig &c, const std::string &v) { c.scenario.seed = parse_number<std::uint64_t>(v); },
                [](const RunConfig &c) { return std::to_string(c.scenario.seed); }},
            sc_size("max_paths", &Scenario::max_paths),
            sc_dbl("bs_height", &Scenario::bs_height),
            sc_dbl("rx_height", &Scenario::rx_height),
            sc_dbl("road_offset", &Scenario::road_offset),
            sc_dbl("lane_width", &Scenario::lane_width),
            sc_size("lanes", &Scenario::lanes),
            sc_dbl("lane_jitter", &Scenario::lane_jitter),
            sc_dbl("canyon_half_width", &Scenario::canyon_half_width),
            sc_dbl("coverage_length", &Scenario::coverage_length),
            sc_dbl("reflection_loss_db", &Scenario::reflection_loss_db),
            sc_dbl("blockage_prob", &Scenario::blockage_prob),
            sc_bool("wall_reflection", &Scenario::wall_reflection),
            sc_bool("ground_reflection", &Scenario::ground_reflection),
            Key{"vehicle_law",
                [](RunConfig &c, const std::string &v) {
                    if (v == "uniform")
                        c.scenario.vehicle_law = VehicleLaw::uniform;
                    else if (v == "erlang")
                        c.scenario.vehicle_law = VehicleLaw::erlang;
                    else
                        throw std::invalid_argument("'" + v + "' is not uniform|erlang");
                },
                [](const RunConfig &c) {
                    return std::string(c.scenario.vehicle_law == VehicleLaw::erlang ? "erlang" : "uniform");
                }},
            sc_dbl("erlang_shape", &Scenario::erlang_shape),
            sc_dbl("erlang_scale", &Scenario::erlang_scale),
            sc_size("wideband_taps", &Scenario::wideband_taps),
            sc_dbl("tap_spacing_m", &Scenario::tap_spacing_m),
            size_key("trials", &RunConfig::trials),
            dbl_key("snr_db", &RunConfig::snr_db),
            Key{"methods",
                [](RunConfig &c, const std::string &v) {
                    c.methods.clear();
                    for (const auto &m : detail::split(v, ','))
                        c.methods.push_back(method_from_string(m));
                },
                [](const RunConfig &c) { return detail::join(c.methods, [](Method m) { return to_string(m); }); }},
            Key{"m_values",
                [](RunConfig &c, const std::string &v) {
                    c.m_values.clear();
                    for (const auto &m : detail::split(v, ','))
                        c.m_values.push_back(parse_number<std::size_t>(m));
                },
                [](const RunConfig &c) {
                    return detail::join(c.m_values, [](std::size_t m) { return std::to_string(m); });
                }},
            size_key("train_count", &RunConfig::train_count),
            size_key("sparsity", &RunConfig::sparsity),
            Key{"gs_iterations", [](RunConfig &c, const std::string &v) { c.gs_iterations = parse_number<int>(v); },
                [](const RunConfig &c) { return std::to_string(c.gs_iterations); }},
            dbl_key("power_floor", &RunConfig::power_floor),
            Key{"threads", [](RunConfig &c, const std::string &v) { c.threads = parse_number<unsigned>(v); },
                [](const RunConfig &c) { return std::to_string(c.threads); }},
            Key{"learner", [](RunConfig &c, const std::string &v) { c.learner = learner_from_string(v); },
                [](const RunConfig &c) { return std::string(to_string(c.learner)); }},
            dbl_key("c", &RunConfig::c),
            dbl_key("n_inf", &RunConfig::n_inf),
            Key{"schedule", [](RunConfig &c, const std::string &v) { c.sched = parse_schedule(v); },
                [](const RunConfig &c) {
                    return std::to_string(c.sched.m0) + "," + std::to_string(c.sched.delta_m) + "," +
                           std::to_string(c.sched.delta_t) + "," + std::to_string(c.sched.m_min);
                }},
            size_key("steps", &RunConfig::steps),
            size_key("snapshot_every", &RunConfig::snapshot_every),
        };
        return table;
    }

    /// "M0,dM,dT,Mmin"
    static MeasurementSchedule parse_schedule(const std::string &text)
    {
        const auto parts = detail::split(text, ',');
        if (parts.size() != 4)
            throw std::invalid_argument("schedule needs four values M0,dM,dT,Mmin, got '" + text + "'");
        MeasurementSchedule s{detail::parse_number<std::size_t>(parts[0]), detail::parse_number<std::size_t>(parts[1]),
                              detail::parse_number<std::size_t>(parts[2]), detail::parse_number<std::size_t>(parts[3])};
        s.validate();
        return s;
    }

    /// Applies one key; unknown keys and bad values throw std::invalid_argument.
    void set(const std::string &key, const std::string &value)
    {
        for (const auto &k : keys())
            if (key == k.name)
            {
                k.set(*this, value);
                return;
            }
        throw std::invalid_argument("unknown key '" + key + "'");
    }

    /// Every key with its resolved value, in table order.
    std::vector<std::pair<std::string, std::string>> resolved() const
    {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto &k : keys())
            out.emplace_back(k.name, k.get(*this));
        return out;
    }

    void validate() const
    {
        campaign().validate();
        episode().sched.validate();
        episode().explore.validate();
        if (steps == 0)
            throw std::invalid_argument("steps must be positive");
    }

    CampaignConfig campaign() const
    {
        CampaignConfig c;
        c.scenario = scenario;
        c.methods = methods;
        c.m_values = m_values;
        c.trials = trials;
        c.seed = scenario.seed;
        c.snr_db = snr_db;
        c.train_count = train_count;
        c.sparsity = sparsity;
        c.gs_iterations = gs_iterations;
        c.optimizer.floor = power_floor;
        c.threads = threads;
        return c;
    }

    EpisodeConfig episode() const
    {
        EpisodeConfig e;
        e.kind = learner;
        e.explore = {c, n_inf};
        e.sched = sched;
        e.optimizer.floor = power_floor;
        e.sparsity = sparsity;
        e.gs_iterations = gs_iterations;
        e.snapshot_every = snapshot_every;
        e.seed = scenario.seed;
        return e;
    }
};

/// Reads `key = value` lines into `cfg` and returns the keys it set.
/// Errors name the source and line.
inline std::set<std::string> load_config(std::istream &in, RunConfig &cfg, const std::string &source = "config")
{
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const auto hash = line.find('#');
        const std::string body = detail::trim(std::string_view(line).substr(0, hash));
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        const auto where = source + ":" + std::to_string(lineno) + ": ";
        if (eq == std::string::npos)
            throw ConfigError(where + "expected 'key = value', got '" + body + "'");
        const std::string key = detail::trim(std::string_view(body).substr(0, eq));
        const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        if (key.empty())
            throw ConfigError(where + "missing key");
        try
        {
            cfg.set(key, value);
            seen.insert(key);
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(where + key + ": " + e.what());
        }
    }
    return seen;
}

} // namespace priorccs

#endif
