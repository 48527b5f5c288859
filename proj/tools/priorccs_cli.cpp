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


#include <priorccs/priorccs.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

namespace fs = std::filesystem;
using namespace priorccs;

namespace
{
struct Flags
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> n;
    std::string m;
    std::optional<double> snr_db;
    std::string learner;
    std::string schedule;
    std::string out = "out";
    std::string input;
};

void add_common(CLI::App *sub, Flags &f)
{
    sub->add_option("--config", f.config, "flat key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("--trials", f.trials, "trial count (episode length for `online`)");
    sub->add_option("--n", f.n, "array side N");
    sub->add_option("--m", f.m, "measurement budget(s), comma separated");
    sub->add_option("--snr-db", f.snr_db, "quasi-omni SNR in dB");
    sub->add_option("--out", f.out, "output directory");
}

// Config file first, then explicit flags.
std::pair<RunConfig, std::set<std::string>> resolve(const Flags &f)
{
    RunConfig cfg;
    std::set<std::string> seen;
    if (!f.config.empty())
    {
        std::ifstream in(f.config);
        if (!in)
            throw std::runtime_error("cannot open config " + f.config);
        seen = load_config(in, cfg, f.config);
    }
    auto apply = [&](const char *key, const std::string &value) {
        cfg.set(key, value);
        seen.insert(key);
    };
    if (f.seed)
        apply("seed", std::to_string(*f.seed));
    if (f.n)
        apply("n", std::to_string(*f.n));
    if (!f.m.empty())
        apply("m_values", f.m);
    if (f.snr_db)
        apply("snr_db", detail::fmt(*f.snr_db));
    if (!f.learner.empty())
        apply("learner", f.learner);
    if (!f.schedule.empty())
        apply("schedule", f.schedule);
    return {cfg, seen};
}

HeaderLines header_for(const std::string &command, const RunConfig &cfg)
{
    HeaderLines h{{"command", command}};
    for (auto &kv : cfg.resolved())
        h.push_back(kv);
    return h;
}

std::ofstream open_out(const fs::path &p)
{
    std::ofstream os(p);
    if (!os)
        throw std::runtime_error("cannot write " + p.string());
    return os;
}

void run_generate(const Flags &f)
{
    auto [cfg, seen] = resolve(f);
    if (f.trials)
        cfg.trials = *f.trials;
    cfg.validate();
    fs::create_directories(f.out);
    const ChannelGenerator gen(cfg.scenario);
    const auto ens = gen.ensemble(cfg.trials, cfg.snr_db, 0, cfg.threads);
    const auto header = header_for("generate", cfg);
    {
        auto os = open_out(fs::path(f.out) / "ensemble.csv");
        write_ensemble_csv(os, ens, 0, header);
    }
    const AoDPrior prior = empirical_prior(ens);
    ComplexGrid pg(cfg.scenario.n);
    for (std::size_t k = 0; k < prior.size(); ++k)
        pg[k] = prior[k];
    auto os = open_out(fs::path(f.out) / "prior.csv");
    write_grid(os, pg, header);
    std::cout << "generated " << ens.size() << " realizations, sigma2=" << ens.front().sigma2
              << ", prior entropy=" << prior.entropy() << " nats\n";
}

void run_campaign_command(const Flags &f, const std::string &command, std::vector<Method> default_methods)
{
    auto [cfg, seen] = resolve(f);
    if (f.trials)
        cfg.trials = *f.trials;
    if (!seen.contains("methods"))
        cfg.methods = std::move(default_methods);
    cfg.validate();
    fs::create_directories(f.out);
    const auto result = run_campaign(cfg.campaign());
    const auto header = header_for(command, cfg);
    {
        auto os = open_out(fs::path(f.out) / (command + "_records.csv"));
        write_header(os, header);
        write_records_csv(os, result.records);
    }
    {
        auto os = open_out(fs::path(f.out) / (command + "_summary.csv"));
        write_header(os, header);
        write_summary_csv(os, result.summary);
    }
    if (std::find(cfg.methods.begin(), cfg.methods.end(), Method::ccs_prior) != cfg.methods.end())
    {
        auto os = open_out(fs::path(f.out) / "prior_mask.csv");
        write_grid(os, result.prior_mask, header);
    }
    write_summary_csv(std::cout, result.summary);
}

void run_online(const Flags &f)
{
    auto [cfg, seen] = resolve(f);
    if (f.trials)
        cfg.steps = *f.trials;
    cfg.validate();
    fs::create_directories(f.out);
    const ChannelGenerator gen(cfg.scenario);
    const auto ens = gen.ensemble(cfg.steps, cfg.snr_db, 0, cfg.threads);
    const auto res = run_episode(ens, cfg.episode());
    const auto header = header_for("online", cfg);
    {
        auto os = open_out(fs::path(f.out) / "trajectory.jsonl");
        write_trajectory_jsonl(os, res.trajectory, header);
    }
    for (const auto &snap : res.snapshots)
    {
        auto os = open_out(fs::path(f.out) / ("mask_t" + std::to_string(snap.t) + ".csv"));
        auto h = header;
        h.emplace_back("t", std::to_string(snap.t));
        write_grid(os, snap.magnitude, h);
    }
    const auto &last = res.trajectory.back();
    std::cout << "learner=" << to_string(cfg.learner) << " steps=" << res.trajectory.size()
              << " final_hellinger=" << last.hellinger << "\n";
}

void run_report(const Flags &f)
{
    const fs::path in = f.input.empty() ? fs::path(f.out) / "offline_records.csv" : fs::path(f.input);
    std::ifstream is(in);
    if (!is)
        throw std::runtime_error("cannot open records " + in.string());
    const auto records = read_records_csv(is);
    if (records.empty())
        throw std::runtime_error("no records in " + in.string());
    write_summary_csv(std::cout, summarize(records));
}
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Prior-aided 2D convolutional compressive sensing beam alignment"};
    app.require_subcommand(1);
    Flags f;

    auto *gen = app.add_subcommand("generate", "draw a channel ensemble and its empirical AoD prior");
    add_common(gen, f);
    auto *offline = app.add_subcommand("offline", "perfect-prior vs uniform mask 2D-CCS campaign");
    add_common(offline, f);
    auto *online = app.add_subcommand("online", "online prior learning episode");
    add_common(online, f);
    online->add_option("--learner", f.learner, "learner kind")
        ->check(CLI::IsMember({"ucb", "regmask", "noexplore", "oracle"}));
    online->add_option("--schedule", f.schedule, "measurement schedule M0,dM,dT,Mmin");
    auto *sweep = app.add_subcommand("sweep", "beam sweep baselines");
    add_common(sweep, f);
    auto *report = app.add_subcommand("report", "aggregate a records CSV");
    report->add_option("--out", f.out, "directory holding offline_records.csv");
    report->add_option("--input", f.input, "records CSV to aggregate");

    CLI11_PARSE(app, argc, argv);
    try
    {
        if (*gen)
            run_generate(f);
        else if (*offline)
            run_campaign_command(f, "offline", {Method::perfect_csi, Method::ccs_prior, Method::ccs_uniform});
        else if (*online)
            run_online(f);
        else if (*sweep)
            run_campaign_command(f, "sweep", {Method::perfect_csi, Method::exhaustive, Method::top_m});
        else if (*report)
            run_report(f);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
