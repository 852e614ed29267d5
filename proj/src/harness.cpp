// SPDX-License-Identifier: Apache-2.0
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

#include "earl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iterator>
#include <map>
#include <thread>

namespace earl {

std::string to_string(Mode mode)
{
    switch (mode) {
    case Mode::FullOn:
        return "full-on";
    case Mode::Heuristic:
        return "heuristic";
    case Mode::Rl:
        return "rl";
    case Mode::RlGreedy:
        return "rl-greedy";
    }
    return "unknown";
}

Mode parse_mode(const std::string& text)
{
    for (Mode m : {Mode::FullOn, Mode::Heuristic, Mode::Rl, Mode::RlGreedy})
        if (text == to_string(m))
            return m;
    throw ConfigError("unknown mode '" + text + "'");
}

LoadedPolicy load_policy(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open checkpoint " + path.string());
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return {load_checkpoint(path), path.string(), hex64(fnv1a64(bytes))};
}

RunRecord run(const RunRequest& req)
{
    const Scenario& sc = req.scenario;
    sc.validate();
    const bool rl = req.mode == Mode::Rl || req.mode == Mode::RlGreedy;
    if (rl) {
        if (!req.policy)
            throw ConfigError("mode " + to_string(req.mode) + " requires --checkpoint");
        const PolicyParams& p = req.policy->params;
        if (p.num_ru != sc.num_ru || p.obs_dim != sc.num_ru * sc.num_ue + sc.num_ru + 2)
            throw ConfigError("checkpoint was trained for a different (L, K); expected L=" + std::to_string(sc.num_ru) +
                              " K=" + std::to_string(sc.num_ue));
    }

    EnvConfig env = req.env;
    env.se_threshold = req.se_thr;
    const std::shared_ptr<Episode> episode = make_episode(sc, req.seed, req.se_thr);

    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    ActivationVector n;
    switch (req.mode) {
    case Mode::FullOn:
        n = ActivationVector::full(sc.num_ru, sc.antennas_per_ru);
        break;
    case Mode::Heuristic:
        n = heuristic_allocate(episode->gain_db, sc.antennas_per_ru, 1.0, req.weighting);
        break;
    case Mode::Rl:
    case Mode::RlGreedy:
        n = earl_infer(greedy_selector(req.policy->params), episode, sc, env, req.mode == Mode::RlGreedy).chosen.n;
        break;
    }
    const double runtime = std::chrono::duration<double>(clock::now() - t0).count();

    const EvaluationResult e = episode->evaluator->evaluate(n);
    RunRecord r;
    r.mode = to_string(req.mode);
    r.split = to_string(sc.split);
    r.num_ue = sc.num_ue;
    r.se_thr = req.se_thr;
    r.seed = req.seed;
    r.scenario = req.scenario_name;
    r.checkpoint_hash = rl ? req.policy->hash : "";
    r.p_total_w = e.power.p_total_w;
    r.p_ru_radio_w = e.power.p_ru_radio_w;
    r.p_ru_proc_w = e.power.p_ru_proc_w;
    r.p_fh_w = e.power.p_fh_ru_w;
    r.p_cloud_w = e.power.p_cloud_w;
    r.p_fh_cloud_w = e.power.p_fh_cloud_w;
    r.avg_se = e.avg_se;
    r.r_vio = e.r_vio;
    r.runtime_s = std::max(runtime, 1e-9);
    r.n = n.to_string();
    return r;
}

int worker_count(int requested, std::size_t jobs)
{
    int cap = 0;
    if (const char* env = std::getenv("EARL_THREADS")) {
        try {
            cap = std::stoi(env);
        } catch (const std::logic_error&) {
            throw ConfigError(std::string("EARL_THREADS must be an integer, got '") + env + "'");
        }
        if (cap <= 0)
            throw ConfigError("EARL_THREADS must be positive");
    }
    int n = requested > 0 ? requested : (cap > 0 ? cap : static_cast<int>(std::thread::hardware_concurrency()));
    if (cap > 0)
        n = std::min(n, cap);
    n = std::max(1, n);
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(jobs, 1)));
}

SweepResult sweep(const SweepRequest& req)
{
    std::vector<RunRequest> jobs;
    for (Mode m : req.modes)
        for (double se : req.se_thresholds)
            for (std::uint64_t seed : req.seeds) {
                RunRequest r = req.base;
                r.mode = m;
                r.se_thr = se;
                r.seed = seed;
                jobs.push_back(std::move(r));
            }

    SweepResult out;
    out.records.resize(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                out.records[i] = run(jobs[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int threads = worker_count(req.threads, jobs.size());
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool)
        t.join();
    for (const std::exception_ptr& e : errors)
        if (e)
            std::rethrow_exception(e);

    for (std::size_t start = 0; start < out.records.size(); start += req.seeds.size()) {
        const std::size_t end = std::min(out.records.size(), start + req.seeds.size());
        SweepCell cell;
        cell.mode = out.records[start].mode;
        cell.se_thr = out.records[start].se_thr;
        cell.runs = static_cast<int>(end - start);
        for (std::size_t i = start; i < end; ++i) {
            cell.mean_p_total_w += out.records[i].p_total_w;
            cell.mean_r_vio += out.records[i].r_vio;
            cell.mean_avg_se += out.records[i].avg_se;
            cell.mean_runtime_s += out.records[i].runtime_s;
        }
        cell.mean_p_total_w /= cell.runs;
        cell.mean_r_vio /= cell.runs;
        cell.mean_avg_se /= cell.runs;
        cell.mean_runtime_s /= cell.runs;
        out.cells.push_back(cell);
    }
    return out;
}

std::vector<BreakdownRow> breakdown(const Scenario& scenario, const std::vector<Split>& splits,
                                    const std::string& n_source, double se_thr, std::uint64_t seed)
{
    if (splits.empty())
        throw ConfigError("no splits requested");
    scenario.validate();
    const std::shared_ptr<Episode> episode = make_episode(scenario, seed, se_thr);
    ActivationVector n;
    if (n_source == "full-on")
        n = ActivationVector::full(scenario.num_ru, scenario.antennas_per_ru);
    else if (n_source == "heuristic")
        n = heuristic_allocate(episode->gain_db, scenario.antennas_per_ru);
    else
        n = ActivationVector::parse(n_source, scenario.antennas_per_ru);
    if (n.size() != scenario.num_ru)
        throw ConfigError("activation length does not match the scenario");

    // Radiated power does not depend on the split.
    const EvaluationResult e = episode->evaluator->evaluate(n);
    std::vector<BreakdownRow> rows;
    for (Split split : splits) {
        Scenario s = scenario;
        s.split = split;
        rows.push_back({to_string(split), n.to_string(), total_power(s, n, e.radiated_w, se_thr)});
    }
    return rows;
}

std::vector<BenchRow> bench(const RunRequest& base, const std::vector<Mode>& modes, int repetitions)
{
    if (repetitions <= 0)
        throw ConfigError("repetitions must be positive");
    std::vector<BenchRow> rows;
    for (Mode m : modes) {
        std::vector<double> times;
        for (int rep = 0; rep < repetitions; ++rep) {
            RunRequest r = base;
            r.mode = m;
            r.seed = base.seed + static_cast<std::uint64_t>(rep);
            times.push_back(run(r).runtime_s);
        }
        BenchRow row;
        row.mode = to_string(m);
        row.repetitions = repetitions;
        row.mean_s = pairwise_mean(times);
        if (repetitions > 1) {
            double sq = 0.0;
            for (double t : times)
                sq += (t - row.mean_s) * (t - row.mean_s);
            row.std_s = std::sqrt(sq / (repetitions - 1));
        }
        rows.push_back(row);
    }
    return rows;
}

std::string run_csv_header()
{
    return "mode,split,K,se_thr,seed,scenario,checkpoint_hash,p_total_w,p_ru_radio_w,p_ru_proc_w,p_fh_w,p_cloud_w,"
           "p_fh_cloud_w,avg_se,r_vio,runtime_s,n";
}

void write_run_csv(std::ostream& out, const std::vector<RunRecord>& records, bool header)
{
    if (header)
        out << run_csv_header() << '\n';
    const auto precision = out.precision(12);
    for (const RunRecord& r : records)
        out << r.mode << ',' << r.split << ',' << r.num_ue << ',' << r.se_thr << ',' << r.seed << ',' << r.scenario
            << ',' << r.checkpoint_hash << ',' << r.p_total_w << ',' << r.p_ru_radio_w << ',' << r.p_ru_proc_w << ','
            << r.p_fh_w << ',' << r.p_cloud_w << ',' << r.p_fh_cloud_w << ',' << r.avg_se << ',' << r.r_vio << ','
            << r.runtime_s << ',' << r.n << '\n';
    out.precision(precision);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells)
{
    out << "mode,se_thr,runs,mean_p_total_w,mean_r_vio,mean_avg_se,mean_runtime_s\n";
    const auto precision = out.precision(12);
    for (const SweepCell& c : cells)
        out << c.mode << ',' << c.se_thr << ',' << c.runs << ',' << c.mean_p_total_w << ',' << c.mean_r_vio << ','
            << c.mean_avg_se << ',' << c.mean_runtime_s << '\n';
    out.precision(precision);
}

void write_breakdown_csv(std::ostream& out, const std::vector<BreakdownRow>& rows)
{
    out << "split,p_ru_radio_w,p_ru_proc_w,p_fh_w,p_cloud_w,p_fh_cloud_w,p_total_w,n\n";
    const auto precision = out.precision(12);
    for (const BreakdownRow& r : rows)
        out << r.split << ',' << r.power.p_ru_radio_w << ',' << r.power.p_ru_proc_w << ',' << r.power.p_fh_ru_w << ','
            << r.power.p_cloud_w << ',' << r.power.p_fh_cloud_w << ',' << r.power.p_total_w << ',' << r.n << '\n';
    out.precision(precision);
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows)
{
    out << "mode,repetitions,mean_s,std_s\n";
    const auto precision = out.precision(12);
    for (const BenchRow& r : rows)
        out << r.mode << ',' << r.repetitions << ',' << r.mean_s << ',' << r.std_s << '\n';
    out.precision(precision);
}

} // namespace earl
