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

// earl: experiment harness for energy-aware antenna control.

#include "earl/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>

namespace {

using namespace earl;

struct Common {
    std::string scenario_path;
    int num_ue = 0;
    std::string split;
    int realizations = 0;
    std::uint64_t seed = 1;
    std::string checkpoint;
    std::string out;

    void add_to(CLI::App* app, bool with_checkpoint = true)
    {
        app->add_option("--scenario", scenario_path, "Scenario JSON (defaults to the built-in 16-RU layout)");
        app->add_option("--k", num_ue, "Override the number of UEs");
        app->add_option("--split", split, "Functional split: 8 or 7.1");
        app->add_option("--realizations", realizations, "Monte-Carlo realizations per control decision");
        app->add_option("--seed", seed, "Master seed (UE drop and channels)");
        if (with_checkpoint)
            app->add_option("--checkpoint", checkpoint, "Policy checkpoint for rl modes");
        app->add_option("--out", out, "Output CSV path (stdout when omitted)");
    }

    Scenario scenario() const
    {
        Scenario s = scenario_path.empty() ? Scenario{} : load_scenario(scenario_path);
        if (num_ue > 0)
            s.num_ue = num_ue;
        if (!split.empty())
            s.split = parse_split(split);
        if (realizations > 0)
            s.realizations = realizations;
        s.validate();
        return s;
    }

    std::string scenario_name() const
    {
        return scenario_path.empty() ? "default" : std::filesystem::path(scenario_path).stem().string();
    }

    std::unique_ptr<LoadedPolicy> policy() const
    {
        if (checkpoint.empty())
            return nullptr;
        return std::make_unique<LoadedPolicy>(load_policy(checkpoint));
    }

    template <typename Fn>
    void emit(Fn&& write) const
    {
        if (out.empty()) {
            write(std::cout);
            return;
        }
        std::ofstream f(out);
        if (!f)
            throw ConfigError("cannot open output " + out);
        write(f);
    }
};

void print_error(const std::string& kind, const std::string& message)
{
    std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Energy-aware antenna activation for cell-free O-RAN.\n"
                 "Reported runtimes cover the controller only, not deployment or channel generation."};
    app.require_subcommand(1);

    Common run_opts;
    std::string run_mode = "full-on";
    double run_se = 1.5;
    std::string heuristic_weighting = "linear";
    CLI::App* run_cmd = app.add_subcommand("run", "One UE drop, one controller decision");
    run_opts.add_to(run_cmd);
    run_cmd->add_option("--mode", run_mode, "full-on | heuristic | rl | rl-greedy");
    run_cmd->add_option("--se-thr", run_se, "Per-UE SE threshold [bit/s/Hz]");
    run_cmd->add_option("--heuristic-weighting", heuristic_weighting, "linear | shifted-db | magnitude-db");

    Common sweep_opts;
    std::vector<std::string> sweep_modes{"full-on", "heuristic"};
    std::vector<double> sweep_se{0.5, 1.0, 1.5, 2.0};
    int sweep_seeds = 10;
    int sweep_threads = 0;
    std::string sweep_summary;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Cross product of modes, thresholds and seeds");
    sweep_opts.add_to(sweep_cmd);
    sweep_cmd->add_option("--mode", sweep_modes, "Modes to run")->delimiter(',');
    sweep_cmd->add_option("--se-thr", sweep_se, "Thresholds to sweep")->delimiter(',');
    sweep_cmd->add_option("--seeds", sweep_seeds, "Number of UE drops per cell (seed, seed+1, ...)");
    sweep_cmd->add_option("--threads", sweep_threads, "Worker threads (EARL_THREADS caps this)");
    sweep_cmd->add_option("--summary", sweep_summary, "Per-cell summary CSV path");

    Common bd_opts;
    std::vector<std::string> bd_splits{"8", "7.1"};
    std::string bd_n = "full-on";
    double bd_se = 1.5;
    CLI::App* bd_cmd = app.add_subcommand("breakdown", "Power breakdown of one activation under each split");
    bd_opts.add_to(bd_cmd, false);
    bd_cmd->add_option("--splits", bd_splits, "Splits to compare")->delimiter(',');
    bd_cmd->add_option("--n", bd_n, "full-on | heuristic | explicit counts like 8;8;0;4");
    bd_cmd->add_option("--se-thr", bd_se, "SE target used for the GOPS scaling");

    Common bench_opts;
    std::vector<std::string> bench_modes{"heuristic", "rl", "rl-greedy"};
    int bench_reps = 10;
    double bench_se = 1.5;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Controller wall-clock time per mode");
    bench_opts.add_to(bench_cmd);
    bench_cmd->add_option("--mode", bench_modes, "Modes to time")->delimiter(',');
    bench_cmd->add_option("--repetitions", bench_reps, "UE drops per mode");
    bench_cmd->add_option("--se-thr", bench_se, "Per-UE SE threshold [bit/s/Hz]");

    Common train_opts;
    double train_se = 1.5;
    int train_epochs = 1000;
    long train_steps = 10'000'000;
    std::string train_curve;
    std::uint64_t train_seed = 7;
    CLI::App* train_cmd = app.add_subcommand("train", "Train a policy with PPO; --out names the checkpoint");
    train_opts.add_to(train_cmd, false);
    train_cmd->add_option("--se-thr", train_se, "Per-UE SE threshold [bit/s/Hz]");
    train_cmd->add_option("--max-epochs", train_epochs, "Upper bound on collection/update cycles");
    train_cmd->add_option("--total-steps", train_steps, "Upper bound on environment steps");
    train_cmd->add_option("--curve", train_curve, "Training curve CSV path");
    train_cmd->add_option("--train-seed", train_seed, "Seed for initialization, sampling and episode drops");

    try {
        app.parse(argc, argv);

        if (*run_cmd) {
            const auto policy = run_opts.policy();
            RunRequest req;
            req.scenario = run_opts.scenario();
            req.scenario_name = run_opts.scenario_name();
            req.mode = parse_mode(run_mode);
            req.se_thr = run_se;
            req.seed = run_opts.seed;
            req.policy = policy.get();
            req.weighting = parse_heuristic_weighting(heuristic_weighting);
            const RunRecord rec = run(req);
            run_opts.emit([&](std::ostream& o) { write_run_csv(o, {rec}); });
        } else if (*sweep_cmd) {
            const auto policy = sweep_opts.policy();
            SweepRequest req;
            req.base.scenario = sweep_opts.scenario();
            req.base.scenario_name = sweep_opts.scenario_name();
            req.base.policy = policy.get();
            for (const std::string& m : sweep_modes)
                req.modes.push_back(parse_mode(m));
            req.se_thresholds = sweep_se;
            for (int i = 0; i < sweep_seeds; ++i)
                req.seeds.push_back(sweep_opts.seed + static_cast<std::uint64_t>(i));
            req.threads = sweep_threads;
            const SweepResult res = sweep(req);
            sweep_opts.emit([&](std::ostream& o) { write_run_csv(o, res.records); });
            if (!sweep_summary.empty()) {
                std::ofstream f(sweep_summary);
                if (!f)
                    throw ConfigError("cannot open output " + sweep_summary);
                write_sweep_csv(f, res.cells);
            } else {
                write_sweep_csv(std::cerr, res.cells);
            }
        } else if (*bd_cmd) {
            std::vector<Split> splits;
            for (const std::string& s : bd_splits)
                splits.push_back(parse_split(s));
            const auto rows = breakdown(bd_opts.scenario(), splits, bd_n, bd_se, bd_opts.seed);
            bd_opts.emit([&](std::ostream& o) { write_breakdown_csv(o, rows); });
        } else if (*bench_cmd) {
            const auto policy = bench_opts.policy();
            RunRequest base;
            base.scenario = bench_opts.scenario();
            base.scenario_name = bench_opts.scenario_name();
            base.se_thr = bench_se;
            base.seed = bench_opts.seed;
            base.policy = policy.get();
            std::vector<Mode> modes;
            for (const std::string& m : bench_modes)
                modes.push_back(parse_mode(m));
            const auto rows = bench(base, modes, bench_reps);
            bench_opts.emit([&](std::ostream& o) { write_bench_csv(o, rows); });
        } else if (*train_cmd) {
            if (train_opts.out.empty())
                throw ConfigError("train needs --out <checkpoint path>");
            const Scenario sc = train_opts.scenario();
            EnvConfig env;
            env.se_threshold = train_se;
            TrainConfig tc;
            tc.max_epochs = train_epochs;
            tc.seed = train_seed;
            const TrainResult res = train([&] { return AntennaEnv(sc, env); }, tc, train_steps,
                                          [](const CurvePoint& p) {
                                              std::cerr << "epoch " << p.epoch << " reward " << p.mean_reward
                                                        << " violation " << p.mean_violation << " lambda " << p.lambda
                                                        << " kl " << p.kl << '\n';
                                          });
            save_checkpoint(train_opts.out, res.params);
            if (!train_curve.empty())
                write_curve_csv(train_curve, res.curve);
            std::cerr << "saved " << train_opts.out << " after " << res.curve.size() << " epochs"
                      << (res.early_stopped ? " (early stop)" : "") << '\n';
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        print_error("config", e.what());
        return 2;
    } catch (const NumericalError& e) {
        print_error("numerical", e.what());
        return 3;
    } catch (const InfeasibleConfiguration& e) {
        print_error("infeasible", e.what());
        return 4;
    } catch (const TrainingDiverged& e) {
        print_error("diverged", e.what());
        return 5;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
    return 0;
}
