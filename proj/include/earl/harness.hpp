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

#ifndef EARL_HARNESS_HPP
#define EARL_HARNESS_HPP

#include "earl/controller.hpp"
#include "earl/heuristic.hpp"
#include "earl/powermodel.hpp"
#include "earl/ppo.hpp"
#include "earl/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace earl {

enum class Mode { FullOn, Heuristic, Rl, RlGreedy };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct LoadedPolicy {
    PolicyParams params;
    std::string path;
    std::string hash;   // FNV-1a of the file bytes, hex
};

LoadedPolicy load_policy(const std::filesystem::path& path);

struct RunRecord {
    std::string mode;
    std::string split;
    int num_ue = 0;
    double se_thr = 0.0;
    std::uint64_t seed = 0;
    std::string scenario;
    std::string checkpoint_hash;
    double p_total_w = 0.0;
    double p_ru_radio_w = 0.0;
    double p_ru_proc_w = 0.0;
    double p_fh_w = 0.0;
    double p_cloud_w = 0.0;
    double p_fh_cloud_w = 0.0;
    double avg_se = 0.0;
    double r_vio = 0.0;
    double runtime_s = 0.0;
    std::string n;
};

struct RunRequest {
    Scenario scenario;
    std::string scenario_name = "default";
    Mode mode = Mode::FullOn;
    double se_thr = 1.5;
    std::uint64_t seed = 1;
    const LoadedPolicy* policy = nullptr;   // required for rl modes
    EnvConfig env;                          // se_threshold is overridden by se_thr
    HeuristicWeighting weighting = HeuristicWeighting::LinearShare;
};

// One UE drop, one controller call (timed), one evaluation on the same batch.
// The timer excludes deployment and channel generation.
RunRecord run(const RunRequest& request);

struct SweepRequest {
    RunRequest base;
    std::vector<Mode> modes;
    std::vector<double> se_thresholds;
    std::vector<std::uint64_t> seeds;
    int threads = 0;   // 0: EARL_THREADS or hardware concurrency
};

struct SweepCell {
    std::string mode;
    double se_thr = 0.0;
    int runs = 0;
    double mean_p_total_w = 0.0;
    double mean_r_vio = 0.0;
    double mean_avg_se = 0.0;
    double mean_runtime_s = 0.0;
};

struct SweepResult {
    std::vector<RunRecord> records;   // mode-major, then threshold, then seed
    std::vector<SweepCell> cells;     // one per (mode, threshold)
};

SweepResult sweep(const SweepRequest& request);

// Worker count: explicit value if > 0, else EARL_THREADS, else hardware
// concurrency; capped by EARL_THREADS when that is set.
int worker_count(int requested, std::size_t jobs);

struct BreakdownRow {
    std::string split;
    std::string n;
    PowerBreakdown power;
};

// n_source: "full-on", "heuristic" or an explicit list "8;8;0;...".
std::vector<BreakdownRow> breakdown(const Scenario& scenario, const std::vector<Split>& splits,
                                    const std::string& n_source, double se_thr, std::uint64_t seed);

struct BenchRow {
    std::string mode;
    int repetitions = 0;
    double mean_s = 0.0;
    double std_s = 0.0;
};

std::vector<BenchRow> bench(const RunRequest& base, const std::vector<Mode>& modes, int repetitions);

std::string run_csv_header();
void write_run_csv(std::ostream& out, const std::vector<RunRecord>& records, bool header = true);
void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);
void write_breakdown_csv(std::ostream& out, const std::vector<BreakdownRow>& rows);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

} // namespace earl

#endif
