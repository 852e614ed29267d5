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

#ifndef EARL_RLENV_HPP
#define EARL_RLENV_HPP

#include "earl/activation.hpp"
#include "earl/channel.hpp"
#include "earl/downlink.hpp"
#include "earl/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace earl {

enum class InitMode { Open, Close };

std::string to_string(InitMode mode);

// Total power and violation of one activation on a fixed realization batch.
struct Candidate {
    ActivationVector n;
    double p_total_w = 0.0;
    double r_vio = 1.0;
    double avg_se = 0.0;
};

// Memoized evaluate + total_power on a shared batch. Every comparison made
// through one instance is paired (same realizations).
class PairedEvaluator {
public:
    PairedEvaluator(std::shared_ptr<const ChannelRealizationSet> channels, Scenario scenario, double se_threshold);

    Candidate operator()(const ActivationVector& n) const;
    EvaluationResult evaluate(const ActivationVector& n) const;

    const ChannelRealizationSet& channels() const { return *channels_; }
    const Scenario& scenario() const { return scenario_; }
    double se_threshold() const { return se_threshold_; }
    std::size_t cache_size() const { return cache_.size(); }

private:
    std::shared_ptr<const ChannelRealizationSet> channels_;
    Scenario scenario_;
    double se_threshold_;
    mutable std::map<std::vector<int>, Candidate> cache_;
};

// One UE drop: positions, realization batch and the full-on power used to
// normalize observations.
struct Episode {
    std::uint64_t seed = 0;
    Deployment deployment;
    Eigen::MatrixXd gain_db;        // L x K
    std::shared_ptr<const ChannelRealizationSet> channels;
    std::shared_ptr<PairedEvaluator> evaluator;
    double p_full_w = 0.0;
};

std::shared_ptr<Episode> make_episode(const Scenario& scenario, std::uint64_t episode_seed, double se_threshold);

struct EnvConfig {
    double se_threshold = 1.5;
    double lambda0 = 0.3;
    double eta = 0.05;
    double r_star = 0.05;
    double clip_penalty = 0.05;
    double shutdown_penalty = 1.0;
    int horizon = 0;                // 0 selects 2N

    void validate() const;
};

struct Action {
    std::vector<int> delta;         // each in {-1, 0, +1}

    explicit Action(std::vector<int> d);
    static Action zeros(int num_ru) { return Action(std::vector<int>(static_cast<std::size_t>(num_ru), 0)); }
};

struct RewardTerms {
    double antenna_term = 0.0;      // -sum n / (L N)
    double violation_term = 0.0;    // -lambda r_vio
    double infeasibility = 0.0;     // -zeta
    double total = 0.0;
};

struct EnvState {
    std::vector<double> phi;        // L*K, index l + L*k, in [0, 1]
    ActivationVector n;
    double p_norm = 0.0;
    double r_vio = 1.0;
    double p_total_w = 0.0;

    // [phi, n / N, p_norm, r_vio]
    std::vector<double> observation() const;
};

struct StepResult {
    const EnvState& state;
    RewardTerms reward;
    bool done = false;
};

struct TraceRow {
    int t = 0;
    std::string n;
    std::string action;
    double reward = 0.0;
    double zeta = 0.0;
    double r_vio = 0.0;
    double p_norm = 0.0;
};

// lambda' = max(0, lambda + eta (mean_violation - r_star))
double update_lambda(double lambda, double mean_violation, double eta, double r_star);

class AntennaEnv {
public:
    AntennaEnv(Scenario scenario, EnvConfig config);

    const EnvState& reset(InitMode mode, std::uint64_t episode_seed);
    const EnvState& reset(InitMode mode, std::shared_ptr<Episode> episode);
    StepResult step(const Action& action);

    int num_ru() const { return scenario_.num_ru; }
    int observation_size() const { return scenario_.num_ru * scenario_.num_ue + scenario_.num_ru + 2; }
    int horizon() const;
    int time() const { return t_; }
    const EnvState& state() const { return state_; }
    const Episode& episode() const { return *episode_; }
    std::shared_ptr<Episode> episode_ptr() const { return episode_; }
    const Scenario& scenario() const { return scenario_; }
    const EnvConfig& config() const { return config_; }

    double lambda() const { return lambda_; }
    void set_lambda(double lambda);

    void set_tracing(bool on) { tracing_ = on; }
    const std::vector<TraceRow>& trace() const { return trace_; }
    void write_trace_csv(const std::filesystem::path& path) const;

private:
    void refresh();

    Scenario scenario_;
    EnvConfig config_;
    double lambda_;
    std::shared_ptr<Episode> episode_;
    EnvState state_;
    int t_ = 0;
    bool tracing_ = false;
    std::vector<TraceRow> trace_;
};

} // namespace earl

#endif
