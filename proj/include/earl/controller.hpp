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

#ifndef EARL_CONTROLLER_HPP
#define EARL_CONTROLLER_HPP

#include "earl/ppo.hpp"
#include "earl/rlenv.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace earl {

// Total power and violation of n on the given batch.
Candidate simulate(const ActivationVector& n, const ChannelRealizationSet& channels, const Scenario& scenario,
                   double se_threshold);

// Maps an observation to per-RU deltas in {-1, 0, +1}.
using ActionSelector = std::function<std::vector<int>(std::span<const double> observation)>;

ActionSelector greedy_selector(const PolicyParams& params);
ActionSelector constant_selector(int num_ru, int delta);
ActionSelector uniform_random_selector(int num_ru, std::uint64_t seed);

// Starts from the mode's initial n and applies `steps` actions (0 = the
// environment horizon). The environment must share the episode's scenario.
ActivationVector rollout(AntennaEnv& env, std::shared_ptr<Episode> episode, const ActionSelector& policy,
                         InitMode mode, int steps = 0);

// Lexicographic minimum by (r_vio, p_total_w). Throws ConfigError when empty.
Candidate select(std::span<const Candidate> candidates);

// Single sweep over RUs in index order; n_l is decremented while r_vio does
// not increase.
Candidate greedy_refine(const Candidate& start, const PairedEvaluator& evaluator);
Candidate greedy_refine(const ActivationVector& n, const ChannelRealizationSet& channels, const Scenario& scenario,
                        double se_threshold);

struct InferenceResult {
    Candidate chosen;
    Candidate open;
    Candidate close;
    std::optional<Candidate> unrefined;   // set when refinement ran
    double runtime_s = 0.0;
    int evaluations = 0;
};

InferenceResult earl_infer(const ActionSelector& policy, std::shared_ptr<Episode> episode, const Scenario& scenario,
                           const EnvConfig& env_config, bool refine);

struct PolicyScore {
    double mean_reward = 0.0;          // per step
    double mean_final_violation = 0.0; // r_vio at the end of each episode
    double mean_final_power_w = 0.0;
};

// Runs one episode per seed, alternating open/close starts, at a fixed lambda.
PolicyScore score_policy(AntennaEnv& env, const ActionSelector& policy, std::span<const std::uint64_t> episode_seeds);

} // namespace earl

#endif
