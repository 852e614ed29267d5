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

#include "earl/controller.hpp"

#include <chrono>
#include <random>

namespace earl {

Candidate simulate(const ActivationVector& n, const ChannelRealizationSet& channels, const Scenario& scenario,
                   double se_threshold)
{
    const EvaluationResult r = evaluate(channels, n, scenario, se_threshold);
    return {n, r.power.p_total_w, r.r_vio, r.avg_se};
}

ActionSelector greedy_selector(const PolicyParams& params)
{
    return [params](std::span<const double> obs) { return argmax_action(policy_forward(params, obs)); };
}

ActionSelector constant_selector(int num_ru, int delta)
{
    return [num_ru, delta](std::span<const double>) { return std::vector<int>(static_cast<std::size_t>(num_ru), delta); };
}

ActionSelector uniform_random_selector(int num_ru, std::uint64_t seed)
{
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [num_ru, rng](std::span<const double>) {
        std::uniform_int_distribution<int> pick(-1, 1);
        std::vector<int> a(static_cast<std::size_t>(num_ru));
        for (int& x : a)
            x = pick(*rng);
        return a;
    };
}

ActivationVector rollout(AntennaEnv& env, std::shared_ptr<Episode> episode, const ActionSelector& policy,
                         InitMode mode, int steps)
{
    env.reset(mode, std::move(episode));
    const int horizon = steps > 0 ? steps : env.horizon();
    for (int t = 0; t < horizon; ++t) {
        const std::vector<double> obs = env.state().observation();
        env.step(Action(policy(obs)));
    }
    return env.state().n;
}

Candidate select(std::span<const Candidate> candidates)
{
    if (candidates.empty())
        throw ConfigError("no candidates to select from");
    const Candidate* best = &candidates[0];
    for (const Candidate& c : candidates.subspan(1))
        if (c.r_vio < best->r_vio || (c.r_vio == best->r_vio && c.p_total_w < best->p_total_w))
            best = &c;
    return *best;
}

Candidate greedy_refine(const Candidate& start, const PairedEvaluator& evaluator)
{
    Candidate current = start;
    for (int l = 0; l < current.n.size(); ++l) {
        while (current.n[l] > 0) {
            ActivationVector trial = current.n;
            trial.set_clipped(l, trial[l] - 1);
            const Candidate next = evaluator(trial);
            if (next.r_vio > current.r_vio)
                break;
            current = next;
        }
    }
    return current;
}

Candidate greedy_refine(const ActivationVector& n, const ChannelRealizationSet& channels, const Scenario& scenario,
                        double se_threshold)
{
    auto shared = std::make_shared<const ChannelRealizationSet>(channels);
    const PairedEvaluator evaluator(shared, scenario, se_threshold);
    return greedy_refine(evaluator(n), evaluator);
}

InferenceResult earl_infer(const ActionSelector& policy, std::shared_ptr<Episode> episode, const Scenario& scenario,
                           const EnvConfig& env_config, bool refine)
{
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const std::size_t cached = episode->evaluator->cache_size();

    AntennaEnv env(scenario, env_config);
    const PairedEvaluator& evaluator = *episode->evaluator;
    InferenceResult r;
    r.open = evaluator(rollout(env, episode, policy, InitMode::Open));
    r.close = evaluator(rollout(env, episode, policy, InitMode::Close));
    const Candidate both[] = {r.open, r.close};
    r.chosen = select(both);
    if (refine) {
        r.unrefined = r.chosen;
        r.chosen = greedy_refine(r.chosen, evaluator);
    }
    r.runtime_s = std::chrono::duration<double>(clock::now() - t0).count();
    r.evaluations = static_cast<int>(episode->evaluator->cache_size() - cached);
    return r;
}

PolicyScore score_policy(AntennaEnv& env, const ActionSelector& policy, std::span<const std::uint64_t> episode_seeds)
{
    if (episode_seeds.empty())
        throw ConfigError("no episodes to score");
    PolicyScore score;
    long steps = 0;
    for (std::size_t e = 0; e < episode_seeds.size(); ++e) {
        env.reset(e % 2 == 0 ? InitMode::Open : InitMode::Close, episode_seeds[e]);
        bool done = false;
        while (!done) {
            const std::vector<double> obs = env.state().observation();
            const StepResult sr = env.step(Action(policy(obs)));
            score.mean_reward += sr.reward.total;
            ++steps;
            done = sr.done;
        }
        score.mean_final_violation += env.state().r_vio;
        score.mean_final_power_w += env.state().p_total_w;
    }
    score.mean_reward /= static_cast<double>(steps);
    score.mean_final_violation /= static_cast<double>(episode_seeds.size());
    score.mean_final_power_w /= static_cast<double>(episode_seeds.size());
    return score;
}

} // namespace earl
