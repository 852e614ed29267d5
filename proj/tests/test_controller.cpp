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

#include <gtest/gtest.h>

#include <random>

using namespace earl;

namespace {

Scenario tiny()
{
    Scenario s;
    s.num_ru = 2;
    s.antennas_per_ru = 2;
    s.num_ue = 1;
    s.area_side_m = 100.0;
    s.realizations = 50;
    return s;
}

Scenario desk()
{
    Scenario s;
    s.num_ru = 4;
    s.antennas_per_ru = 3;
    s.num_ue = 2;
    s.area_side_m = 200.0;
    s.realizations = 30;
    return s;
}

std::vector<ActivationVector> all_activations(int L, int N)
{
    std::vector<ActivationVector> out;
    std::vector<int> c(static_cast<std::size_t>(L), 0);
    while (true) {
        out.emplace_back(c, N);
        int l = 0;
        while (l < L && ++c[l] > N)
            c[l++] = 0;
        if (l == L)
            return out;
    }
}

} // namespace

TEST(Select, ViolationFirstThenPower)
{
    const ActivationVector n = ActivationVector::full(1, 1);
    const std::vector<Candidate> a{{n, 300.0, 0.25}, {n, 900.0, 0.0}};
    EXPECT_EQ(select(a).p_total_w, 900.0);
    const std::vector<Candidate> b{{n, 300.0, 0.0}, {n, 900.0, 0.0}};
    EXPECT_EQ(select(b).p_total_w, 300.0);
    const std::vector<Candidate> c{{n, 500.0, 0.5}};
    EXPECT_EQ(select(c).p_total_w, 500.0);
    EXPECT_THROW(select(std::span<const Candidate>{}), ConfigError);
}

TEST(Simulate, OffAndRepeatable)
{
    const Scenario s = tiny();
    const ChannelRealizationSet set = generate_channels(s, build_deployment(s, 1), 50, 1);
    EXPECT_EQ(simulate(ActivationVector::zeros(2, 2), set, s, 1.0).r_vio, 1.0);
    const Candidate a = simulate(ActivationVector({1, 2}, 2), set, s, 1.0);
    const Candidate b = simulate(ActivationVector({1, 2}, 2), set, s, 1.0);
    EXPECT_EQ(a.p_total_w, b.p_total_w);
    EXPECT_EQ(a.r_vio, b.r_vio);
}

TEST(Simulate, FullOnHasMinimalViolation)
{
    const Scenario s = tiny();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const ChannelRealizationSet set = generate_channels(s, build_deployment(s, seed), 50, seed);
        for (double thr : {2.0, 6.0, 9.0}) {
            const double full = simulate(ActivationVector::full(2, 2), set, s, thr).r_vio;
            for (const ActivationVector& n : all_activations(2, 2))
                EXPECT_LE(full, simulate(n, set, s, thr).r_vio) << n.to_string();
        }
    }
}

TEST(Rollout, ConstantPolicies)
{
    const Scenario s = desk();
    AntennaEnv env(s, EnvConfig{});
    const auto ep = make_episode(s, 3, 1.5);
    EXPECT_EQ(rollout(env, ep, constant_selector(4, 0), InitMode::Open), ActivationVector::full(4, 3));
    EXPECT_EQ(rollout(env, ep, constant_selector(4, 1), InitMode::Close, 3), ActivationVector::full(4, 3));
    EXPECT_EQ(rollout(env, ep, constant_selector(4, -1), InitMode::Open), ActivationVector::zeros(4, 3));
}

TEST(Rollout, DeterministicPolicyRepeats)
{
    const Scenario s = desk();
    AntennaEnv env(s, EnvConfig{});
    const auto ep = make_episode(s, 3, 1.5);
    const PolicyParams p = PolicyParams::initialize(env.observation_size(), 4, {16}, 4);
    const ActivationVector a = rollout(env, ep, greedy_selector(p), InitMode::Close);
    const ActivationVector b = rollout(env, ep, greedy_selector(p), InitMode::Close);
    EXPECT_EQ(a, b);
}

TEST(Refine, StartAtZeroIsUnchanged)
{
    const Scenario s = desk();
    const ChannelRealizationSet set = generate_channels(s, build_deployment(s, 2), 30, 2);
    const Candidate r = greedy_refine(ActivationVector::zeros(4, 3), set, s, 1.5);
    EXPECT_TRUE(r.n.all_zero());
    EXPECT_EQ(r.r_vio, 1.0);
}

TEST(Refine, NeverWorseThanStart)
{
    const Scenario s = desk();
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> count(0, 3);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto ep = make_episode(s, seed, 4.0);
        ActivationVector n({count(rng), count(rng), count(rng), count(rng)}, 3);
        const Candidate start = (*ep->evaluator)(n);
        const std::size_t before = ep->evaluator->cache_size();
        const Candidate end = greedy_refine(start, *ep->evaluator);
        EXPECT_LE(end.n.total(), start.n.total());
        EXPECT_LE(end.r_vio, start.r_vio);
        EXPECT_LE(end.p_total_w, start.p_total_w);
        EXPECT_TRUE(end.n.dominated_by(start.n));
        EXPECT_LE(ep->evaluator->cache_size() - before, static_cast<std::size_t>(start.n.total() + 4));
    }
}

TEST(Refine, StopsAtFirstViolationIncreasePerRu)
{
    // After the sweep, removing one more antenna from any active RU either
    // raises the violation or was never tried because an earlier RU stopped.
    const Scenario s = tiny();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto ep = make_episode(s, seed, 5.0);
        const Candidate end = greedy_refine((*ep->evaluator)(ActivationVector::full(2, 2)), *ep->evaluator);
        for (int l = 0; l < 2; ++l) {
            if (end.n[l] == 0)
                continue;
            ActivationVector less = end.n;
            less.set_clipped(l, less[l] - 1);
            if (l == 1)
                EXPECT_GT((*ep->evaluator)(less).r_vio, end.r_vio);
        }
    }
}

TEST(Infer, RefinementNeverHurts)
{
    const Scenario s = desk();
    AntennaEnv probe(s, EnvConfig{});
    const PolicyParams p = PolicyParams::initialize(probe.observation_size(), 4, {16}, 8);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto ep = make_episode(s, seed, 3.0);
        EnvConfig cfg;
        cfg.se_threshold = 3.0;
        const InferenceResult plain = earl_infer(greedy_selector(p), ep, s, cfg, false);
        const InferenceResult refined = earl_infer(greedy_selector(p), ep, s, cfg, true);
        ASSERT_TRUE(refined.unrefined.has_value());
        EXPECT_EQ(refined.unrefined->n, plain.chosen.n);
        EXPECT_LE(refined.chosen.p_total_w, plain.chosen.p_total_w);
        EXPECT_LE(refined.chosen.r_vio, plain.chosen.r_vio);
        EXPECT_GT(plain.runtime_s, 0.0);
    }
}

TEST(Score, RandomAndConstantPolicies)
{
    const Scenario s = desk();
    AntennaEnv env(s, EnvConfig{});
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4};
    const PolicyScore noop = score_policy(env, constant_selector(4, 0), seeds);
    // Open episodes sit at -1; close episodes pay the shutdown penalty each step.
    EXPECT_NEAR(noop.mean_reward, (-1.0 + (-0.3 - 1.0)) / 2.0, 1e-12);
    EXPECT_NEAR(noop.mean_final_violation, 0.5, 0.5);
    const PolicyScore rnd = score_policy(env, uniform_random_selector(4, 1), seeds);
    EXPECT_LT(rnd.mean_reward, 0.0);
}
