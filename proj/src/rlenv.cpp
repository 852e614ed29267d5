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

#include "earl/rlenv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace earl {

namespace {

constexpr std::uint64_t kStreamEpisodeChannels = 0x4550;

} // namespace

std::string to_string(InitMode mode)
{
    return mode == InitMode::Open ? "open" : "close";
}

PairedEvaluator::PairedEvaluator(std::shared_ptr<const ChannelRealizationSet> channels, Scenario scenario,
                                 double se_threshold)
    : channels_(std::move(channels)), scenario_(std::move(scenario)), se_threshold_(se_threshold)
{
    if (!channels_)
        throw ConfigError("evaluator needs a channel set");
}

EvaluationResult PairedEvaluator::evaluate(const ActivationVector& n) const
{
    return earl::evaluate(*channels_, n, scenario_, se_threshold_);
}

Candidate PairedEvaluator::operator()(const ActivationVector& n) const
{
    const std::vector<int> key(n.counts().begin(), n.counts().end());
    if (auto it = cache_.find(key); it != cache_.end())
        return it->second;
    const EvaluationResult r = evaluate(n);
    Candidate c{n, r.power.p_total_w, r.r_vio, r.avg_se};
    cache_.emplace(key, c);
    return c;
}

std::shared_ptr<Episode> make_episode(const Scenario& scenario, std::uint64_t episode_seed, double se_threshold)
{
    auto ep = std::make_shared<Episode>();
    ep->seed = episode_seed;
    ep->deployment = build_deployment(scenario, episode_seed);
    // Same seed as the channel draw so shadowing in the observed gains matches the batch.
    const std::uint64_t channel_seed = derive_seed(episode_seed, kStreamEpisodeChannels, 0);
    ep->gain_db = gain_matrix_db(scenario, ep->deployment, channel_seed);
    ep->channels = std::make_shared<const ChannelRealizationSet>(
        generate_channels(scenario, ep->deployment, scenario.realizations, channel_seed));
    ep->evaluator = std::make_shared<PairedEvaluator>(ep->channels, scenario, se_threshold);
    ep->p_full_w = (*ep->evaluator)(ActivationVector::full(scenario.num_ru, scenario.antennas_per_ru)).p_total_w;
    return ep;
}

void EnvConfig::validate() const
{
    if (!(se_threshold >= 0.0))
        throw ConfigError("SE threshold must be non-negative");
    if (!(lambda0 >= 0.0) || !(eta >= 0.0))
        throw ConfigError("lambda0 and eta must be non-negative");
    if (!(r_star >= 0.0 && r_star <= 1.0))
        throw ConfigError("target violation must lie in [0, 1]");
    if (!(clip_penalty >= 0.0) || !(shutdown_penalty >= 0.0))
        throw ConfigError("penalties must be non-negative");
    if (horizon < 0)
        throw ConfigError("horizon must be non-negative");
}

Action::Action(std::vector<int> d) : delta(std::move(d))
{
    for (int a : delta)
        if (a < -1 || a > 1)
            throw ConfigError("action components must be -1, 0 or +1");
}

std::vector<double> EnvState::observation() const
{
    std::vector<double> obs(phi);
    obs.reserve(phi.size() + static_cast<std::size_t>(n.size()) + 2);
    const double scale = n.antennas_per_ru() > 0 ? 1.0 / n.antennas_per_ru() : 0.0;
    for (int c : n.counts())
        obs.push_back(c * scale);
    obs.push_back(p_norm);
    obs.push_back(r_vio);
    return obs;
}

double update_lambda(double lambda, double mean_violation, double eta, double r_star)
{
    if (!(lambda >= 0.0))
        throw ConfigError("lambda must be non-negative");
    return std::max(0.0, lambda + eta * (mean_violation - r_star));
}

AntennaEnv::AntennaEnv(Scenario scenario, EnvConfig config)
    : scenario_(std::move(scenario)), config_(config), lambda_(config.lambda0)
{
    scenario_.validate();
    config_.validate();
}

int AntennaEnv::horizon() const
{
    return config_.horizon > 0 ? config_.horizon : 2 * scenario_.antennas_per_ru;
}

void AntennaEnv::set_lambda(double lambda)
{
    if (!(lambda >= 0.0))
        throw ConfigError("lambda must be non-negative");
    lambda_ = lambda;
}

const EnvState& AntennaEnv::reset(InitMode mode, std::uint64_t episode_seed)
{
    return reset(mode, make_episode(scenario_, episode_seed, config_.se_threshold));
}

const EnvState& AntennaEnv::reset(InitMode mode, std::shared_ptr<Episode> episode)
{
    if (!episode)
        throw ConfigError("null episode");
    if (episode->gain_db.rows() != scenario_.num_ru || episode->gain_db.cols() != scenario_.num_ue)
        throw ConfigError("episode does not match the environment scenario");
    episode_ = std::move(episode);
    t_ = 0;
    trace_.clear();

    const int L = scenario_.num_ru;
    const int K = scenario_.num_ue;
    const Eigen::MatrixXd& g = episode_->gain_db;
    const double lo = g.minCoeff();
    const double span = g.maxCoeff() - lo;
    state_.phi.assign(static_cast<std::size_t>(L) * K, 0.0);
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < L; ++l)
            state_.phi[static_cast<std::size_t>(l + L * k)] = span > 0.0 ? (g(l, k) - lo) / span : 0.0;

    state_.n = mode == InitMode::Open ? ActivationVector::full(L, scenario_.antennas_per_ru)
                                      : ActivationVector::zeros(L, scenario_.antennas_per_ru);
    refresh();
    return state_;
}

void AntennaEnv::refresh()
{
    const Candidate c = (*episode_->evaluator)(state_.n);
    state_.p_total_w = c.p_total_w;
    state_.r_vio = c.r_vio;
    state_.p_norm = episode_->p_full_w > 0.0 ? std::min(1.0, c.p_total_w / episode_->p_full_w) : 0.0;
}

StepResult AntennaEnv::step(const Action& action)
{
    if (!episode_)
        throw ConfigError("step before reset");
    if (static_cast<int>(action.delta.size()) != num_ru())
        throw ConfigError("action length must equal the number of RUs");

    int clipped = 0;
    for (int l = 0; l < num_ru(); ++l)
        clipped += state_.n.set_clipped(l, state_.n[l] + action.delta[l]) ? 1 : 0;
    double zeta = config_.clip_penalty * clipped;
    if (state_.n.all_zero())
        zeta += config_.shutdown_penalty;

    refresh();
    ++t_;

    RewardTerms r;
    r.antenna_term = -static_cast<double>(state_.n.total()) / scenario_.total_antennas();
    r.violation_term = -lambda_ * state_.r_vio;
    r.infeasibility = -zeta;
    r.total = r.antenna_term + r.violation_term + r.infeasibility;

    if (tracing_) {
        std::string a;
        for (std::size_t l = 0; l < action.delta.size(); ++l)
            a += (l ? ";" : "") + std::to_string(action.delta[l]);
        trace_.push_back({t_, state_.n.to_string(), a, r.total, zeta, state_.r_vio, state_.p_norm});
    }
    return {state_, r, t_ >= horizon()};
}

void AntennaEnv::write_trace_csv(const std::filesystem::path& path) const
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot open trace file " + path.string());
    out << "t,n,action,reward,zeta,r_vio,p_norm\n";
    out.precision(17);
    for (const TraceRow& row : trace_)
        out << row.t << ',' << row.n << ',' << row.action << ',' << row.reward << ',' << row.zeta << ',' << row.r_vio
            << ',' << row.p_norm << '\n';
}

} // namespace earl
