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

#include "earl/ppo.hpp"
#include "earl/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

namespace earl {

namespace {

constexpr std::uint64_t kStreamEpisode = 0x4550;
constexpr std::uint64_t kStreamSampling = 0x5341;
constexpr std::uint64_t kStreamShuffle = 0x5348;
constexpr std::uint64_t kStreamInit = 0x494e;
constexpr std::uint32_t kCheckpointVersion = 1;
constexpr char kCheckpointMagic[8] = {'E', 'A', 'R', 'L', 'C', 'K', 'P', 'T'};

DenseLayer make_layer(int in, int out)
{
    return {Eigen::MatrixXd::Zero(out, in), Eigen::VectorXd::Zero(out)};
}

struct ForwardCache {
    std::vector<Eigen::MatrixXd> hidden;   // hidden[0] = input, then each tanh output
    Eigen::MatrixXd log_probs;             // 3L x B
    Eigen::RowVectorXd values;
};

ForwardCache forward_batch(const PolicyParams& p, const Eigen::MatrixXd& x)
{
    ForwardCache c;
    c.hidden.reserve(p.trunk.size() + 1);
    c.hidden.push_back(x);
    for (const DenseLayer& layer : p.trunk) {
        Eigen::MatrixXd z = layer.weight * c.hidden.back();
        z.colwise() += layer.bias;
        c.hidden.push_back(z.array().tanh().matrix());
    }
    const Eigen::MatrixXd& h = c.hidden.back();
    Eigen::MatrixXd logits = p.policy.weight * h;
    logits.colwise() += p.policy.bias;
    c.log_probs.resize(logits.rows(), logits.cols());
    for (Eigen::Index b = 0; b < logits.cols(); ++b)
        for (int l = 0; l < p.num_ru; ++l) {
            auto z = logits.col(b).segment(3 * l, 3);
            const double top = z.maxCoeff();
            const double lse = top + std::log((z.array() - top).exp().sum());
            c.log_probs.col(b).segment(3 * l, 3) = z.array() - lse;
        }
    c.values = (p.value.weight * h).row(0);
    c.values.array() += p.value.bias(0);
    return c;
}

Eigen::MatrixXd gather_observations(const Trajectory& batch, std::span<const int> indices, int obs_dim)
{
    Eigen::MatrixXd x(obs_dim, static_cast<Eigen::Index>(indices.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) {
        const std::vector<double>& o = batch.observations[static_cast<std::size_t>(indices[j])];
        if (static_cast<int>(o.size()) != obs_dim)
            throw ConfigError("observation length does not match the policy input");
        x.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(o.data(), obs_dim);
    }
    return x;
}

double sample_log_prob(const Eigen::MatrixXd& log_probs, Eigen::Index b, std::span<const int> deltas)
{
    double lp = 0.0;
    for (std::size_t l = 0; l < deltas.size(); ++l)
        lp += log_probs(static_cast<Eigen::Index>(3 * l + action_index(deltas[l])), b);
    return lp;
}

double grad_norm(const PolicyParams& g)
{
    double sq = 0.0;
    for (const DenseLayer* layer : g.layers())
        sq += layer->weight.squaredNorm() + layer->bias.squaredNorm();
    return std::sqrt(sq);
}

void scale(PolicyParams& g, double factor)
{
    for (DenseLayer* layer : g.layers()) {
        layer->weight *= factor;
        layer->bias *= factor;
    }
}

template <typename T>
void write_pod(std::ostream& out, T value)
{
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in)
{
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in)
        throw ConfigError("truncated checkpoint");
    return value;
}

} // namespace

PolicyParams PolicyParams::zeros(int obs_dim, int num_ru, const std::vector<int>& hidden)
{
    if (obs_dim <= 0 || num_ru <= 0 || hidden.empty())
        throw ConfigError("policy needs positive input size, RU count and at least one hidden layer");
    PolicyParams p;
    p.obs_dim = obs_dim;
    p.num_ru = num_ru;
    int in = obs_dim;
    for (int width : hidden) {
        if (width <= 0)
            throw ConfigError("hidden width must be positive");
        p.trunk.push_back(make_layer(in, width));
        in = width;
    }
    p.policy = make_layer(in, 3 * num_ru);
    p.value = make_layer(in, 1);
    return p;
}

PolicyParams PolicyParams::initialize(int obs_dim, int num_ru, const std::vector<int>& hidden, std::uint64_t seed)
{
    PolicyParams p = zeros(obs_dim, num_ru, hidden);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto fill = [&](DenseLayer& layer, double gain) {
        const double sd = gain / std::sqrt(static_cast<double>(layer.inputs()));
        for (Eigen::Index j = 0; j < layer.weight.cols(); ++j)
            for (Eigen::Index i = 0; i < layer.weight.rows(); ++i)
                layer.weight(i, j) = sd * normal(rng);
    };
    for (DenseLayer& layer : p.trunk)
        fill(layer, 1.0);
    // Small policy head: near-uniform initial actions.
    fill(p.policy, 0.01);
    fill(p.value, 1.0);
    return p;
}

PolicyParams PolicyParams::zeros_like() const
{
    PolicyParams z = *this;
    for (DenseLayer* layer : z.layers()) {
        layer->weight.setZero();
        layer->bias.setZero();
    }
    return z;
}

std::vector<DenseLayer*> PolicyParams::layers()
{
    std::vector<DenseLayer*> out;
    for (DenseLayer& layer : trunk)
        out.push_back(&layer);
    out.push_back(&policy);
    out.push_back(&value);
    return out;
}

std::vector<const DenseLayer*> PolicyParams::layers() const
{
    std::vector<const DenseLayer*> out;
    for (const DenseLayer& layer : trunk)
        out.push_back(&layer);
    out.push_back(&policy);
    out.push_back(&value);
    return out;
}

std::size_t PolicyParams::parameter_count() const
{
    std::size_t n = 0;
    for (const DenseLayer* layer : layers())
        n += static_cast<std::size_t>(layer->weight.size() + layer->bias.size());
    return n;
}

bool PolicyParams::all_finite() const
{
    for (const DenseLayer* layer : layers())
        if (!layer->weight.allFinite() || !layer->bias.allFinite())
            return false;
    return true;
}

PolicyOutput policy_forward(const PolicyParams& params, std::span<const double> observation)
{
    if (static_cast<int>(observation.size()) != params.obs_dim)
        throw ConfigError("observation length does not match the policy input");
    const Eigen::MatrixXd x = Eigen::Map<const Eigen::VectorXd>(observation.data(), params.obs_dim);
    const ForwardCache c = forward_batch(params, x);
    PolicyOutput out;
    out.probs = Eigen::Map<const Eigen::MatrixXd>(c.log_probs.data(), 3, params.num_ru).array().exp();
    out.value = c.values(0);
    return out;
}

std::vector<int> argmax_action(const PolicyOutput& out)
{
    std::vector<int> deltas(static_cast<std::size_t>(out.probs.cols()));
    for (Eigen::Index l = 0; l < out.probs.cols(); ++l) {
        Eigen::Index best = 0;
        out.probs.col(l).maxCoeff(&best);
        deltas[static_cast<std::size_t>(l)] = action_delta(static_cast<int>(best));
    }
    return deltas;
}

double joint_log_prob(const PolicyOutput& out, std::span<const int> deltas)
{
    if (static_cast<Eigen::Index>(deltas.size()) != out.probs.cols())
        throw ConfigError("action length does not match the policy head");
    double lp = 0.0;
    for (std::size_t l = 0; l < deltas.size(); ++l)
        lp += std::log(out.probs(action_index(deltas[l]), static_cast<Eigen::Index>(l)));
    return lp;
}

void Trajectory::append(const Trajectory& other)
{
    auto cat = [](auto& dst, const auto& src) { dst.insert(dst.end(), src.begin(), src.end()); };
    cat(observations, other.observations);
    cat(actions, other.actions);
    cat(log_probs, other.log_probs);
    cat(rewards, other.rewards);
    cat(values, other.values);
    cat(advantages, other.advantages);
    cat(returns, other.returns);
    cat(violations, other.violations);
}

GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values, double bootstrap_value,
                      double gamma, double lambda)
{
    if (rewards.size() != values.size())
        throw ConfigError("rewards and values must be aligned");
    const std::size_t n = rewards.size();
    GaeResult g;
    g.advantages.assign(n, 0.0);
    g.returns.assign(n, 0.0);
    double running = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        const double next = i + 1 < n ? values[i + 1] : bootstrap_value;
        const double delta = rewards[i] + gamma * next - values[i];
        running = delta + gamma * lambda * running;
        g.advantages[i] = running;
        g.returns[i] = running + values[i];
    }
    return g;
}

void TrainConfig::validate() const
{
    if (!(learning_rate > 0.0))
        throw ConfigError("learning rate must be positive");
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw ConfigError("gamma must lie in (0, 1]");
    if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0))
        throw ConfigError("GAE lambda must lie in [0, 1]");
    if (!(clip_eps > 0.0))
        throw ConfigError("clip range must be positive");
    if (batch_size <= 0 || minibatch_size <= 0 || update_epochs <= 0)
        throw ConfigError("batch, minibatch and epoch counts must be positive");
    if (!(target_kl > 0.0))
        throw ConfigError("target KL must be positive");
    if (early_stop_window <= 0)
        throw ConfigError("early-stop window must be positive");
    if (hidden.empty())
        throw ConfigError("at least one hidden layer required");
}

LossTerms ppo_loss(const PolicyParams& params, const Trajectory& batch, std::span<const int> indices,
                   const TrainConfig& config, PolicyParams* grad)
{
    const int L = params.num_ru;
    const Eigen::Index B = static_cast<Eigen::Index>(indices.size());
    if (B == 0)
        throw ConfigError("empty minibatch");
    const Eigen::MatrixXd x = gather_observations(batch, indices, params.obs_dim);
    const ForwardCache c = forward_batch(params, x);
    const double inv_b = 1.0 / static_cast<double>(B);

    LossTerms t;
    Eigen::MatrixXd d_logits = Eigen::MatrixXd::Zero(3 * L, B);
    Eigen::RowVectorXd d_values(B);
    for (Eigen::Index b = 0; b < B; ++b) {
        const std::size_t i = static_cast<std::size_t>(indices[static_cast<std::size_t>(b)]);
        const std::vector<int>& act = batch.actions[i];
        const double adv = batch.advantages[i];
        const double logp = sample_log_prob(c.log_probs, b, act);
        const double ratio = std::exp(logp - batch.log_probs[i]);
        const double clipped = std::clamp(ratio, 1.0 - config.clip_eps, 1.0 + config.clip_eps);
        const double unclipped_obj = ratio * adv;
        const double clipped_obj = clipped * adv;
        const bool through_ratio = unclipped_obj <= clipped_obj;
        t.policy -= inv_b * std::min(unclipped_obj, clipped_obj);
        t.clip_fraction += inv_b * (std::abs(ratio - 1.0) > config.clip_eps ? 1.0 : 0.0);
        t.approx_kl += inv_b * ((ratio - 1.0) - (logp - batch.log_probs[i]));

        const double d_logp = through_ratio ? -inv_b * adv * ratio : 0.0;
        for (int l = 0; l < L; ++l) {
            const auto lp = c.log_probs.col(b).segment(3 * l, 3);
            const Eigen::Array3d p = lp.array().exp();
            const double h = -(p * lp.array()).sum();
            t.entropy += inv_b * h;
            for (int j = 0; j < 3; ++j) {
                const double onehot = j == action_index(act[static_cast<std::size_t>(l)]) ? 1.0 : 0.0;
                double g = d_logp * (onehot - p(j));
                // d(-c_e H)/dz_j = c_e p_j (log p_j + H)
                g += config.entropy_coef * inv_b * p(j) * (lp(j) + h);
                d_logits(3 * l + j, b) = g;
            }
        }

        const double err = c.values(b) - batch.returns[i];
        t.value += inv_b * err * err;
        d_values(b) = config.value_coef * 2.0 * inv_b * err;
    }
    t.total = t.policy + config.value_coef * t.value - config.entropy_coef * t.entropy;

    if (grad) {
        *grad = params.zeros_like();
        const Eigen::MatrixXd& top = c.hidden.back();
        grad->policy.weight = d_logits * top.transpose();
        grad->policy.bias = d_logits.rowwise().sum();
        grad->value.weight = d_values * top.transpose();
        grad->value.bias(0) = d_values.sum();

        Eigen::MatrixXd d_h = params.policy.weight.transpose() * d_logits + params.value.weight.transpose() * d_values;
        for (std::size_t li = params.trunk.size(); li-- > 0;) {
            const Eigen::MatrixXd& out = c.hidden[li + 1];
            const Eigen::MatrixXd d_z = d_h.array() * (1.0 - out.array().square());
            grad->trunk[li].weight = d_z * c.hidden[li].transpose();
            grad->trunk[li].bias = d_z.rowwise().sum();
            if (li > 0)
                d_h = params.trunk[li].weight.transpose() * d_z;
        }
    }
    return t;
}

Adam::Adam(const PolicyParams& shape, double learning_rate, double beta1, double beta2, double eps)
    : m_(shape.zeros_like()), v_(shape.zeros_like()), lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps)
{
}

void Adam::step(PolicyParams& params, const PolicyParams& grad)
{
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    auto p = params.layers();
    auto g = grad.layers();
    auto m = m_.layers();
    auto v = v_.layers();
    auto apply = [&](auto& param, const auto& gr, auto& mo, auto& ve) {
        mo = beta1_ * mo + (1.0 - beta1_) * gr;
        ve = beta2_ * ve + (1.0 - beta2_) * gr.cwiseAbs2();
        param.array() -= lr_ * (mo.array() / c1) / ((ve.array() / c2).sqrt() + eps_);
    };
    for (std::size_t i = 0; i < p.size(); ++i) {
        apply(p[i]->weight, g[i]->weight, m[i]->weight, v[i]->weight);
        apply(p[i]->bias, g[i]->bias, m[i]->bias, v[i]->bias);
    }
}

PpoLearner::PpoLearner(PolicyParams params, TrainConfig config)
    : params_(std::move(params)), config_(std::move(config)), adam_(params_, config_.learning_rate)
{
    config_.validate();
}

UpdateDiagnostics PpoLearner::update(const Trajectory& batch)
{
    const int n = static_cast<int>(batch.size());
    if (n < config_.batch_size)
        throw ConfigError("batch smaller than the configured batch size");

    Trajectory normalized = batch;
    const double mean = pairwise_mean(batch.advantages);
    double var = 0.0;
    for (double a : batch.advantages)
        var += (a - mean) * (a - mean);
    const double sd = std::sqrt(var / n);
    for (double& a : normalized.advantages)
        a = (a - mean) / (sd + 1e-8);

    const PolicyParams backup = params_;
    std::mt19937_64 rng(derive_seed(config_.seed, kStreamShuffle, updates_++));
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    UpdateDiagnostics diag;
    for (int epoch = 0; epoch < config_.update_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss = 0.0;
        int minibatches = 0;
        for (int start = 0; start < n; start += config_.minibatch_size) {
            const int len = std::min(config_.minibatch_size, n - start);
            const std::span<const int> idx(order.data() + start, static_cast<std::size_t>(len));
            PolicyParams grad;
            const LossTerms t = ppo_loss(params_, normalized, idx, config_, &grad);
            if (!std::isfinite(t.total) || !grad.all_finite()) {
                params_ = backup;
                diag.aborted = true;
                diag.loss = t.total;
                return diag;
            }
            const double norm = grad_norm(grad);
            if (config_.max_grad_norm > 0.0 && norm > config_.max_grad_norm)
                scale(grad, config_.max_grad_norm / norm);
            adam_.step(params_, grad);
            loss += t.total;
            ++minibatches;
        }
        const LossTerms full = ppo_loss(params_, normalized, order, config_, nullptr);
        diag.epochs_run = epoch + 1;
        diag.loss = loss / minibatches;
        diag.kl = full.approx_kl;
        diag.clip_fraction = full.clip_fraction;
        diag.epoch_kl.push_back(full.approx_kl);
        if (!params_.all_finite()) {
            params_ = backup;
            diag.aborted = true;
            return diag;
        }
        if (full.approx_kl > config_.target_kl)
            break;
    }
    return diag;
}

TrainResult train(const std::function<AntennaEnv()>& make_env, const TrainConfig& config, long total_steps,
                  const std::function<void(const CurvePoint&)>& on_epoch)
{
    config.validate();
    AntennaEnv env = make_env();
    PpoLearner learner(PolicyParams::initialize(env.observation_size(), env.num_ru(), config.hidden,
                                                derive_seed(config.seed, kStreamInit, 0)),
                       config);
    std::mt19937_64 rng(derive_seed(config.seed, kStreamSampling, 0));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    TrainResult result;
    std::uint64_t episode = 0;
    std::vector<double> window;
    for (int epoch = 0; epoch < config.max_epochs && result.steps < total_steps; ++epoch) {
        Trajectory batch;
        while (static_cast<int>(batch.size()) < config.batch_size) {
            const InitMode mode = episode % 2 == 0 ? InitMode::Open : InitMode::Close;
            env.reset(mode, derive_seed(config.seed, kStreamEpisode, episode++));
            Trajectory ep;
            bool done = false;
            while (!done) {
                std::vector<double> obs = env.state().observation();
                const PolicyOutput out = policy_forward(learner.params(), obs);
                std::vector<int> deltas(static_cast<std::size_t>(env.num_ru()));
                for (int l = 0; l < env.num_ru(); ++l) {
                    const double u = uniform(rng);
                    int j = 0;
                    double acc = out.probs(0, l);
                    while (j < 2 && u >= acc)
                        acc += out.probs(++j, l);
                    deltas[static_cast<std::size_t>(l)] = action_delta(j);
                }
                const double logp = joint_log_prob(out, deltas);
                const StepResult sr = env.step(Action(deltas));
                ep.observations.push_back(std::move(obs));
                ep.actions.push_back(std::move(deltas));
                ep.log_probs.push_back(logp);
                ep.values.push_back(out.value);
                ep.rewards.push_back(sr.reward.total);
                ep.violations.push_back(sr.state.r_vio);
                done = sr.done;
            }
            GaeResult g = compute_gae(ep.rewards, ep.values, 0.0, config.gamma, config.gae_lambda);
            ep.advantages = std::move(g.advantages);
            ep.returns = std::move(g.returns);
            batch.append(ep);
        }
        result.steps += static_cast<long>(batch.size());

        CurvePoint point;
        point.epoch = epoch;
        point.mean_reward = pairwise_mean(batch.rewards);
        point.mean_violation = pairwise_mean(batch.violations);
        env.set_lambda(update_lambda(env.lambda(), point.mean_violation, env.config().eta, env.config().r_star));
        point.lambda = env.lambda();

        const UpdateDiagnostics diag = learner.update(batch);
        point.kl = diag.kl;
        result.curve.push_back(point);
        if (on_epoch)
            on_epoch(point);

        if (diag.aborted || point.mean_reward < config.divergence_reward)
            throw TrainingDiverged("training diverged at epoch " + std::to_string(epoch) +
                                       " (mean reward " + std::to_string(point.mean_reward) + ")",
                                   result.curve);

        window.push_back(point.mean_reward);
        if (static_cast<int>(window.size()) > config.early_stop_window)
            window.erase(window.begin());
        if (static_cast<int>(window.size()) == config.early_stop_window) {
            const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
            if (*hi - *lo < config.early_stop_tolerance) {
                result.early_stopped = true;
                break;
            }
        }
    }
    result.params = learner.params();
    result.final_lambda = env.lambda();
    return result;
}

void write_curve_csv(const std::filesystem::path& path, const std::vector<CurvePoint>& curve)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot open curve file " + path.string());
    out << "epoch,mean_reward,mean_violation,lambda,kl\n";
    out.precision(17);
    for (const CurvePoint& p : curve)
        out << p.epoch << ',' << p.mean_reward << ',' << p.mean_violation << ',' << p.lambda << ',' << p.kl << '\n';
}

void save_checkpoint(const std::filesystem::path& path, const PolicyParams& params)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open checkpoint " + path.string());
    out.write(kCheckpointMagic, sizeof kCheckpointMagic);
    write_pod<std::uint32_t>(out, kCheckpointVersion);
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(params.obs_dim));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(params.num_ru));
    const auto layers = params.layers();
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(layers.size()));
    for (const DenseLayer* layer : layers) {
        write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(layer->inputs()));
        write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(layer->outputs()));
    }
    for (const DenseLayer* layer : layers) {
        for (Eigen::Index i = 0; i < layer->weight.rows(); ++i)
            for (Eigen::Index j = 0; j < layer->weight.cols(); ++j)
                write_pod<float>(out, static_cast<float>(layer->weight(i, j)));
        for (Eigen::Index i = 0; i < layer->bias.size(); ++i)
            write_pod<float>(out, static_cast<float>(layer->bias(i)));
    }
    if (!out)
        throw ConfigError("failed writing checkpoint " + path.string());
}

PolicyParams load_checkpoint(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open checkpoint " + path.string());
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0)
        throw ConfigError("not a checkpoint file: " + path.string());
    if (read_pod<std::uint32_t>(in) != kCheckpointVersion)
        throw ConfigError("unsupported checkpoint version");
    const int obs_dim = static_cast<int>(read_pod<std::uint32_t>(in));
    const int num_ru = static_cast<int>(read_pod<std::uint32_t>(in));
    const std::uint32_t count = read_pod<std::uint32_t>(in);
    if (count < 3)
        throw ConfigError("checkpoint has too few layers");

    std::vector<std::pair<int, int>> shapes;
    for (std::uint32_t i = 0; i < count; ++i) {
        const int lin = static_cast<int>(read_pod<std::uint32_t>(in));
        const int lout = static_cast<int>(read_pod<std::uint32_t>(in));
        shapes.emplace_back(lin, lout);
    }
    std::vector<int> hidden;
    for (std::uint32_t i = 0; i + 2 < count; ++i)
        hidden.push_back(shapes[i].second);
    PolicyParams p = PolicyParams::zeros(obs_dim, num_ru, hidden);
    const auto layers = p.layers();
    for (std::size_t i = 0; i < layers.size(); ++i)
        if (layers[i]->inputs() != shapes[i].first || layers[i]->outputs() != shapes[i].second)
            throw ConfigError("inconsistent layer shapes in checkpoint");
    for (DenseLayer* layer : layers) {
        for (Eigen::Index i = 0; i < layer->weight.rows(); ++i)
            for (Eigen::Index j = 0; j < layer->weight.cols(); ++j)
                layer->weight(i, j) = read_pod<float>(in);
        for (Eigen::Index i = 0; i < layer->bias.size(); ++i)
            layer->bias(i) = read_pod<float>(in);
    }
    if (in.peek() != std::char_traits<char>::eof())
        throw ConfigError("trailing bytes in checkpoint");
    return p;
}

} // namespace earl
