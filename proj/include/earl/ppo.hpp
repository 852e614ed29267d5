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

#ifndef EARL_PPO_HPP
#define EARL_PPO_HPP

#include "earl/rlenv.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace earl {

struct DenseLayer {
    Eigen::MatrixXd weight;   // out x in
    Eigen::VectorXd bias;     // out

    int inputs() const { return static_cast<int>(weight.cols()); }
    int outputs() const { return static_cast<int>(weight.rows()); }
};

// tanh MLP trunk with a factored ternary policy head (3 logits per RU, in
// action order -1, 0, +1) and a scalar value head.
struct PolicyParams {
    int obs_dim = 0;
    int num_ru = 0;
    std::vector<DenseLayer> trunk;
    DenseLayer policy;
    DenseLayer value;

    static PolicyParams initialize(int obs_dim, int num_ru, const std::vector<int>& hidden, std::uint64_t seed);
    // Same shapes, every weight and bias zero.
    static PolicyParams zeros(int obs_dim, int num_ru, const std::vector<int>& hidden);
    PolicyParams zeros_like() const;

    std::vector<DenseLayer*> layers();
    std::vector<const DenseLayer*> layers() const;
    std::size_t parameter_count() const;
    bool all_finite() const;
};

struct PolicyOutput {
    Eigen::MatrixXd probs;    // 3 x L
    double value = 0.0;
};

PolicyOutput policy_forward(const PolicyParams& params, std::span<const double> observation);

inline int action_index(int delta) { return delta + 1; }
inline int action_delta(int index) { return index - 1; }

std::vector<int> argmax_action(const PolicyOutput& out);
double joint_log_prob(const PolicyOutput& out, std::span<const int> deltas);

struct Trajectory {
    std::vector<std::vector<double>> observations;
    std::vector<std::vector<int>> actions;   // deltas
    std::vector<double> log_probs;
    std::vector<double> rewards;
    std::vector<double> values;
    std::vector<double> advantages;
    std::vector<double> returns;
    std::vector<double> violations;          // r_vio after each step

    std::size_t size() const { return rewards.size(); }
    void append(const Trajectory& other);
};

struct GaeResult {
    std::vector<double> advantages;
    std::vector<double> returns;
};

// delta_t = r_t + gamma V_{t+1} - V_t with V_T = bootstrap_value;
// A_t = sum_j (gamma lambda)^j delta_{t+j}; returns = A + V.
GaeResult compute_gae(std::span<const double> rewards, std::span<const double> values, double bootstrap_value,
                      double gamma, double lambda);

struct TrainConfig {
    double learning_rate = 1e-4;
    double gamma = 0.999;
    double gae_lambda = 0.97;
    double clip_eps = 0.2;
    int batch_size = 256;
    int minibatch_size = 64;
    int update_epochs = 10;
    double target_kl = 0.025;
    double entropy_coef = 0.01;
    double value_coef = 0.5;
    double max_grad_norm = 0.5;
    int early_stop_window = 10;
    double early_stop_tolerance = 1e-3;
    double divergence_reward = -10.0;
    int max_epochs = 1000;
    std::vector<int> hidden{256, 256, 256};
    std::uint64_t seed = 7;

    void validate() const;
};

struct LossTerms {
    double policy = 0.0;
    double value = 0.0;
    double entropy = 0.0;
    double total = 0.0;
    double clip_fraction = 0.0;
    double approx_kl = 0.0;
};

// Loss on batch[indices] using batch.advantages as given. When `grad` is not
// null it receives dLoss/dparams (shapes of params).
LossTerms ppo_loss(const PolicyParams& params, const Trajectory& batch, std::span<const int> indices,
                   const TrainConfig& config, PolicyParams* grad);

struct UpdateDiagnostics {
    double kl = 0.0;
    double clip_fraction = 0.0;
    double loss = 0.0;
    int epochs_run = 0;
    std::vector<double> epoch_kl;
    bool aborted = false;     // non-finite loss; parameters restored
};

class Adam {
public:
    Adam(const PolicyParams& shape, double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
         double eps = 1e-8);
    void step(PolicyParams& params, const PolicyParams& grad);

private:
    PolicyParams m_;
    PolicyParams v_;
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
};

class PpoLearner {
public:
    PpoLearner(PolicyParams params, TrainConfig config);

    // Advantages are normalized per batch; up to `update_epochs` passes,
    // stopping once the epoch's approximate KL exceeds the target.
    UpdateDiagnostics update(const Trajectory& batch);

    const PolicyParams& params() const { return params_; }
    const TrainConfig& config() const { return config_; }

private:
    PolicyParams params_;
    TrainConfig config_;
    Adam adam_;
    std::uint64_t updates_ = 0;
};

struct CurvePoint {
    int epoch = 0;
    double mean_reward = 0.0;
    double mean_violation = 0.0;
    double lambda = 0.0;
    double kl = 0.0;
};

struct TrainResult {
    PolicyParams params;
    std::vector<CurvePoint> curve;
    bool early_stopped = false;
    double final_lambda = 0.0;
    long steps = 0;
};

class TrainingDiverged : public std::runtime_error {
public:
    TrainingDiverged(const std::string& what, std::vector<CurvePoint> curve)
        : std::runtime_error(what), curve_(std::move(curve))
    {
    }
    const std::vector<CurvePoint>& curve() const { return curve_; }

private:
    std::vector<CurvePoint> curve_;
};

// Episodes alternate open/close initialization and draw a fresh UE drop each.
// One epoch = one batch collection plus one update.
TrainResult train(const std::function<AntennaEnv()>& make_env, const TrainConfig& config, long total_steps,
                  const std::function<void(const CurvePoint&)>& on_epoch = {});

void write_curve_csv(const std::filesystem::path& path, const std::vector<CurvePoint>& curve);

// "EARLCKPT", u32 version, u32 obs_dim, u32 num_ru, u32 layer count, per
// layer (in, out), then row-major float32 weights followed by biases.
void save_checkpoint(const std::filesystem::path& path, const PolicyParams& params);
PolicyParams load_checkpoint(const std::filesystem::path& path);

} // namespace earl

#endif
