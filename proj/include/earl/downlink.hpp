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

#ifndef EARL_DOWNLINK_HPP
#define EARL_DOWNLINK_HPP

#include "earl/activation.hpp"
#include "earl/channel.hpp"
#include "earl/powermodel.hpp"
#include "earl/scenario.hpp"

#include <span>
#include <vector>

namespace earl {

// 0/1 diagonal of length L*N; RU l keeps its first n_l antennas.
Eigen::VectorXd activation_mask(const ActivationVector& n);

// Centralized MMSE precoder for a fixed activation, reusable across
// realizations:
//   w_k = p_k (sum_i p_i D (h_i h_i^H + C_i) D + s^2 I)^{-1} D h_k.
// Solved through the block-diagonal part Z = D C D + s^2 I and a K x K
// capacitance system, so the cost per realization is O(LN K^2).
class MmsePrecoder {
public:
    MmsePrecoder(const PairTable<CMatrix>& error_corr, const ActivationVector& n, std::vector<double> uplink_power_w,
                 double noise_power_w);

    // `estimates` is LN x (S*K) in the stacked layout; returns the same shape.
    CMatrix apply(const CMatrix& estimates) const;

private:
    struct Block {
        Eigen::Index row = 0;
        int size = 0;
        Eigen::LLT<CMatrix> z;
    };

    int num_ru_ = 0;
    int antennas_ = 0;
    int num_ue_ = 0;
    std::vector<double> power_;
    std::vector<Block> blocks_;
};

// One-realization convenience wrapper. `estimates` is LN x K.
CMatrix mmse_precoder(const CMatrix& estimates, const PairTable<CMatrix>& error_corr, const ActivationVector& n,
                      std::span<const double> uplink_power_w, double noise_power_w);

// rho_k = rho_max (sum_{l in S} b_kl)^up w_k^-kappa / max_{l in S} sum_i (sum_{l' in S} b_il')^up w_i^(1-kappa)
// with S the active RUs, all of which serve every UE. `beta` is K x L linear.
std::vector<double> fractional_power_allocation(const Eigen::MatrixXd& beta, const ActivationVector& n,
                                                std::span<const double> omega, double rho_max_w, double upsilon,
                                                double kappa);

struct PrecodingSolution {
    CMatrix W;                      // LN x (S*K), column s*K + k is w_k in realization s
    std::vector<double> rho;        // K, Watts
    std::vector<double> omega;      // K
    std::vector<double> norm_sq;    // K, E||w_bar_k||^2 before normalization
    Eigen::MatrixXd share;          // K x L, E||w_bar_kl||^2 / E||w_bar_k||^2
    std::vector<double> radiated_w; // L, sum_k rho_k share_kl
};

// Throws InfeasibleConfiguration when no antenna is active.
PrecodingSolution precode(const ChannelRealizationSet& set, const ActivationVector& n, const Scenario& scenario);

// Hardening-bound SINR with empirical expectations over the batch.
std::vector<double> downlink_sinr(const ChannelRealizationSet& set, const CMatrix& W, double noise_power_w);

double spectral_efficiency(double sinr, double prelog);
double sinr_threshold(double se_threshold, double prelog);

struct EvaluationResult {
    std::vector<double> se;
    std::vector<double> sinr;
    std::vector<double> rho;
    std::vector<double> radiated_w;
    double r_vio = 1.0;
    double avg_se = 0.0;
    PowerBreakdown power;
};

// n = 0 is valid: no transmission, SE = 0 for everyone, r_vio = 1.
EvaluationResult evaluate(const ChannelRealizationSet& set, const ActivationVector& n, const Scenario& scenario,
                          double se_threshold);

} // namespace earl

#endif
