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

#ifndef EARL_CHANNEL_HPP
#define EARL_CHANNEL_HPP

#include "earl/numeric.hpp"
#include "earl/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace earl {

// Dense table indexed by (UE k, RU l).
template <typename T>
class PairTable {
public:
    PairTable() = default;
    PairTable(int num_ue, int num_ru, const T& init = T{})
        : num_ue_(num_ue), num_ru_(num_ru), items_(static_cast<std::size_t>(num_ue * num_ru), init)
    {
    }

    T& operator()(int k, int l) { return items_[static_cast<std::size_t>(k * num_ru_ + l)]; }
    const T& operator()(int k, int l) const { return items_[static_cast<std::size_t>(k * num_ru_ + l)]; }

    int num_ue() const { return num_ue_; }
    int num_ru() const { return num_ru_; }

private:
    int num_ue_ = 0;
    int num_ru_ = 0;
    std::vector<T> items_;
};

// Monte-Carlo batch of true channels and MMSE estimates for every (UE, RU)
// pair. Realization s occupies columns [s*K, s*K + K) of H and H_hat; column
// k of that block stacks h_k = [h_k1; ...; h_kL].
struct ChannelRealizationSet {
    int num_ru = 0;
    int antennas = 0;
    int num_ue = 0;
    int samples = 0;

    PairTable<CMatrix> R;           // spatial correlation
    PairTable<CMatrix> B;           // estimate correlation
    PairTable<CMatrix> C;           // error correlation
    Eigen::MatrixXd beta;           // K x L linear gains, tr(R_kl)/N
    CMatrix H;                      // LN x (S*K)
    CMatrix H_hat;                  // LN x (S*K)
    std::vector<int> pilot_index;   // K

    int total_antennas() const { return num_ru * antennas; }
    auto true_channels(int s) const { return H.middleCols(static_cast<Eigen::Index>(s) * num_ue, num_ue); }
    auto estimates(int s) const { return H_hat.middleCols(static_cast<Eigen::Index>(s) * num_ue, num_ue); }
};

// K <= tau_p: distinct pilots. Otherwise the first tau_p UEs get distinct
// pilots and each further UE joins the least-reused pilot with the smallest
// summed gain sum_l sum_{i on pilot} beta_il. `beta` is K x L (linear).
std::vector<int> assign_pilots(const Eigen::MatrixXd& beta, int tau_p);

// h_kl = R_kl^{1/2} g with g ~ CN(0, I). Realization s draws from its own
// seed-derived stream.
CMatrix draw_true_channels(const PairTable<CMatrix>& R, int antennas, int samples, std::uint64_t seed);

struct MmseEstimate {
    CMatrix H_hat;
    PairTable<CMatrix> B;
    PairTable<CMatrix> C;
};

// MMSE estimation from uplink pilots observed with all antennas active.
// Pilot noise is drawn fresh per realization from `seed`.
MmseEstimate mmse_estimate(const PairTable<CMatrix>& R, const std::vector<int>& pilot_index, double pilot_power_w,
                           int tau_p, double noise_power_w, const CMatrix& H, int antennas, std::uint64_t seed);

// Full pipeline: gains (with optional shadowing), correlation, pilots, true
// channels and estimates. Deterministic in (scenario, deployment, samples, seed).
ChannelRealizationSet generate_channels(const Scenario& scenario, const Deployment& deployment, int samples,
                                        std::uint64_t seed);

// Test-fixture dump: "EARLCHS" magic, version, dimensions, then row-major
// complex64 arrays (R, B, C, H, H_hat) and float64 gains.
void save_channel_set(const std::filesystem::path& path, const ChannelRealizationSet& set);
ChannelRealizationSet load_channel_set(const std::filesystem::path& path);

} // namespace earl

#endif
