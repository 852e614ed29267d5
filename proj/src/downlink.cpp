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

#include "earl/downlink.hpp"

#include <algorithm>
#include <cmath>

namespace earl {

Eigen::VectorXd activation_mask(const ActivationVector& n)
{
    const int antennas = n.antennas_per_ru();
    Eigen::VectorXd mask = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n.size()) * antennas);
    for (int l = 0; l < n.size(); ++l)
        mask.segment(static_cast<Eigen::Index>(l) * antennas, n[l]).setOnes();
    return mask;
}

MmsePrecoder::MmsePrecoder(const PairTable<CMatrix>& error_corr, const ActivationVector& n,
                           std::vector<double> uplink_power_w, double noise_power_w)
    : num_ru_(n.size()), antennas_(n.antennas_per_ru()), num_ue_(error_corr.num_ue()), power_(std::move(uplink_power_w))
{
    if (error_corr.num_ru() != num_ru_)
        throw ConfigError("activation length does not match the number of RUs");
    if (static_cast<int>(power_.size()) != num_ue_)
        throw ConfigError("one uplink power per UE required");
    if (!(noise_power_w > 0.0))
        throw ConfigError("noise power must be positive");
    for (double p : power_)
        if (!(p > 0.0))
            throw ConfigError("uplink powers must be positive");

    for (int l = 0; l < num_ru_; ++l) {
        const int size = n[l];
        if (size == 0)
            continue;
        CMatrix z = noise_power_w * CMatrix::Identity(size, size);
        for (int i = 0; i < num_ue_; ++i)
            z += power_[i] * error_corr(i, l).topLeftCorner(size, size);
        Block block;
        block.row = static_cast<Eigen::Index>(l) * antennas_;
        block.size = size;
        block.z.compute(z);
        if (block.z.info() != Eigen::Success)
            throw NumericalError("precoder block is not positive definite");
        blocks_.push_back(std::move(block));
    }
}

CMatrix MmsePrecoder::apply(const CMatrix& estimates) const
{
    const Eigen::Index rows = static_cast<Eigen::Index>(num_ru_) * antennas_;
    if (estimates.rows() != rows || estimates.cols() % num_ue_ != 0)
        throw ConfigError("estimate matrix has the wrong shape");

    // Y = Z^{-1} D H_hat; rows outside the active prefixes stay zero.
    CMatrix y = CMatrix::Zero(rows, estimates.cols());
    for (const Block& b : blocks_)
        y.middleRows(b.row, b.size) = b.z.solve(estimates.middleRows(b.row, b.size));

    const Eigen::Index k = num_ue_;
    const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(power_.data(), k);
    for (Eigen::Index s = 0; s < estimates.cols() / k; ++s) {
        auto ys = y.middleCols(s * k, k);
        const CMatrix gram = estimates.middleCols(s * k, k).adjoint() * ys;
        // (I + P G)^{-1} P, applied on the right.
        CMatrix capacitance = p.asDiagonal() * gram;
        capacitance.diagonal().array() += 1.0;
        const CMatrix right = capacitance.partialPivLu().solve(CMatrix(p.cast<cdouble>().asDiagonal()));
        ys = (ys * right).eval();
    }
    return y;
}

CMatrix mmse_precoder(const CMatrix& estimates, const PairTable<CMatrix>& error_corr, const ActivationVector& n,
                      std::span<const double> uplink_power_w, double noise_power_w)
{
    MmsePrecoder precoder(error_corr, n, std::vector<double>(uplink_power_w.begin(), uplink_power_w.end()),
                          noise_power_w);
    return precoder.apply(estimates);
}

std::vector<double> fractional_power_allocation(const Eigen::MatrixXd& beta, const ActivationVector& n,
                                                std::span<const double> omega, double rho_max_w, double upsilon,
                                                double kappa)
{
    const int num_ue = static_cast<int>(beta.rows());
    if (beta.cols() != n.size() || static_cast<int>(omega.size()) != num_ue)
        throw ConfigError("power allocation inputs have inconsistent sizes");
    if (n.all_zero())
        throw InfeasibleConfiguration("power allocation needs at least one active antenna");

    std::vector<double> weight(static_cast<std::size_t>(num_ue));
    for (int k = 0; k < num_ue; ++k) {
        if (!(omega[k] > 0.0))
            throw InfeasibleConfiguration("UE " + std::to_string(k) + " has a zero precoder");
        double served_gain = 0.0;
        for (int l = 0; l < n.size(); ++l)
            if (n[l] > 0)
                served_gain += beta(k, l);
        if (!(served_gain > 0.0))
            throw InfeasibleConfiguration("UE " + std::to_string(k) + " has no channel gain to active RUs");
        weight[k] = std::pow(served_gain, upsilon);
    }

    // Every active RU serves the same UE set, so each per-RU sum is identical.
    double worst = 0.0;
    for (int l = 0; l < n.size(); ++l) {
        if (n[l] == 0)
            continue;
        double load = 0.0;
        for (int i = 0; i < num_ue; ++i)
            load += weight[i] * std::pow(omega[i], 1.0 - kappa);
        worst = std::max(worst, load);
    }

    std::vector<double> rho(static_cast<std::size_t>(num_ue));
    for (int k = 0; k < num_ue; ++k)
        rho[k] = rho_max_w * weight[k] * std::pow(omega[k], -kappa) / worst;
    return rho;
}

PrecodingSolution precode(const ChannelRealizationSet& set, const ActivationVector& n, const Scenario& scenario)
{
    if (n.size() != set.num_ru || n.antennas_per_ru() != set.antennas)
        throw ConfigError("activation does not match the channel set");
    if (n.all_zero())
        throw InfeasibleConfiguration("no active antenna");

    const int L = set.num_ru;
    const int N = set.antennas;
    const int K = set.num_ue;
    const int S = set.samples;

    MmsePrecoder precoder(set.C, n, std::vector<double>(static_cast<std::size_t>(K), scenario.pilot_power_w),
                          scenario.noise_power_w);
    const CMatrix unnormalized = precoder.apply(set.H_hat);

    PrecodingSolution sol;
    sol.omega.resize(static_cast<std::size_t>(K));
    sol.norm_sq.resize(static_cast<std::size_t>(K));
    sol.share = Eigen::MatrixXd::Zero(K, L);
    Eigen::MatrixXd mean_norm = Eigen::MatrixXd::Zero(K, L);

    std::vector<double> per_sample(static_cast<std::size_t>(S));
    std::vector<double> per_sample_sq(static_cast<std::size_t>(S));
    std::vector<double> total_sq(static_cast<std::size_t>(S));
    for (int k = 0; k < K; ++k) {
        std::fill(total_sq.begin(), total_sq.end(), 0.0);
        for (int l = 0; l < L; ++l) {
            if (n[l] == 0)
                continue;
            for (int s = 0; s < S; ++s) {
                const double sq = unnormalized
                                      .col(static_cast<Eigen::Index>(s) * K + k)
                                      .segment(static_cast<Eigen::Index>(l) * N, n[l])
                                      .squaredNorm();
                per_sample_sq[s] = sq;
                per_sample[s] = std::sqrt(sq);
                total_sq[s] += sq;
            }
            mean_norm(k, l) = pairwise_mean(per_sample);
            sol.share(k, l) = pairwise_mean(per_sample_sq);
        }
        const double norm_sq = pairwise_mean(total_sq);
        if (!(norm_sq > 0.0))
            throw InfeasibleConfiguration("UE " + std::to_string(k) + " has a zero precoder");
        sol.norm_sq[k] = norm_sq;
        sol.share.row(k) /= norm_sq;
        sol.omega[k] = scenario.omega == OmegaStatistic::Norm ? mean_norm.row(k).maxCoeff() / std::sqrt(norm_sq)
                                                              : sol.share.row(k).maxCoeff();
    }

    sol.rho = fractional_power_allocation(set.beta, n, sol.omega, scenario.rho_max_w, scenario.upsilon_frac,
                                          scenario.kappa_frac);

    sol.radiated_w.assign(static_cast<std::size_t>(L), 0.0);
    for (int l = 0; l < L; ++l)
        for (int k = 0; k < K; ++k)
            sol.radiated_w[l] += sol.rho[k] * sol.share(k, l);

    sol.W = unnormalized;
    for (int k = 0; k < K; ++k) {
        const double scale = std::sqrt(sol.rho[k] / sol.norm_sq[k]);
        for (int s = 0; s < S; ++s)
            sol.W.col(static_cast<Eigen::Index>(s) * K + k) *= scale;
    }
    return sol;
}

std::vector<double> downlink_sinr(const ChannelRealizationSet& set, const CMatrix& W, double noise_power_w)
{
    const int K = set.num_ue;
    const int S = set.samples;
    if (W.rows() != set.H.rows() || W.cols() != set.H.cols())
        throw ConfigError("precoder matrix does not match the channel set");
    if (S < 2)
        throw ConfigError("SINR evaluation needs at least two realizations");

    // gains[(k*K + i)*S + s] = h_k^H w_i in realization s
    std::vector<cdouble> gains(static_cast<std::size_t>(K) * K * S);
    for (int s = 0; s < S; ++s) {
        const CMatrix g = set.true_channels(s).adjoint() * W.middleCols(static_cast<Eigen::Index>(s) * K, K);
        for (int k = 0; k < K; ++k)
            for (int i = 0; i < K; ++i)
                gains[(static_cast<std::size_t>(k) * K + i) * S + s] = g(k, i);
    }

    std::vector<double> sinr(static_cast<std::size_t>(K));
    std::vector<double> power(static_cast<std::size_t>(S));
    for (int k = 0; k < K; ++k) {
        double received = 0.0;
        for (int i = 0; i < K; ++i) {
            const cdouble* row = &gains[(static_cast<std::size_t>(k) * K + i) * S];
            for (int s = 0; s < S; ++s)
                power[s] = std::norm(row[s]);
            received += pairwise_mean(power);
        }
        const cdouble* own = &gains[(static_cast<std::size_t>(k) * K + k) * S];
        const double signal = std::norm(pairwise_mean(std::span<const cdouble>(own, static_cast<std::size_t>(S))));
        const double denom = received - signal + noise_power_w;
        sinr[k] = denom > 0.0 ? signal / denom : 0.0;
    }
    return sinr;
}

double spectral_efficiency(double sinr, double prelog)
{
    return prelog * std::log2(1.0 + sinr);
}

double sinr_threshold(double se_threshold, double prelog)
{
    return std::exp2(se_threshold / prelog) - 1.0;
}

EvaluationResult evaluate(const ChannelRealizationSet& set, const ActivationVector& n, const Scenario& scenario,
                          double se_threshold)
{
    const int K = set.num_ue;
    EvaluationResult out;
    out.se.assign(static_cast<std::size_t>(K), 0.0);
    out.sinr.assign(static_cast<std::size_t>(K), 0.0);
    out.rho.assign(static_cast<std::size_t>(K), 0.0);
    out.radiated_w.assign(static_cast<std::size_t>(set.num_ru), 0.0);

    if (!n.all_zero()) {
        PrecodingSolution sol = precode(set, n, scenario);
        out.sinr = downlink_sinr(set, sol.W, scenario.noise_power_w);
        out.rho = std::move(sol.rho);
        out.radiated_w = std::move(sol.radiated_w);
        const double prelog = scenario.prelog();
        for (int k = 0; k < K; ++k)
            out.se[k] = spectral_efficiency(out.sinr[k], prelog);
    } else if (set.samples < 2) {
        throw ConfigError("SINR evaluation needs at least two realizations");
    }

    int violations = 0;
    for (double se : out.se)
        violations += se < se_threshold ? 1 : 0;
    out.r_vio = K > 0 ? static_cast<double>(violations) / K : 0.0;
    out.avg_se = pairwise_mean(out.se);
    out.power = total_power(scenario, n, out.radiated_w, se_threshold);
    return out;
}

} // namespace earl
