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

#include "earl/channel.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

namespace earl {

namespace {

constexpr std::uint64_t kStreamChannel = 0x4348414e;
constexpr std::uint64_t kStreamPilotNoise = 0x504e4f49;

CVector complex_gaussian(int size, double variance, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    CVector g(size);
    for (int i = 0; i < size; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        g(i) = {re, im};
    }
    return g;
}

CMatrix hermitize(const CMatrix& m) { return (m + m.adjoint()) / 2.0; }

} // namespace

std::vector<int> assign_pilots(const Eigen::MatrixXd& beta, int tau_p)
{
    if (tau_p < 1)
        throw ConfigError("tau_p must be at least 1");
    const int K = static_cast<int>(beta.rows());
    std::vector<int> pilot(static_cast<std::size_t>(K));
    std::vector<int> load(static_cast<std::size_t>(tau_p), 0);
    std::vector<double> overlap(static_cast<std::size_t>(tau_p), 0.0);

    for (int k = 0; k < K; ++k) {
        int chosen = k;
        if (k >= tau_p) {
            const int min_load = *std::min_element(load.begin(), load.end());
            chosen = -1;
            for (int t = 0; t < tau_p; ++t) {
                if (load[t] != min_load)
                    continue;
                if (chosen < 0 || overlap[t] < overlap[chosen])
                    chosen = t;
            }
        }
        pilot[k] = chosen;
        ++load[chosen];
        overlap[chosen] += beta.row(k).sum();
    }
    return pilot;
}

CMatrix draw_true_channels(const PairTable<CMatrix>& R, int antennas, int samples, std::uint64_t seed)
{
    const int K = R.num_ue();
    const int L = R.num_ru();
    PairTable<CMatrix> root(K, L);
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < L; ++l)
            root(k, l) = hermitian_sqrt(R(k, l));

    CMatrix H(static_cast<Eigen::Index>(L) * antennas, static_cast<Eigen::Index>(samples) * K);
    for (int s = 0; s < samples; ++s) {
        std::mt19937_64 rng(derive_seed(seed, kStreamChannel, static_cast<std::uint64_t>(s)));
        for (int k = 0; k < K; ++k)
            for (int l = 0; l < L; ++l)
                H.block(static_cast<Eigen::Index>(l) * antennas, static_cast<Eigen::Index>(s) * K + k, antennas, 1) =
                    root(k, l) * complex_gaussian(antennas, 1.0, rng);
    }
    return H;
}

MmseEstimate mmse_estimate(const PairTable<CMatrix>& R, const std::vector<int>& pilot_index, double pilot_power_w,
                           int tau_p, double noise_power_w, const CMatrix& H, int antennas, std::uint64_t seed)
{
    const int K = R.num_ue();
    const int L = R.num_ru();
    const int N = antennas;
    if (static_cast<int>(pilot_index.size()) != K)
        throw ConfigError("pilot_index length does not match the number of UEs");
    if (H.rows() != static_cast<Eigen::Index>(L) * N || H.cols() % K != 0)
        throw ConfigError("channel matrix has the wrong shape");
    const int S = static_cast<int>(H.cols() / K);
    const double ptau = pilot_power_w * tau_p;
    const double sqrt_ptau = std::sqrt(ptau);
    const CMatrix eye = CMatrix::Identity(N, N);

    MmseEstimate out{CMatrix::Zero(H.rows(), H.cols()), PairTable<CMatrix>(K, L), PairTable<CMatrix>(K, L)};
    PairTable<CMatrix> filter(K, L);   // sqrt(p tau) R_kl Psi^{-1}

    for (int l = 0; l < L; ++l) {
        for (int t = 0; t < tau_p; ++t) {
            CMatrix psi = noise_power_w * eye;
            bool used = false;
            for (int i = 0; i < K; ++i) {
                if (pilot_index[i] == t) {
                    psi += ptau * R(i, l);
                    used = true;
                }
            }
            if (!used)
                continue;
            Eigen::LLT<CMatrix> llt(psi);
            if (llt.info() != Eigen::Success)
                throw NumericalError("pilot covariance is not positive definite");
            const CMatrix psi_inv = llt.solve(eye);
            for (int k = 0; k < K; ++k) {
                if (pilot_index[k] != t)
                    continue;
                const CMatrix& r = R(k, l);
                filter(k, l) = sqrt_ptau * r * psi_inv;
                out.B(k, l) = hermitize(ptau * r * psi_inv * r);
                out.C(k, l) = hermitize(r - out.B(k, l));
            }
        }
    }

    for (int s = 0; s < S; ++s) {
        std::mt19937_64 rng(derive_seed(seed, kStreamPilotNoise, static_cast<std::uint64_t>(s)));
        const Eigen::Index col0 = static_cast<Eigen::Index>(s) * K;
        for (int l = 0; l < L; ++l) {
            const Eigen::Index row0 = static_cast<Eigen::Index>(l) * N;
            for (int t = 0; t < tau_p; ++t) {
                CVector y = complex_gaussian(N, noise_power_w, rng);
                bool used = false;
                for (int i = 0; i < K; ++i) {
                    if (pilot_index[i] == t) {
                        y += sqrt_ptau * H.block(row0, col0 + i, N, 1);
                        used = true;
                    }
                }
                if (!used)
                    continue;
                for (int k = 0; k < K; ++k)
                    if (pilot_index[k] == t)
                        out.H_hat.block(row0, col0 + k, N, 1) = filter(k, l) * y;
            }
        }
    }
    return out;
}

ChannelRealizationSet generate_channels(const Scenario& scenario, const Deployment& deployment, int samples,
                                        std::uint64_t seed)
{
    const int L = static_cast<int>(deployment.ru_positions.size());
    const int K = static_cast<int>(deployment.ue_positions.size());
    const int N = scenario.antennas_per_ru;
    if (samples < 1)
        throw ConfigError("at least one channel realization is required");

    ChannelRealizationSet set;
    set.num_ru = L;
    set.antennas = N;
    set.num_ue = K;
    set.samples = samples;
    set.R = PairTable<CMatrix>(K, L);
    set.beta.resize(K, L);

    const Eigen::MatrixXd gain_db = gain_matrix_db(scenario, deployment, seed);
    const double asd = scenario.asd_deg * std::numbers::pi / 180.0;
    for (int k = 0; k < K; ++k) {
        for (int l = 0; l < L; ++l) {
            const Point2 ru = deployment.ru_positions[l];
            const Point2 ue = deployment.ue_positions[k];
            const double beta = std::pow(10.0, gain_db(l, k) / 10.0);
            set.beta(k, l) = beta;
            set.R(k, l) = local_scattering_correlation(N, beta, std::atan2(ue.y - ru.y, ue.x - ru.x), asd);
        }
    }
    set.pilot_index = assign_pilots(set.beta, scenario.tau_p);
    set.H = draw_true_channels(set.R, N, samples, derive_seed(seed, kStreamChannel, 1));
    MmseEstimate est = mmse_estimate(set.R, set.pilot_index, scenario.pilot_power_w, scenario.tau_p,
                                     scenario.noise_power_w, set.H, N, derive_seed(seed, kStreamPilotNoise, 1));
    set.H_hat = std::move(est.H_hat);
    set.B = std::move(est.B);
    set.C = std::move(est.C);
    return set;
}

namespace {

constexpr char kMagic[8] = {'E', 'A', 'R', 'L', 'C', 'H', 'S', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, const T& v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in)
{
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in)
        throw ConfigError("channel set file is truncated");
    return v;
}

void put_matrix(std::ofstream& out, const CMatrix& m)
{
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            put(out, static_cast<float>(m(r, c).real()));
            put(out, static_cast<float>(m(r, c).imag()));
        }
}

CMatrix get_matrix(std::ifstream& in, Eigen::Index rows, Eigen::Index cols)
{
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const float re = get<float>(in);
            const float im = get<float>(in);
            m(r, c) = {re, im};
        }
    return m;
}

} // namespace

void save_channel_set(const std::filesystem::path& path, const ChannelRealizationSet& set)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write " + path.string());
    out.write(kMagic, sizeof(kMagic));
    put(out, kVersion);
    put(out, static_cast<std::int32_t>(set.num_ru));
    put(out, static_cast<std::int32_t>(set.antennas));
    put(out, static_cast<std::int32_t>(set.num_ue));
    put(out, static_cast<std::int32_t>(set.samples));
    for (int p : set.pilot_index)
        put(out, static_cast<std::int32_t>(p));
    for (int k = 0; k < set.num_ue; ++k)
        for (int l = 0; l < set.num_ru; ++l)
            put(out, set.beta(k, l));
    for (const PairTable<CMatrix>* table : {&set.R, &set.B, &set.C})
        for (int k = 0; k < set.num_ue; ++k)
            for (int l = 0; l < set.num_ru; ++l)
                put_matrix(out, (*table)(k, l));
    put_matrix(out, set.H);
    put_matrix(out, set.H_hat);
}

ChannelRealizationSet load_channel_set(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw ConfigError(path.string() + " is not a channel set file");
    if (get<std::uint32_t>(in) != kVersion)
        throw ConfigError("unsupported channel set version");

    ChannelRealizationSet set;
    set.num_ru = get<std::int32_t>(in);
    set.antennas = get<std::int32_t>(in);
    set.num_ue = get<std::int32_t>(in);
    set.samples = get<std::int32_t>(in);
    if (set.num_ru <= 0 || set.antennas <= 0 || set.num_ue <= 0 || set.samples <= 0)
        throw ConfigError("corrupt channel set header");
    for (int k = 0; k < set.num_ue; ++k)
        set.pilot_index.push_back(get<std::int32_t>(in));
    set.beta.resize(set.num_ue, set.num_ru);
    for (int k = 0; k < set.num_ue; ++k)
        for (int l = 0; l < set.num_ru; ++l)
            set.beta(k, l) = get<double>(in);
    for (PairTable<CMatrix>* table : {&set.R, &set.B, &set.C}) {
        *table = PairTable<CMatrix>(set.num_ue, set.num_ru);
        for (int k = 0; k < set.num_ue; ++k)
            for (int l = 0; l < set.num_ru; ++l)
                (*table)(k, l) = get_matrix(in, set.antennas, set.antennas);
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(set.num_ru) * set.antennas;
    const Eigen::Index cols = static_cast<Eigen::Index>(set.samples) * set.num_ue;
    set.H = get_matrix(in, rows, cols);
    set.H_hat = get_matrix(in, rows, cols);
    return set;
}

} // namespace earl
