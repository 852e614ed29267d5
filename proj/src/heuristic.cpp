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

#include "earl/heuristic.hpp"
#include "earl/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace earl {

HeuristicWeighting parse_heuristic_weighting(const std::string& text)
{
    if (text == "linear")
        return HeuristicWeighting::LinearShare;
    if (text == "shifted-db")
        return HeuristicWeighting::ShiftedDb;
    if (text == "magnitude-db")
        return HeuristicWeighting::MagnitudeDb;
    throw ConfigError("unknown heuristic weighting '" + text + "'");
}

ActivationVector heuristic_allocate(const Eigen::MatrixXd& gain_db, int antennas_per_ru, double alpha,
                                    HeuristicWeighting weighting)
{
    const Eigen::Index L = gain_db.rows();
    const Eigen::Index K = gain_db.cols();
    if (L == 0 || K == 0)
        throw ConfigError("empty gain matrix");
    if (!gain_db.allFinite())
        throw ConfigError("gain matrix must be finite");
    if (!(alpha > 0.0))
        throw ConfigError("alpha must be positive");

    Eigen::MatrixXd weight_src;
    Eigen::MatrixXd share_src;
    switch (weighting) {
    case HeuristicWeighting::MagnitudeDb:
        weight_src = gain_db.cwiseAbs();
        share_src = weight_src;
        break;
    case HeuristicWeighting::ShiftedDb:
        weight_src = gain_db.array() - gain_db.minCoeff() + 1.0;
        share_src = weight_src;
        break;
    case HeuristicWeighting::LinearShare: {
        weight_src = gain_db.array() - gain_db.minCoeff() + 1.0;
        // Normalize per UE before leaving the dB domain so weak UEs do not underflow.
        share_src = (gain_db.rowwise() - gain_db.colwise().maxCoeff()).unaryExpr([](double db) {
            return std::pow(10.0, db / 10.0);
        });
        break;
    }
    }

    Eigen::VectorXd v(K);
    for (Eigen::Index k = 0; k < K; ++k)
        v(k) = std::pow(weight_src.col(k).array().pow(alpha).sum(), 1.0 / alpha);
    if (!(v.sum() > 0.0))
        throw ConfigError("all-zero gains");
    v /= v.sum();

    Eigen::MatrixXd share = share_src;
    for (Eigen::Index k = 0; k < K; ++k) {
        const double col = share.col(k).sum();
        if (!(col > 0.0))
            throw ConfigError("all-zero gains for a UE");
        share.col(k) /= col;
    }

    // Tolerance keeps exactly-integral products (symmetric layouts) from
    // flooring one below.
    constexpr double kFloorSlack = 1e-9;
    const double budget = static_cast<double>(L) * antennas_per_ru;
    std::vector<int> counts(static_cast<std::size_t>(L));
    for (Eigen::Index l = 0; l < L; ++l) {
        const double want = (share.row(l) * v)(0) * budget;
        counts[l] = std::min(antennas_per_ru, static_cast<int>(std::floor(want + kFloorSlack)));
    }
    return ActivationVector(std::move(counts), antennas_per_ru);
}

} // namespace earl
