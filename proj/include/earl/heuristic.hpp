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

#ifndef EARL_HEURISTIC_HPP
#define EARL_HEURISTIC_HPP

#include "earl/activation.hpp"

#include <Eigen/Dense>

#include <string>

namespace earl {

// How large-scale gains become antenna shares.
//   LinearShare: UE weight from the alpha-norm of shifted-positive dB gains,
//                per-RU share from linear gains b_lk / sum_l b_lk.
//   ShiftedDb:   both from shifted-positive dB gains g = b_dB - min + 1.
//   MagnitudeDb: both from |b_dB|.
enum class HeuristicWeighting { LinearShare, ShiftedDb, MagnitudeDb };

HeuristicWeighting parse_heuristic_weighting(const std::string& text);

// n_l = min(N, floor(sum_k v_k s_lk L N)). `gain_db` is L x K.
ActivationVector heuristic_allocate(const Eigen::MatrixXd& gain_db, int antennas_per_ru, double alpha = 1.0,
                                    HeuristicWeighting weighting = HeuristicWeighting::LinearShare);

} // namespace earl

#endif
