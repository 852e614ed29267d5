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

#ifndef EARL_ACTIVATION_HPP
#define EARL_ACTIVATION_HPP

#include <span>
#include <string>
#include <vector>

namespace earl {

// Number of active antennas per RU, 0 <= n_l <= N. The decision variable of
// every controller.
class ActivationVector {
public:
    ActivationVector() = default;
    ActivationVector(std::vector<int> counts, int antennas_per_ru);

    static ActivationVector full(int num_ru, int antennas_per_ru);
    static ActivationVector zeros(int num_ru, int antennas_per_ru);

    int size() const { return static_cast<int>(counts_.size()); }
    int antennas_per_ru() const { return max_; }
    int operator[](int l) const { return counts_[static_cast<std::size_t>(l)]; }
    std::span<const int> counts() const { return counts_; }

    // Sets n_l, clipping into [0, N]. Returns true when clipping was needed.
    bool set_clipped(int l, int value);

    int total() const;          // ||n||_1
    int active_rus() const;     // ||n||_0
    bool all_zero() const { return total() == 0; }
    bool is_full() const { return total() == size() * max_; }

    // Elementwise n <= other.
    bool dominated_by(const ActivationVector& other) const;

    // "8;8;0;3" form used in CSV output.
    std::string to_string() const;
    static ActivationVector parse(const std::string& text, int antennas_per_ru);

    friend bool operator==(const ActivationVector&, const ActivationVector&) = default;

private:
    std::vector<int> counts_;
    int max_ = 0;
};

} // namespace earl

#endif
