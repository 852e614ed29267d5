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

#ifndef EARL_NUMERIC_HPP
#define EARL_NUMERIC_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace earl {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Invalid user-supplied configuration (scenario file, CLI flag, checkpoint shape).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Linear-algebra failure: non-PSD correlation, singular system, NaN.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Activation that cannot serve anybody (e.g. no active antenna when a power
// allocation is requested).
class InfeasibleConfiguration : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Pairwise (cascade) summation. The result depends only on the order of the
// input, never on how the caller produced it.
double pairwise_sum(std::span<const double> values);
cdouble pairwise_sum(std::span<const cdouble> values);

inline double pairwise_mean(std::span<const double> values)
{
    return values.empty() ? 0.0 : pairwise_sum(values) / static_cast<double>(values.size());
}

inline cdouble pairwise_mean(std::span<const cdouble> values)
{
    return values.empty() ? cdouble{} : pairwise_sum(values) / static_cast<double>(values.size());
}

// splitmix64-based stream derivation so that every (stream, index) pair gets a
// statistically independent seed from one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

// Stable 64-bit FNV-1a hash (used to fingerprint checkpoint files).
std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::string hex64(std::uint64_t value);

// Hermitian square root with eigenvalues clamped at zero. Throws NumericalError
// when an eigenvalue is below -tolerance * max(|trace|, tiny).
CMatrix hermitian_sqrt(const CMatrix& a, double tolerance = 1e-9);

} // namespace earl

#endif
