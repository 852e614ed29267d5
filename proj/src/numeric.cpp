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

#include "earl/numeric.hpp"

#include <Eigen/Eigenvalues>

#include <cstdio>

namespace earl {

namespace {

template <typename T>
T cascade(std::span<const T> v)
{
    constexpr std::size_t kBlock = 8;
    if (v.size() <= kBlock) {
        T acc{};
        for (const T& x : v)
            acc += x;
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return cascade(v.first(half)) + cascade(v.subspan(half));
}

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

double pairwise_sum(std::span<const double> values) { return cascade(values); }

cdouble pairwise_sum(std::span<const cdouble> values) { return cascade(values); }

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index)
{
    std::uint64_t state = master;
    std::uint64_t out = splitmix64(state);
    state ^= stream * 0xD1B54A32D192ED03ull;
    out ^= splitmix64(state);
    state ^= index * 0x8CB92BA72F3D8DD7ull;
    out ^= splitmix64(state);
    return out;
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t value)
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

CMatrix hermitian_sqrt(const CMatrix& a, double tolerance)
{
    if (a.rows() != a.cols())
        throw NumericalError("hermitian_sqrt: matrix is not square");
    if (a.size() == 0)
        return a;
    const double scale = std::max(a.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    if (!a.allFinite())
        throw NumericalError("hermitian_sqrt: non-finite entries");
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw NumericalError("hermitian_sqrt: matrix is not Hermitian");

    Eigen::SelfAdjointEigenSolver<CMatrix> eig(a);
    if (eig.info() != Eigen::Success)
        throw NumericalError("hermitian_sqrt: eigendecomposition failed");
    Eigen::VectorXd lambda = eig.eigenvalues();
    if (lambda.minCoeff() < -tolerance * scale * static_cast<double>(a.rows()))
        throw NumericalError("hermitian_sqrt: matrix is not positive semi-definite");
    lambda = lambda.cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().adjoint();
}

} // namespace earl
