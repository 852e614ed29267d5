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

#include "earl/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace earl;

TEST(Pathloss, TenfoldDistanceCosts36p7Db)
{
    // Independent of the implementation: 10^(-36.7/10) per decade.
    EXPECT_NEAR(std::pow(10.0, (pathloss_db(100.0) - pathloss_db(10.0)) / 10.0), std::pow(10.0, -3.67), 1e-15);
    EXPECT_DOUBLE_EQ(pathloss_db(1.0), -30.5);
}

TEST(Pathloss, GainUsesThreeDimensionalDistance)
{
    const Point2 ru{0.0, 0.0};
    const Point2 ue{30.0, 40.0};
    EXPECT_DOUBLE_EQ(large_scale_gain_db(ru, ue, 0.0), -30.5 - 36.7 * std::log10(50.0));
    EXPECT_DOUBLE_EQ(large_scale_gain_db(ru, ue, 10.0), -30.5 - 36.7 * std::log10(std::sqrt(2600.0)));
    // Co-located with zero height is clamped to the 1 m reference.
    EXPECT_DOUBLE_EQ(large_scale_gain_db(ru, ru, 0.0), -30.5);
}

TEST(Scenario, DefaultsAndDerivedQuantities)
{
    const Scenario s;
    EXPECT_NO_THROW(s.validate());
    EXPECT_EQ(s.total_antennas(), 128);
    EXPECT_DOUBLE_EQ(s.prelog(), 186.0 / 192.0);
    EXPECT_DOUBLE_EQ(s.prelog(), 0.96875);
    const double expected = std::pow(10.0, (-174.0 + 10.0 * std::log10(20e6) + 7.0 - 30.0) / 10.0);
    EXPECT_NEAR(s.noise_power_w / expected, 1.0, 1e-12);
}

TEST(Scenario, ValidationRejectsBadValues)
{
    Scenario s;
    s.tau_p = 0;
    EXPECT_THROW(s.validate(), ConfigError);
    s = Scenario{};
    s.realizations = 1;
    EXPECT_THROW(s.validate(), ConfigError);
    s = Scenario{};
    s.power.sigma_cool = 1.5;
    EXPECT_THROW(s.validate(), ConfigError);
}

TEST(ScenarioJson, RoundTripAndOverrides)
{
    Scenario s;
    s.num_ru = 4;
    s.antennas_per_ru = 4;
    s.num_ue = 2;
    s.split = Split::Split71;
    s.omega = OmegaStatistic::SquaredNorm;
    s.power.p_proc_ru0_w = 74.0;
    const Scenario back = scenario_from_json_text(scenario_to_json_text(s));
    EXPECT_EQ(back.num_ru, 4);
    EXPECT_EQ(back.num_ue, 2);
    EXPECT_EQ(back.split, Split::Split71);
    EXPECT_EQ(back.omega, OmegaStatistic::SquaredNorm);
    EXPECT_DOUBLE_EQ(back.power.p_proc_ru0_w, 74.0);
    EXPECT_DOUBLE_EQ(back.noise_power_w, s.noise_power_w);

    const Scenario b = scenario_from_json_text(R"({"bandwidth_hz": 10e6})");
    EXPECT_NEAR(b.noise_power_w / Scenario::thermal_noise_power(10e6, 7.0), 1.0, 1e-12);
}

TEST(ScenarioJson, RejectsUnknownKeysAndBadTypes)
{
    EXPECT_THROW(scenario_from_json_text(R"({"LL": 3})"), ConfigError);
    EXPECT_THROW(scenario_from_json_text(R"({"power_constants": {"p_st": 1}})"), ConfigError);
    EXPECT_THROW(scenario_from_json_text(R"({"L": "four"})"), ConfigError);
    EXPECT_THROW(scenario_from_json_text("[1, 2]"), ConfigError);
    EXPECT_THROW(scenario_from_json_text("{"), ConfigError);
    EXPECT_THROW(scenario_from_json_text(R"({"split": "6"})"), ConfigError);
}

TEST(Deployment, GridLayoutAndUniformUes)
{
    Scenario s;
    const Deployment d = build_deployment(s, 11);
    ASSERT_EQ(d.ru_positions.size(), 16u);
    ASSERT_EQ(d.ue_positions.size(), 4u);
    EXPECT_DOUBLE_EQ(d.ru_positions[0].x, 50.0);
    EXPECT_DOUBLE_EQ(d.ru_positions[0].y, 50.0);
    EXPECT_DOUBLE_EQ(d.ru_positions[1].x, 150.0);
    EXPECT_DOUBLE_EQ(d.ru_positions[4].y, 150.0);
    for (const Point2& p : d.ue_positions) {
        EXPECT_GE(p.x, 0.0);
        EXPECT_LE(p.x, 400.0);
        EXPECT_GE(p.y, 0.0);
        EXPECT_LE(p.y, 400.0);
    }
    const Deployment again = build_deployment(s, 11);
    EXPECT_EQ(again.ue_positions[2].x, d.ue_positions[2].x);
    const Deployment other = build_deployment(s, 12);
    EXPECT_NE(other.ue_positions[0].x, d.ue_positions[0].x);

    s.num_ru = 2;
    const Deployment pair = build_deployment(s, 1);
    EXPECT_DOUBLE_EQ(pair.ru_positions[0].x, 100.0);
    EXPECT_DOUBLE_EQ(pair.ru_positions[1].x, 300.0);
    EXPECT_DOUBLE_EQ(pair.ru_positions[1].y, 200.0);
}

TEST(Correlation, TraceDiagonalAndToeplitz)
{
    const double beta = 1e-9;
    const CMatrix r = local_scattering_correlation(6, beta, 0.4, 15.0 * std::numbers::pi / 180.0);
    EXPECT_NEAR(r.trace().real() / (6 * beta), 1.0, 1e-12);
    EXPECT_LT((r - r.adjoint()).norm(), 1e-24);
    for (int m = 1; m < 6; ++m)
        for (int n = 1; n < 6; ++n)
            EXPECT_NEAR(std::abs(r(m, n) - r(m - 1, n - 1)), 0.0, 1e-24);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12 * beta);

    // Zero spread gives a rank-one steering-vector outer product.
    const CMatrix r0 = local_scattering_correlation(4, 1.0, 0.4, 0.0);
    Eigen::SelfAdjointEigenSolver<CMatrix> es0(r0);
    EXPECT_NEAR(es0.eigenvalues()(3), 4.0, 1e-12);
    EXPECT_NEAR(es0.eigenvalues().head(3).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(GainMatrix, ShadowingIsSeededAndOptional)
{
    Scenario s;
    const Deployment d = build_deployment(s, 3);
    const Eigen::MatrixXd g = gain_matrix_db(s, d, 3);
    EXPECT_EQ(g.rows(), 16);
    EXPECT_EQ(g.cols(), 4);
    EXPECT_DOUBLE_EQ(g(5, 2), large_scale_gain_db(d.ru_positions[5], d.ue_positions[2]));
    s.shadow_fading_std_db = 8.0;
    const Eigen::MatrixXd a = gain_matrix_db(s, d, 3);
    const Eigen::MatrixXd b = gain_matrix_db(s, d, 3);
    EXPECT_EQ(a, b);
    EXPECT_GT((a - g).cwiseAbs().maxCoeff(), 0.1);
}
