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

#include "earl/powermodel.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace earl;

namespace {

// Constants with the 74 W / 20.8 W idle figures assigned RU-side / cloud-side.
Scenario table_reading()
{
    Scenario s;
    s.power.p_proc_ru0_w = 74.0;
    s.power.p_idle_cloud_w = 20.8;
    return s;
}

std::vector<double> zeros(int n) { return std::vector<double>(static_cast<std::size_t>(n), 0.0); }

} // namespace

TEST(Gops, PerUnitGoldenValues)
{
    const UnitGops u = unit_gops(Scenario{}, 1.5);
    EXPECT_EQ(u.filter, 40.0 * 30.72e6 / 1e9);
    EXPECT_DOUBLE_EQ(u.filter, 1.2288);
    EXPECT_EQ(u.dft, 8.0 * 2048.0 * 11.0 / (71.4e-6 * 1e9));
    EXPECT_DOUBLE_EQ(u.mod, 1.3);
    EXPECT_DOUBLE_EQ(u.cod, 5.2 * 0.25);
    EXPECT_DOUBLE_EQ(u.netw, 8.0 * 0.25);
    EXPECT_DOUBLE_EQ(u.map, 1.3 * std::pow(0.25, 1.5));
    EXPECT_DOUBLE_EQ(u.prec, 8.0 * 186.0 * 1200.0 / (71.4e-6 * 1e9 * 192.0));
    EXPECT_THROW(unit_gops(Scenario{}, -1.0), ConfigError);
}

TEST(Gops, NothingActiveNothingComputed)
{
    const GopsReport r = gops(Scenario{}, ActivationVector::zeros(16, 8), 1.5);
    EXPECT_EQ(r.cloud, 0.0);
    for (double c : r.ru_site)
        EXPECT_EQ(c, 0.0);
}

TEST(Gops, SplitMovesLoadWithoutLosingIt)
{
    Scenario s8;
    Scenario s71;
    s71.split = Split::Split71;
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> count(0, 8);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> c(16);
        for (int& x : c)
            x = count(rng);
        const ActivationVector n(c, 8);
        const GopsReport a = gops(s8, n, 1.5);
        const GopsReport b = gops(s71, n, 1.5);
        double ru8 = 0.0, ru71 = 0.0;
        for (int l = 0; l < 16; ++l) {
            ru8 += a.ru_site[l];
            ru71 += b.ru_site[l];
        }
        EXPECT_EQ(ru8, 0.0);
        EXPECT_NEAR(ru8 + a.cloud, ru71 + b.cloud, 1e-9 * (a.cloud + 1.0));
        if (!n.all_zero())
            EXPECT_GT(a.cloud, b.cloud);
    }
}

TEST(RuPower, Examples)
{
    const Scenario s = table_reading();
    const ActivationVector n({8, 0}, 8);
    const std::vector<double> p8 = ru_power(s, n, zeros(2), 1.5);
    EXPECT_DOUBLE_EQ(p8[0], 54.4);
    EXPECT_EQ(p8[1], 0.0);

    Scenario s71 = s;
    s71.split = Split::Split71;
    const std::vector<double> p71 = ru_power(s71, n, zeros(2), 1.5);
    const double c_ru = 8.0 * (1.2288 + 8.0 * 2048.0 * 11.0 / 71400.0);
    EXPECT_NEAR(p71[0] - p8[0], (74.0 + c_ru / 360.0) / 0.9, 1e-12);
    EXPECT_EQ(p71[1], 0.0);

    const std::vector<double> radiated{0.1, 0.0};
    EXPECT_DOUBLE_EQ(ru_power(s, n, radiated, 1.5)[0], 54.4 + 4.0 * 0.1);
}

TEST(CloudPower, IdleAndMonotone)
{
    const Scenario s = table_reading();
    GopsReport r;
    EXPECT_DOUBLE_EQ(cloud_power(s, r), 120.0 + 20.8 / 0.9);
    double prev = cloud_power(s, r);
    for (double c = 10.0; c < 1000.0; c *= 2.0) {
        r.cloud = c;
        EXPECT_GE(cloud_power(s, r), prev);
        prev = cloud_power(s, r);
    }
}

TEST(Fronthaul, Examples)
{
    const Scenario s;
    const FronthaulPower off = fronthaul_power(s, ActivationVector::zeros(4, 8));
    EXPECT_DOUBLE_EQ(off.cloud_w, 20.0 / 0.9);
    for (double p : off.per_ru_w)
        EXPECT_EQ(p, 0.0);

    const FronthaulPower one = fronthaul_power(s, ActivationVector({0, 3, 0, 0}, 8));
    double sum = 0.0;
    for (double p : one.per_ru_w)
        sum += p;
    EXPECT_DOUBLE_EQ(sum, 1.8);
    EXPECT_DOUBLE_EQ(one.traffic_bps, 3.0 * 30.72e6 * 2.0 * 16.0);

    const FronthaulPower a = fronthaul_power(s, ActivationVector({1, 2, 3, 4}, 8));
    const FronthaulPower b = fronthaul_power(s, ActivationVector({2, 4, 6, 8}, 8));
    EXPECT_DOUBLE_EQ(b.cloud_w * 0.9 - 20.0, 2.0 * (a.cloud_w * 0.9 - 20.0));

    Scenario s71;
    s71.split = Split::Split71;
    EXPECT_DOUBLE_EQ(fronthaul_power(s71, ActivationVector({0, 3, 0, 0}, 8)).traffic_bps,
                     3.0 * 1200.0 / 2048.0 * 30.72e6 * 2.0 * 16.0);
}

TEST(TotalPower, AllOffLeavesCloudBaselines)
{
    const Scenario s = table_reading();
    const PowerBreakdown b = total_power(s, ActivationVector::zeros(16, 8), zeros(16), 1.5);
    EXPECT_EQ(b.p_ru_radio_w, 0.0);
    EXPECT_EQ(b.p_ru_proc_w, 0.0);
    EXPECT_EQ(b.p_fh_ru_w, 0.0);
    EXPECT_DOUBLE_EQ(b.p_total_w, 120.0 + 20.8 / 0.9 + 20.0 / 0.9);
}

TEST(TotalPower, MonotoneAndExactlyAdditive)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> count(0, 8);
    std::uniform_real_distribution<double> rad(0.0, 0.2);
    for (Split split : {Split::Split8, Split::Split71}) {
        Scenario s;
        s.split = split;
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<int> lo(16), hi(16);
            std::vector<double> radiated(16);
            for (int l = 0; l < 16; ++l) {
                lo[l] = count(rng);
                hi[l] = std::min(8, lo[l] + count(rng) / 3);
                radiated[l] = rad(rng);
            }
            const PowerBreakdown a = total_power(s, ActivationVector(lo, 8), radiated, 1.5);
            const PowerBreakdown b = total_power(s, ActivationVector(hi, 8), radiated, 1.5);
            EXPECT_LE(a.p_total_w, b.p_total_w);
            EXPECT_EQ(a.p_total_w, a.p_ru_radio_w + a.p_ru_proc_w + a.p_fh_ru_w + a.p_cloud_w + a.p_fh_cloud_w);
        }
    }
}

TEST(TotalPower, PerRuSumMatchesBreakdown)
{
    Scenario s;
    s.split = Split::Split71;
    const ActivationVector n({8, 0, 3, 1}, 8);
    const std::vector<double> radiated{0.05, 0.0, 0.02, 0.01};
    const std::vector<double> per_ru = ru_power(s, n, radiated, 2.0);
    const PowerBreakdown b = total_power(s, n, radiated, 2.0);
    EXPECT_NEAR(per_ru[0] + per_ru[1] + per_ru[2] + per_ru[3], b.p_ru_radio_w + b.p_ru_proc_w, 1e-12);
}

TEST(Objective, SpreadsheetOracle)
{
    // Hand arithmetic, split 8, K = 4, target 1.5 bit/s/Hz (W_r = 1, SE_r = 0.25).
    const double netw = 2.0, cod = 1.3, mod = 1.3;
    const double prec = 8.0 * 186.0 * 1200.0 / (71400.0 * 192.0);
    const double filter = 1.2288, dft = 180224.0 / 71400.0;
    const double c0 = (netw + 4.0 * cod) / 324.0 + 20.8 + 1.8;
    const double c1 = 6.8 + (mod + 4.0 * prec + filter + dft) / 324.0;
    const ObjectiveCoefficients got = objective_coefficients(Scenario{}, 1.5);
    EXPECT_NEAR(got.c0 / c0, 1.0, 1e-12);
    EXPECT_NEAR(got.c1 / c1, 1.0, 1e-12);

    Scenario s71;
    s71.split = Split::Split71;
    const ObjectiveCoefficients c71 = objective_coefficients(s71, 1.5);
    EXPECT_NEAR(c71.c1, 6.8 + (mod + 4.0 * prec) / 324.0 + (filter + dft) / 360.0, 1e-12);
    EXPECT_GE(c71.c1, 6.8);
}

TEST(Objective, Linearity)
{
    const ObjectiveCoefficients c = objective_coefficients(Scenario{}, 1.5);
    const ActivationVector a({2, 0, 0, 0}, 8);
    const ActivationVector b({3, 0, 0, 0}, 8);
    const ActivationVector d({2, 1, 0, 0}, 8);
    EXPECT_NEAR(objective_value(c, b) - objective_value(c, a), c.c1, 1e-12);
    EXPECT_NEAR(objective_value(c, d) - objective_value(c, a), c.c0 + c.c1, 1e-12);
    EXPECT_EQ(objective_value(c, ActivationVector::zeros(4, 8)), 0.0);
}

TEST(Activation, ParseClipAndCompare)
{
    ActivationVector n = ActivationVector::parse("8;0;3", 8);
    EXPECT_EQ(n.to_string(), "8;0;3");
    EXPECT_EQ(n.total(), 11);
    EXPECT_EQ(n.active_rus(), 2);
    EXPECT_TRUE(n.set_clipped(0, 9));
    EXPECT_EQ(n[0], 8);
    EXPECT_TRUE(n.set_clipped(1, -1));
    EXPECT_EQ(n[1], 0);
    EXPECT_FALSE(n.set_clipped(2, 2));
    EXPECT_TRUE(ActivationVector::parse("1,0,2", 8).dominated_by(n));
    EXPECT_THROW(ActivationVector({9}, 8), ConfigError);
    EXPECT_THROW(ActivationVector::parse("1;x", 8), ConfigError);
}
