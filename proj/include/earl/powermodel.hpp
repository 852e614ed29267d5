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

#ifndef EARL_POWERMODEL_HPP
#define EARL_POWERMODEL_HPP

#include "earl/activation.hpp"
#include "earl/scenario.hpp"

#include <span>
#include <vector>

namespace earl {

struct PowerBreakdown {
    double p_ru_radio_w = 0.0;   // RF chains plus load-dependent transmit power
    double p_ru_proc_w = 0.0;    // RU-site processing (split 7.1 only)
    double p_fh_ru_w = 0.0;      // RU optical transceivers
    double p_cloud_w = 0.0;
    double p_fh_cloud_w = 0.0;
    double p_total_w = 0.0;
};

// GOPS of one processing function for one unit of its scaling factor.
struct UnitGops {
    double filter = 0.0;   // per antenna
    double dft = 0.0;      // per antenna
    double map = 0.0;      // per served UE
    double prec = 0.0;     // per antenna and served UE
    double mod = 0.0;      // per antenna
    double cod = 0.0;      // per served UE
    double netw = 0.0;     // per active RU
};

// W_r = B / 20 MHz, SE_r = se_target / 6.
UnitGops unit_gops(const Scenario& scenario, double se_target);

struct FunctionGops {
    double filter = 0.0;
    double dft = 0.0;
    double map = 0.0;
    double prec = 0.0;
    double mod = 0.0;
    double cod = 0.0;
    double netw = 0.0;

    double sum() const { return filter + dft + map + prec + mod + cod + netw; }
};

struct GopsReport {
    std::vector<FunctionGops> per_ru;   // total load generated by RU l's chains
    std::vector<double> ru_site;        // C_RU,l (filter + DFT under split 7.1, else 0)
    double cloud = 0.0;                 // C_cloud
};

// All-serve-all: r_il = 1 for every UE when n_l > 0.
GopsReport gops(const Scenario& scenario, const ActivationVector& n, double se_target);

// Per-RU power. `radiated_w[l]` is the transmit power radiated by RU l.
std::vector<double> ru_power(const Scenario& scenario, const ActivationVector& n, std::span<const double> radiated_w,
                             double se_target);

double cloud_power(const Scenario& scenario, const GopsReport& report);

struct FronthaulPower {
    std::vector<double> per_ru_w;
    double cloud_w = 0.0;
    double traffic_bps = 0.0;
};

FronthaulPower fronthaul_power(const Scenario& scenario, const ActivationVector& n);

PowerBreakdown total_power(const Scenario& scenario, const ActivationVector& n, std::span<const double> radiated_w,
                           double se_target);

struct ObjectiveCoefficients {
    double c0 = 0.0;   // W per active RU
    double c1 = 0.0;   // W per active antenna
};

ObjectiveCoefficients objective_coefficients(const Scenario& scenario, double se_target);

// c0 ||n||_0 + c1 ||n||_1
double objective_value(const ObjectiveCoefficients& c, const ActivationVector& n);

} // namespace earl

#endif
