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

#ifndef EARL_SCENARIO_HPP
#define EARL_SCENARIO_HPP

#include "earl/numeric.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace earl {

enum class Split { Split8, Split71 };

std::string to_string(Split split);
Split parse_split(const std::string& text);

// Which per-RU precoder statistic feeds the fractional power allocation.
// Norm: max_l E||w_kl||; SquaredNorm: max_l E||w_kl||^2. Both are taken on the
// unit-average-power precoder w_k / sqrt(E||w_k||^2).
enum class OmegaStatistic { Norm, SquaredNorm };

struct PowerConstants {
    double p_st_w = 6.8;            // per active RF chain
    double delta_tr = 4.0;          // transmit-power slope
    double p_proc_ru0_w = 20.8;     // RU idle processing (split 7.1 only)
    double p_idle_cloud_w = 74.0;   // cloud idle processing
    double p_fixed_w = 120.0;
    double c_ru_max_gops_per_w = 360.0;
    double c_cloud_max_gops_per_w = 360.0;
    double p_opt_w = 1.8;           // per active RU optical transceiver
    double p_olt_w = 20.0;          // cloud-side optical baseline
    double delta_ptp = 4.6;         // W per fronthaul_ref_bps of traffic
    double sigma_cool = 0.9;
    double fronthaul_ref_bps = 100e9;
    int iq_bits = 16;               // bits per I or Q component

    void validate() const;
};

struct Scenario {
    double area_side_m = 400.0;
    int num_ru = 16;                // L
    int antennas_per_ru = 8;        // N
    int num_ue = 4;                 // K
    int tau_c = 192;
    int tau_p = 6;
    double bandwidth_hz = 20e6;
    double sampling_rate_hz = 30.72e6;
    int n_dft = 2048;
    int n_used = 1200;
    double symbol_duration_s = 71.4e-6;
    double pilot_power_w = 0.1;
    double rho_max_w = 0.2;
    double upsilon_frac = -0.5;
    double kappa_frac = 0.5;
    double asd_deg = 15.0;
    double noise_figure_db = 7.0;
    double noise_power_w = thermal_noise_power(20e6, 7.0);
    double height_diff_m = 10.0;
    double shadow_fading_std_db = 0.0;
    OmegaStatistic omega = OmegaStatistic::Norm;
    Split split = Split::Split8;
    PowerConstants power;
    int realizations = 100;         // Monte-Carlo batch for control decisions
    std::uint64_t seed = 1;

    // Throws ConfigError on the first violated invariant.
    void validate() const;

    int total_antennas() const { return num_ru * antennas_per_ru; }
    // (tau_c - tau_p) / tau_c
    double prelog() const;

    static double thermal_noise_power(double bandwidth_hz, double noise_figure_db);
};

// JSON round trip. Every field is an optional key; missing keys keep the
// defaults above. `noise_power_w` is recomputed from bandwidth and noise
// figure unless given explicitly. Unknown keys are rejected.
Scenario scenario_from_json_text(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json_text(const Scenario& scenario);

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct Deployment {
    std::vector<Point2> ru_positions;
    std::vector<Point2> ue_positions;
};

// RUs on a regular grid of ceil(sqrt(L)) columns, half a pitch from the
// edges (sqrt(L) x sqrt(L) for square L); UEs i.i.d. uniform over the square.
// Pure function of (scenario, seed).
Deployment build_deployment(const Scenario& scenario, std::uint64_t seed);

double pathloss_db(double distance_m);
double large_scale_gain_db(Point2 ru, Point2 ue, double height_diff_m = 10.0);
double large_scale_gain(Point2 ru, Point2 ue, double height_diff_m = 10.0);

// Gaussian local-scattering correlation of a half-wavelength ULA, scaled so
// that trace(R) = N * beta.
CMatrix local_scattering_correlation(int antennas, double beta, double bearing_rad, double asd_rad);
CMatrix spatial_correlation(Point2 ru, Point2 ue, const Scenario& scenario);

// L x K matrix of large-scale gains in dB, including log-normal shadowing when
// scenario.shadow_fading_std_db > 0 (drawn from `seed`).
Eigen::MatrixXd gain_matrix_db(const Scenario& scenario, const Deployment& deployment, std::uint64_t seed);

} // namespace earl

#endif
