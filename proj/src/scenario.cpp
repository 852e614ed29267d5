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

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace earl {

using nlohmann::json;

std::string to_string(Split split) { return split == Split::Split8 ? "8" : "7.1"; }

Split parse_split(const std::string& text)
{
    if (text == "8" || text == "split8" || text == "Split8")
        return Split::Split8;
    if (text == "7.1" || text == "71" || text == "split7.1" || text == "Split71")
        return Split::Split71;
    throw ConfigError("unknown functional split '" + text + "' (expected 8 or 7.1)");
}

void PowerConstants::validate() const
{
    const double positives[] = {p_st_w, delta_tr, p_proc_ru0_w, p_idle_cloud_w, p_fixed_w,
                                c_ru_max_gops_per_w, c_cloud_max_gops_per_w, p_opt_w, p_olt_w,
                                delta_ptp, sigma_cool, fronthaul_ref_bps};
    for (double v : positives)
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError("power constants must be strictly positive and finite");
    if (sigma_cool > 1.0)
        throw ConfigError("sigma_cool must lie in (0, 1]");
    if (iq_bits <= 0)
        throw ConfigError("iq_bits must be positive");
}

double Scenario::thermal_noise_power(double bandwidth_hz, double noise_figure_db)
{
    const double dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double Scenario::prelog() const
{
    return static_cast<double>(tau_c - tau_p) / static_cast<double>(tau_c);
}

void Scenario::validate() const
{
    if (num_ru <= 0 || antennas_per_ru <= 0 || num_ue <= 0)
        throw ConfigError("L, N and K must be positive");
    if (tau_p <= 0 || tau_p >= tau_c)
        throw ConfigError("require 0 < tau_p < tau_c");
    if (!(rho_max_w > 0.0) || !(pilot_power_w > 0.0) || !(bandwidth_hz > 0.0))
        throw ConfigError("rho_max_w, pilot_power_w and bandwidth_hz must be positive");
    if (kappa_frac < 0.0 || kappa_frac > 1.0)
        throw ConfigError("kappa_frac must lie in [0, 1]");
    if (upsilon_frac < -1.0 || upsilon_frac > 1.0)
        throw ConfigError("upsilon_frac must lie in [-1, 1]");
    if (!(area_side_m > 0.0))
        throw ConfigError("area_side_m must be positive");
    if (!(noise_power_w > 0.0))
        throw ConfigError("noise_power_w must be positive");
    if (!(sampling_rate_hz > 0.0) || !(symbol_duration_s > 0.0) || n_dft < 2 || n_used <= 0 || n_used > n_dft)
        throw ConfigError("invalid OFDM numerology");
    if (asd_deg < 0.0 || shadow_fading_std_db < 0.0 || height_diff_m < 0.0)
        throw ConfigError("asd_deg, shadow_fading_std_db and height_diff_m must be non-negative");
    if (realizations < 2)
        throw ConfigError("realizations must be at least 2");
    power.validate();
}

namespace {

template <typename T>
void take(json& obj, const char* key, T& field)
{
    auto it = obj.find(key);
    if (it == obj.end())
        return;
    try {
        field = it->get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
    obj.erase(it);
}

void reject_leftovers(const json& obj, const std::string& where)
{
    if (!obj.empty())
        throw ConfigError("unknown key '" + obj.begin().key() + "' in " + where);
}

} // namespace

Scenario scenario_from_json_text(const std::string& text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!root.is_object())
        throw ConfigError("scenario must be a JSON object");

    Scenario s;
    take(root, "area_side_m", s.area_side_m);
    take(root, "L", s.num_ru);
    take(root, "N", s.antennas_per_ru);
    take(root, "K", s.num_ue);
    take(root, "tau_c", s.tau_c);
    take(root, "tau_p", s.tau_p);
    take(root, "bandwidth_hz", s.bandwidth_hz);
    take(root, "sampling_rate_hz", s.sampling_rate_hz);
    take(root, "n_dft", s.n_dft);
    take(root, "n_used", s.n_used);
    take(root, "symbol_duration_s", s.symbol_duration_s);
    take(root, "pilot_power_w", s.pilot_power_w);
    take(root, "rho_max_w", s.rho_max_w);
    take(root, "upsilon_frac", s.upsilon_frac);
    take(root, "kappa_frac", s.kappa_frac);
    take(root, "asd_deg", s.asd_deg);
    take(root, "noise_figure_db", s.noise_figure_db);
    take(root, "height_diff_m", s.height_diff_m);
    take(root, "shadow_fading_std_db", s.shadow_fading_std_db);
    take(root, "realizations", s.realizations);
    take(root, "seed", s.seed);

    s.noise_power_w = Scenario::thermal_noise_power(s.bandwidth_hz, s.noise_figure_db);
    take(root, "noise_power_w", s.noise_power_w);

    if (auto it = root.find("split"); it != root.end()) {
        s.split = parse_split(it->is_string() ? it->get<std::string>() : it->dump());
        root.erase(it);
    }
    if (auto it = root.find("omega_statistic"); it != root.end()) {
        const auto v = it->get<std::string>();
        if (v == "norm")
            s.omega = OmegaStatistic::Norm;
        else if (v == "squared_norm")
            s.omega = OmegaStatistic::SquaredNorm;
        else
            throw ConfigError("omega_statistic must be 'norm' or 'squared_norm'");
        root.erase(it);
    }
    if (auto it = root.find("power_constants"); it != root.end()) {
        json pc = *it;
        if (!pc.is_object())
            throw ConfigError("power_constants must be an object");
        PowerConstants& p = s.power;
        take(pc, "p_st_w", p.p_st_w);
        take(pc, "delta_tr", p.delta_tr);
        take(pc, "p_proc_ru0_w", p.p_proc_ru0_w);
        take(pc, "p_idle_cloud_w", p.p_idle_cloud_w);
        take(pc, "p_fixed_w", p.p_fixed_w);
        take(pc, "c_ru_max_gops_per_w", p.c_ru_max_gops_per_w);
        take(pc, "c_cloud_max_gops_per_w", p.c_cloud_max_gops_per_w);
        take(pc, "p_opt_w", p.p_opt_w);
        take(pc, "p_olt_w", p.p_olt_w);
        take(pc, "delta_ptp", p.delta_ptp);
        take(pc, "sigma_cool", p.sigma_cool);
        take(pc, "fronthaul_ref_bps", p.fronthaul_ref_bps);
        take(pc, "iq_bits", p.iq_bits);
        reject_leftovers(pc, "power_constants");
        root.erase(it);
    }
    reject_leftovers(root, "scenario");
    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_json_text(buf.str());
}

std::string scenario_to_json_text(const Scenario& s)
{
    const PowerConstants& p = s.power;
    json j = {
        {"area_side_m", s.area_side_m},
        {"L", s.num_ru},
        {"N", s.antennas_per_ru},
        {"K", s.num_ue},
        {"tau_c", s.tau_c},
        {"tau_p", s.tau_p},
        {"bandwidth_hz", s.bandwidth_hz},
        {"sampling_rate_hz", s.sampling_rate_hz},
        {"n_dft", s.n_dft},
        {"n_used", s.n_used},
        {"symbol_duration_s", s.symbol_duration_s},
        {"pilot_power_w", s.pilot_power_w},
        {"rho_max_w", s.rho_max_w},
        {"upsilon_frac", s.upsilon_frac},
        {"kappa_frac", s.kappa_frac},
        {"asd_deg", s.asd_deg},
        {"noise_figure_db", s.noise_figure_db},
        {"noise_power_w", s.noise_power_w},
        {"height_diff_m", s.height_diff_m},
        {"shadow_fading_std_db", s.shadow_fading_std_db},
        {"omega_statistic", s.omega == OmegaStatistic::Norm ? "norm" : "squared_norm"},
        {"split", to_string(s.split)},
        {"realizations", s.realizations},
        {"seed", s.seed},
        {"power_constants",
         {{"p_st_w", p.p_st_w},
          {"delta_tr", p.delta_tr},
          {"p_proc_ru0_w", p.p_proc_ru0_w},
          {"p_idle_cloud_w", p.p_idle_cloud_w},
          {"p_fixed_w", p.p_fixed_w},
          {"c_ru_max_gops_per_w", p.c_ru_max_gops_per_w},
          {"c_cloud_max_gops_per_w", p.c_cloud_max_gops_per_w},
          {"p_opt_w", p.p_opt_w},
          {"p_olt_w", p.p_olt_w},
          {"delta_ptp", p.delta_ptp},
          {"sigma_cool", p.sigma_cool},
          {"fronthaul_ref_bps", p.fronthaul_ref_bps},
          {"iq_bits", p.iq_bits}}},
    };
    return j.dump(2);
}

Deployment build_deployment(const Scenario& scenario, std::uint64_t seed)
{
    // Row-major cols x rows grid; square when L is a perfect square.
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(scenario.num_ru)) - 1e-9));
    const int rows = (scenario.num_ru + cols - 1) / cols;
    const double pitch_x = scenario.area_side_m / cols;
    const double pitch_y = scenario.area_side_m / rows;

    Deployment d;
    d.ru_positions.reserve(scenario.num_ru);
    for (int l = 0; l < scenario.num_ru; ++l)
        d.ru_positions.push_back({pitch_x / 2 + (l % cols) * pitch_x, pitch_y / 2 + (l / cols) * pitch_y});

    std::mt19937_64 rng(derive_seed(seed, 0x5545, 0));
    std::uniform_real_distribution<double> uniform(0.0, scenario.area_side_m);
    d.ue_positions.reserve(scenario.num_ue);
    for (int k = 0; k < scenario.num_ue; ++k) {
        const double x = uniform(rng);
        const double y = uniform(rng);
        d.ue_positions.push_back({x, y});
    }
    return d;
}

double pathloss_db(double distance_m)
{
    return -30.5 - 36.7 * std::log10(std::max(distance_m, 1.0));
}

double large_scale_gain_db(Point2 ru, Point2 ue, double height_diff_m)
{
    const double dx = ue.x - ru.x;
    const double dy = ue.y - ru.y;
    return pathloss_db(std::sqrt(dx * dx + dy * dy + height_diff_m * height_diff_m));
}

double large_scale_gain(Point2 ru, Point2 ue, double height_diff_m)
{
    return std::pow(10.0, large_scale_gain_db(ru, ue, height_diff_m) / 10.0);
}

CMatrix local_scattering_correlation(int antennas, double beta, double bearing_rad, double asd_rad)
{
    CMatrix r(antennas, antennas);
    const double s = std::sin(bearing_rad);
    const double c = std::cos(bearing_rad);
    const double spread = asd_rad * asd_rad * std::numbers::pi * std::numbers::pi / 2.0;
    for (int m = 0; m < antennas; ++m) {
        for (int n = 0; n < antennas; ++n) {
            const double d = static_cast<double>(m - n);
            const double mag = beta * std::exp(-spread * d * d * c * c);
            r(m, n) = std::polar(mag, std::numbers::pi * d * s);
        }
    }
    return r;
}

CMatrix spatial_correlation(Point2 ru, Point2 ue, const Scenario& scenario)
{
    const double beta = large_scale_gain(ru, ue, scenario.height_diff_m);
    const double bearing = std::atan2(ue.y - ru.y, ue.x - ru.x);
    return local_scattering_correlation(scenario.antennas_per_ru, beta, bearing,
                                        scenario.asd_deg * std::numbers::pi / 180.0);
}

Eigen::MatrixXd gain_matrix_db(const Scenario& scenario, const Deployment& deployment, std::uint64_t seed)
{
    const int L = static_cast<int>(deployment.ru_positions.size());
    const int K = static_cast<int>(deployment.ue_positions.size());
    Eigen::MatrixXd g(L, K);
    std::mt19937_64 rng(derive_seed(seed, 0x5348, 0));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 0; k < K; ++k) {
        for (int l = 0; l < L; ++l) {
            g(l, k) = large_scale_gain_db(deployment.ru_positions[l], deployment.ue_positions[k],
                                          scenario.height_diff_m);
            if (scenario.shadow_fading_std_db > 0.0)
                g(l, k) += scenario.shadow_fading_std_db * normal(rng);
        }
    }
    return g;
}

} // namespace earl
