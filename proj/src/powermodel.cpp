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
#include "earl/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace earl {

ActivationVector::ActivationVector(std::vector<int> counts, int antennas_per_ru)
    : counts_(std::move(counts)), max_(antennas_per_ru)
{
    if (max_ < 0)
        throw ConfigError("antennas per RU must be non-negative");
    for (int c : counts_)
        if (c < 0 || c > max_)
            throw ConfigError("activation count out of range [0, N]");
}

ActivationVector ActivationVector::full(int num_ru, int antennas_per_ru)
{
    return ActivationVector(std::vector<int>(static_cast<std::size_t>(num_ru), antennas_per_ru), antennas_per_ru);
}

ActivationVector ActivationVector::zeros(int num_ru, int antennas_per_ru)
{
    return ActivationVector(std::vector<int>(static_cast<std::size_t>(num_ru), 0), antennas_per_ru);
}

bool ActivationVector::set_clipped(int l, int value)
{
    const int clipped = std::clamp(value, 0, max_);
    counts_[static_cast<std::size_t>(l)] = clipped;
    return clipped != value;
}

int ActivationVector::total() const
{
    int t = 0;
    for (int c : counts_)
        t += c;
    return t;
}

int ActivationVector::active_rus() const
{
    int t = 0;
    for (int c : counts_)
        t += c > 0 ? 1 : 0;
    return t;
}

bool ActivationVector::dominated_by(const ActivationVector& other) const
{
    if (other.size() != size())
        return false;
    for (int l = 0; l < size(); ++l)
        if (counts_[l] > other[l])
            return false;
    return true;
}

std::string ActivationVector::to_string() const
{
    std::string out;
    for (std::size_t l = 0; l < counts_.size(); ++l) {
        if (l)
            out += ';';
        out += std::to_string(counts_[l]);
    }
    return out;
}

ActivationVector ActivationVector::parse(const std::string& text, int antennas_per_ru)
{
    std::vector<int> counts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, text.find(';') != std::string::npos ? ';' : ',')) {
        try {
            std::size_t used = 0;
            counts.push_back(std::stoi(item, &used));
            if (used != item.size())
                throw ConfigError("bad activation entry '" + item + "'");
        } catch (const std::logic_error&) {
            throw ConfigError("bad activation entry '" + item + "'");
        }
    }
    return ActivationVector(std::move(counts), antennas_per_ru);
}

UnitGops unit_gops(const Scenario& s, double se_target)
{
    if (se_target < 0.0)
        throw ConfigError("SE target must be non-negative");
    const double w_r = s.bandwidth_hz / 20e6;
    const double se_r = se_target / 6.0;
    const double ts_giga = s.symbol_duration_s * 1e9;
    const int tau_d = s.tau_c - s.tau_p;

    UnitGops u;
    u.filter = 40.0 * s.sampling_rate_hz / 1e9;
    u.dft = 8.0 * s.n_dft * std::log2(static_cast<double>(s.n_dft)) / ts_giga;
    u.map = 1.3 * w_r * std::pow(se_r, 1.5);
    u.prec = 8.0 * tau_d * s.n_used / (ts_giga * s.tau_c);
    u.mod = 1.3 * w_r;
    u.cod = 5.2 * w_r * se_r;
    u.netw = 8.0 * w_r * se_r;
    return u;
}

GopsReport gops(const Scenario& s, const ActivationVector& n, double se_target)
{
    const UnitGops u = unit_gops(s, se_target);
    const bool ru_low_phy = s.split == Split::Split71;
    const double served = static_cast<double>(s.num_ue);

    GopsReport report;
    report.per_ru.resize(static_cast<std::size_t>(n.size()));
    report.ru_site.assign(static_cast<std::size_t>(n.size()), 0.0);
    for (int l = 0; l < n.size(); ++l) {
        if (n[l] == 0)
            continue;
        const double ant = n[l];
        FunctionGops& f = report.per_ru[l];
        f.filter = u.filter * ant;
        f.dft = u.dft * ant;
        f.map = u.map * served;
        f.prec = u.prec * ant * served;
        f.mod = u.mod * ant;
        f.cod = u.cod * served;
        f.netw = u.netw;

        const double low_phy = f.filter + f.dft;
        const double high_phy = f.map + f.prec + f.mod + f.cod + f.netw;
        if (ru_low_phy) {
            report.ru_site[l] = low_phy;
            report.cloud += high_phy;
        } else {
            report.cloud += low_phy + high_phy;
        }
    }
    return report;
}

std::vector<double> ru_power(const Scenario& s, const ActivationVector& n, std::span<const double> radiated_w,
                             double se_target)
{
    if (static_cast<int>(radiated_w.size()) != n.size())
        throw ConfigError("radiated power vector must have one entry per RU");
    const PowerConstants& pc = s.power;
    const GopsReport report = gops(s, n, se_target);
    const double x = s.split == Split::Split71 ? 1.0 : 0.0;

    std::vector<double> out(static_cast<std::size_t>(n.size()), 0.0);
    for (int l = 0; l < n.size(); ++l) {
        if (n[l] == 0)
            continue;
        const double proc = x / pc.sigma_cool * (pc.p_proc_ru0_w + report.ru_site[l] / pc.c_ru_max_gops_per_w);
        out[l] = n[l] * pc.p_st_w + pc.delta_tr * radiated_w[l] + proc;
    }
    return out;
}

double cloud_power(const Scenario& s, const GopsReport& report)
{
    const PowerConstants& pc = s.power;
    return pc.p_fixed_w + (pc.p_idle_cloud_w + report.cloud / pc.c_cloud_max_gops_per_w) / pc.sigma_cool;
}

FronthaulPower fronthaul_power(const Scenario& s, const ActivationVector& n)
{
    const PowerConstants& pc = s.power;
    const double per_antenna_bps = s.sampling_rate_hz * 2.0 * pc.iq_bits *
                                   (s.split == Split::Split71 ? static_cast<double>(s.n_used) / s.n_dft : 1.0);
    FronthaulPower fh;
    fh.per_ru_w.assign(static_cast<std::size_t>(n.size()), 0.0);
    for (int l = 0; l < n.size(); ++l) {
        if (n[l] > 0)
            fh.per_ru_w[l] = pc.p_opt_w;
        fh.traffic_bps += n[l] * per_antenna_bps;
    }
    fh.cloud_w = (pc.p_olt_w + pc.delta_ptp * fh.traffic_bps / pc.fronthaul_ref_bps) / pc.sigma_cool;
    return fh;
}

PowerBreakdown total_power(const Scenario& s, const ActivationVector& n, std::span<const double> radiated_w,
                           double se_target)
{
    if (static_cast<int>(radiated_w.size()) != n.size())
        throw ConfigError("radiated power vector must have one entry per RU");
    const PowerConstants& pc = s.power;
    const GopsReport report = gops(s, n, se_target);
    const double x = s.split == Split::Split71 ? 1.0 : 0.0;
    const FronthaulPower fh = fronthaul_power(s, n);

    PowerBreakdown b;
    for (int l = 0; l < n.size(); ++l) {
        if (n[l] == 0)
            continue;
        b.p_ru_radio_w += n[l] * pc.p_st_w + pc.delta_tr * radiated_w[l];
        b.p_ru_proc_w += x / pc.sigma_cool * (pc.p_proc_ru0_w + report.ru_site[l] / pc.c_ru_max_gops_per_w);
        b.p_fh_ru_w += fh.per_ru_w[l];
    }
    b.p_cloud_w = cloud_power(s, report);
    b.p_fh_cloud_w = fh.cloud_w;
    b.p_total_w = b.p_ru_radio_w + b.p_ru_proc_w + b.p_fh_ru_w + b.p_cloud_w + b.p_fh_cloud_w;
    return b;
}

ObjectiveCoefficients objective_coefficients(const Scenario& s, double se_target)
{
    const PowerConstants& pc = s.power;
    const UnitGops u = unit_gops(s, se_target);
    const double x = s.split == Split::Split71 ? 1.0 : 0.0;
    const double k = s.num_ue;
    const double cloud_w_per_gops = 1.0 / (pc.c_cloud_max_gops_per_w * pc.sigma_cool);

    ObjectiveCoefficients c;
    c.c0 = (u.netw + k * u.cod) * cloud_w_per_gops + pc.p_proc_ru0_w + pc.p_opt_w;
    c.c1 = pc.p_st_w + (u.mod + k * u.prec + (1.0 - x) * (u.filter + u.dft)) * cloud_w_per_gops +
           x * (u.filter + u.dft) / pc.c_ru_max_gops_per_w;
    return c;
}

double objective_value(const ObjectiveCoefficients& c, const ActivationVector& n)
{
    return c.c0 * n.active_rus() + c.c1 * n.total();
}

} // namespace earl
