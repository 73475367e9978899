// SPDX-License-Identifier: Apache-2.0
//
// beamrefine: OFDM radar beam refinement and user state estimation simulator
// Copyright (C) 2026 beamrefine contributors
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

#include "beamrefine/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace beamrefine
{

namespace
{

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v)
{
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size())
        throw std::invalid_argument("not a number: '" + v + "'");
    return d;
}

int parse_int(const std::string& v)
{
    std::size_t pos = 0;
    long d = std::stol(v, &pos);
    if (pos != v.size())
        throw std::invalid_argument("not an integer: '" + v + "'");
    return static_cast<int>(d);
}

std::uint64_t parse_u64(const std::string& v)
{
    std::size_t pos = 0;
    unsigned long long d = std::stoull(v, &pos);
    if (pos != v.size())
        throw std::invalid_argument("not an unsigned integer: '" + v + "'");
    return d;
}

bool parse_bool(const std::string& v)
{
    if (v == "true" || v == "1")
        return true;
    if (v == "false" || v == "0")
        return false;
    throw std::invalid_argument("not a boolean (true/false/1/0): '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(trim(item)));
    if (out.empty())
        throw std::invalid_argument("empty list");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& key_table()
{
    static const std::map<std::string, Setter> table = {
        {"seed", [](RunConfig& c, const std::string& v) { c.sweep.seed = parse_u64(v); }},
        {"array.n_antennas",
         [](RunConfig& c, const std::string& v) { c.sweep.array.n_antennas = parse_int(v); }},
        {"array.n_rf",
         [](RunConfig& c, const std::string& v) { c.sweep.array.n_rf = parse_int(v); }},
        {"array.beta",
         [](RunConfig& c, const std::string& v) { c.sweep.array.beta = parse_double(v); }},
        {"ofdm.n_symbols",
         [](RunConfig& c, const std::string& v) { c.sweep.ofdm.n_symbols = parse_int(v); }},
        {"ofdm.n_subcarriers",
         [](RunConfig& c, const std::string& v) { c.sweep.ofdm.n_subcarriers = parse_int(v); }},
        {"ofdm.subcarrier_spacing_hz",
         [](RunConfig& c, const std::string& v) { c.sweep.ofdm.subcarrier_spacing = parse_double(v); }},
        {"ofdm.cp_fraction",
         [](RunConfig& c, const std::string& v) { c.sweep.ofdm.cp_fraction = parse_double(v); }},
        {"ofdm.carrier_freq_hz",
         [](RunConfig& c, const std::string& v) { c.sweep.ofdm.carrier_freq = parse_double(v); }},
        {"ofdm.tx_power_w",
         [](RunConfig& c, const std::string& v) { c.sweep.ofdm.tx_power = parse_double(v); }},
        {"ofdm.n_users",
         [](RunConfig& c, const std::string& v) { c.sweep.ofdm.n_users = parse_int(v); }},
        {"user.range_m",
         [](RunConfig& c, const std::string& v) { c.sweep.user.range = parse_double(v); }},
        {"user.speed_mps",
         [](RunConfig& c, const std::string& v) { c.sweep.user.speed = parse_double(v); }},
        {"user.rcs_dbsm",
         [](RunConfig& c, const std::string& v) {
             c.sweep.user.rcs = std::pow(10.0, parse_double(v) / 10.0);
         }},
        {"user.rx_gain_sq",
         [](RunConfig& c, const std::string& v) { c.sweep.rx_gain_sq = parse_double(v); }},
        {"sweep.snr_bbf_db",
         [](RunConfig& c, const std::string& v) { c.sweep.snr_bbf_db = parse_double_list(v); }},
        {"sweep.epsilon_deg",
         [](RunConfig& c, const std::string& v) { c.sweep.epsilon_deg = parse_double_list(v); }},
        {"sweep.n_trials",
         [](RunConfig& c, const std::string& v) { c.sweep.n_trials = parse_int(v); }},
        {"sweep.noiseless",
         [](RunConfig& c, const std::string& v) { c.sweep.noiseless = parse_bool(v); }},
        {"trial.epsilon_deg",
         [](RunConfig& c, const std::string& v) { c.trial_epsilon_deg = parse_double(v); }},
        {"trial.snr_bbf_db",
         [](RunConfig& c, const std::string& v) { c.trial_snr_bbf_db = parse_double(v); }},
        {"trial.noiseless",
         [](RunConfig& c, const std::string& v) { c.trial_noiseless = parse_bool(v); }},
        {"music.n_points",
         [](RunConfig& c, const std::string& v) { c.sweep.music_points = parse_int(v); }},
        {"music.half_width_deg",
         [](RunConfig& c, const std::string& v) {
             c.sweep.music_half_width = parse_double(v) * M_PI / 180.0;
         }},
        {"est.fft_oversampling",
         [](RunConfig& c, const std::string& v) { c.sweep.fft_oversampling = parse_int(v); }},
        {"run.n_threads",
         [](RunConfig& c, const std::string& v) { c.sweep.n_threads = parse_int(v); }},
    };
    return table;
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value,
               const std::string& where, int line)
{
    const auto& table = key_table();
    const auto it = table.find(key);
    if (it == table.end())
        throw config_error(where, line, "unknown key '" + key + "'");
    try
    {
        it->second(cfg, value);
    }
    catch (const std::exception& e)
    {
        throw config_error(where, line, "key '" + key + "': " + e.what());
    }
}

// Fixed-format float that round-trips doubles and is locale-independent.
std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

void RunConfig::validate() const
{
    sweep.validate();
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error(path, 0, "cannot open config file");

    RunConfig cfg;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw))
    {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path, line_no, "expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error(path, line_no, "empty key");
        apply_key(cfg, key, value, path, line_no);
    }
    return cfg;
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value)
{
    apply_key(cfg, key, value, "--set " + key, 0);
}

void write_sweep_se_csv(const SweepResult& result, std::ostream& out)
{
    out << "snr_bbf_db,epsilon_deg,se_refined,se_unrefined\n";
    for (const SweepPoint& p : result.points)
        out << fmt(p.snr_bbf_db) << ',' << fmt(p.epsilon_deg) << ',' << fmt(p.se_refined_mean)
            << ',' << fmt(p.se_unrefined_mean) << '\n';
}

void write_sweep_rmse_csv(const SweepResult& result, std::ostream& out)
{
    out << "snr_bbf_db,epsilon_deg,rmse_angle_deg,rmse_range_m,rmse_velocity_mps,failures\n";
    for (const SweepPoint& p : result.points)
        out << fmt(p.snr_bbf_db) << ',' << fmt(p.epsilon_deg) << ',' << fmt(p.rmse_angle_deg)
            << ',' << fmt(p.rmse_range_m) << ',' << fmt(p.rmse_velocity_mps) << ','
            << p.failures << '\n';
}

void write_slepian_csv(const ArrayConfig& array, std::ostream& out)
{
    const arma::cx_mat psi = slepian_bank(array);

    out << "angle_deg";
    for (int i = 1; i <= array.n_rf; ++i)
        out << ",psi" << i << "_db";
    out << '\n';

    for (int deg = -90; deg <= 90; ++deg)
    {
        const double angle = deg * M_PI / 180.0;
        const arma::cx_vec a = steering_vector(array.n_antennas, angle);
        out << deg;
        for (int i = 0; i < array.n_rf; ++i)
        {
            const std::complex<double> resp = arma::cdot(psi.col(i), a);
            const double power = std::max(std::norm(resp), 1e-300);
            out << ',' << fmt(10.0 * std::log10(power));
        }
        out << '\n';
    }
}

void write_pseudospectrum_csv(const MusicResult& music, std::ostream& out)
{
    out << "offset_deg,magnitude\n";
    for (arma::uword i = 0; i < music.scan_angles.n_elem; ++i)
        out << fmt(music.scan_angles[i] * 180.0 / M_PI) << ','
            << fmt(music.pseudospectrum[i]) << '\n';
}

void write_objective_csv(const arma::mat& objective, const OfdmConfig& ofdm, std::ostream& out)
{
    const int n_fft = static_cast<int>(objective.n_rows);
    const int m_fft = static_cast<int>(objective.n_cols);

    out << "doppler_hz,delay_s,magnitude\n";
    for (int p = 0; p < n_fft; ++p)
    {
        const int p_signed = (p < n_fft / 2) ? p : p - n_fft;
        const double doppler = p_signed / (n_fft * ofdm.slot_duration());
        for (int q = 0; q < m_fft; ++q)
        {
            const double delay = q / (m_fft * ofdm.subcarrier_spacing);
            out << fmt(doppler) << ',' << fmt(delay) << ',' << fmt(objective(p, q)) << '\n';
        }
    }
}

void write_snapshot_csv(const SnapshotGrid& grid, std::ostream& out)
{
    out << "n,m";
    for (arma::uword r = 0; r < grid.n_rf(); ++r)
        out << ",re" << r << ",im" << r;
    out << '\n';

    for (arma::uword n = 0; n < grid.n_symbols(); ++n)
        for (arma::uword m = 0; m < grid.n_subcarriers(); ++m)
        {
            out << n << ',' << m;
            for (arma::uword r = 0; r < grid.n_rf(); ++r)
            {
                const std::complex<double> v = grid.values(r, m, n);
                out << ',' << fmt(v.real()) << ',' << fmt(v.imag());
            }
            out << '\n';
        }
}

} // namespace beamrefine
