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

#include "beamrefine/ofdm_link.hpp"

#include <cmath>
#include <stdexcept>

namespace beamrefine
{

namespace
{

// exp(j 2 pi n T0 nu) for n = 0..N-1
arma::cx_vec doppler_phasors(int n_symbols, double slot_duration, double doppler)
{
    arma::cx_vec p(n_symbols);
    for (int n = 0; n < n_symbols; ++n)
        p[n] = std::polar(1.0, 2.0 * M_PI * n * slot_duration * doppler);
    return p;
}

// exp(-j 2 pi m df tau) for m = 0..M-1
arma::cx_vec delay_phasors(int n_subcarriers, double subcarrier_spacing, double delay)
{
    arma::cx_vec p(n_subcarriers);
    for (int m = 0; m < n_subcarriers; ++m)
        p[m] = std::polar(1.0, -2.0 * M_PI * m * subcarrier_spacing * delay);
    return p;
}

} // namespace

void OfdmConfig::validate() const
{
    if (n_symbols < 1)
        throw std::invalid_argument("ofdm: n_symbols must be positive");
    if (n_subcarriers < 1)
        throw std::invalid_argument("ofdm: n_subcarriers must be positive");
    if (!(subcarrier_spacing > 0.0))
        throw std::invalid_argument("ofdm: subcarrier_spacing must be positive");
    if (!(cp_fraction > 0.0 && cp_fraction < 1.0))
        throw std::invalid_argument("ofdm: cp_fraction must lie in (0, 1)");
    if (!(carrier_freq > 0.0))
        throw std::invalid_argument("ofdm: carrier_freq must be positive");
    if (!(tx_power > 0.0))
        throw std::invalid_argument("ofdm: tx_power must be positive");
    if (n_users < 1)
        throw std::invalid_argument("ofdm: n_users must be positive");
    if (noise_variance < 0.0)
        throw std::invalid_argument("ofdm: noise_variance must be nonnegative");
}

void OfdmConfig::validate_against(const ArrayConfig& array) const
{
    validate();
    array.validate();
    if (n_users > array.n_rf)
        throw std::invalid_argument("ofdm: n_users must not exceed n_rf");
}

SymbolGrid generate_symbols(const OfdmConfig& cfg, RngStream& rng)
{
    cfg.validate();

    const double amp = std::sqrt(cfg.tx_power / cfg.n_users);
    const double re[4] = {M_SQRT1_2, -M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2};
    const double im[4] = {M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2, -M_SQRT1_2};

    SymbolGrid grid;
    grid.values.set_size(cfg.n_symbols, cfg.n_subcarriers, cfg.n_users);
    for (int k = 0; k < cfg.n_users; ++k)
        for (int m = 0; m < cfg.n_subcarriers; ++m)
            for (int n = 0; n < cfg.n_symbols; ++n)
            {
                const auto idx = static_cast<unsigned>(rng.next_u64() & 3u);
                grid.values(n, m, k) = std::complex<double>(amp * re[idx], amp * im[idx]);
            }
    return grid;
}

TimingReport validate_timing(const OfdmConfig& cfg, std::span<const UserState> states)
{
    cfg.validate();

    TimingReport report;
    for (const UserState& s : states)
    {
        const LinkCoefficients lc = link_coefficients(s, cfg.carrier_freq);
        report.max_doppler = std::max(report.max_doppler, std::abs(lc.doppler));
        report.max_delay = std::max(report.max_delay, lc.delay);
    }

    if (report.max_doppler > cfg.subcarrier_spacing / 100.0)
    {
        report.pass = false;
        report.violations.push_back(
            "max two-way doppler " + std::to_string(report.max_doppler) +
            " Hz exceeds subcarrier_spacing/100 = " + std::to_string(cfg.subcarrier_spacing / 100.0) + " Hz");
    }
    if (report.max_delay > cfg.cp_duration())
    {
        report.pass = false;
        report.violations.push_back(
            "max two-way delay " + std::to_string(report.max_delay * 1e9) +
            " ns exceeds cyclic prefix " + std::to_string(cfg.cp_duration() * 1e9) + " ns");
    }
    if (report.max_delay >= cfg.symbol_duration())
    {
        report.pass = false;
        report.violations.push_back(
            "max two-way delay " + std::to_string(report.max_delay * 1e9) +
            " ns reaches the symbol duration; subcarrier phase becomes ambiguous");
    }
    return report;
}

SnapshotGrid radar_snapshots_exact(std::span<const UserState> states,
                                   std::span<const double> pointed_angles,
                                   const ReductionBank& bank, const OfdmConfig& cfg,
                                   const SymbolGrid& symbols, RngStream& rng)
{
    cfg.validate();
    const int n_users = static_cast<int>(states.size());
    if (n_users == 0)
        throw std::invalid_argument("radar_snapshots_exact: no users");
    if (pointed_angles.size() != states.size())
        throw std::invalid_argument("radar_snapshots_exact: pointed_angles size mismatch");
    if (symbols.values.n_slices != static_cast<arma::uword>(n_users) ||
        symbols.values.n_rows != static_cast<arma::uword>(cfg.n_symbols) ||
        symbols.values.n_cols != static_cast<arma::uword>(cfg.n_subcarriers))
        throw std::invalid_argument("radar_snapshots_exact: symbol grid dimensions mismatch");

    const int n_antennas = static_cast<int>(bank.u.n_rows);
    const int n_rf = static_cast<int>(bank.u.n_cols);
    const int n_sym = cfg.n_symbols;
    const int n_sub = cfg.n_subcarriers;

    // Per-user spatial signatures through the bank and cross-beam gain table
    // G(k, k') = a^H(phi_k) f(pointed_k').
    arma::cx_mat u_sig(n_rf, n_users);
    arma::cx_mat gains(n_users, n_users);
    std::vector<LinkCoefficients> links(n_users);
    std::vector<arma::cx_vec> dop(n_users), del(n_users);
    for (int k = 0; k < n_users; ++k)
    {
        const arma::cx_vec a = steering_vector(n_antennas, states[k].aod);
        u_sig.col(k) = bank.u.t() * a;
        for (int kp = 0; kp < n_users; ++kp)
            gains(k, kp) = array_gain(states[k].aod, pointed_angles[kp], n_antennas);
        links[k] = link_coefficients(states[k], cfg.carrier_freq);
        dop[k] = doppler_phasors(n_sym, cfg.slot_duration(), links[k].doppler);
        del[k] = delay_phasors(n_sub, cfg.subcarrier_spacing, links[k].delay);
    }

    SnapshotGrid out;
    out.values.set_size(n_rf, n_sub, n_sym);

    const arma::cx_mat u_herm = bank.u.t();
    arma::cx_mat sources(n_users, n_sub);
    for (int n = 0; n < n_sym; ++n)
    {
        for (int k = 0; k < n_users; ++k)
        {
            const std::complex<double> c = links[k].h_bs * dop[k][n];
            for (int m = 0; m < n_sub; ++m)
            {
                std::complex<double> tx = 0.0;
                for (int kp = 0; kp < n_users; ++kp)
                    tx += gains(k, kp) * symbols.values(n, m, kp);
                sources(k, m) = c * del[k][m] * tx;
            }
        }
        out.values.slice(n) = u_sig * sources;
        if (cfg.noise_variance > 0.0)
            out.values.slice(n) += u_herm * sample_noise(rng, n_antennas, n_sub, cfg.noise_variance);
    }
    return out;
}

SnapshotGrid radar_snapshots_single(const UserState& state, const ReductionBank& bank,
                                    const OfdmConfig& cfg, const SymbolGrid& symbols,
                                    RngStream& rng, int user_index)
{
    cfg.validate();
    if (symbols.values.n_rows != static_cast<arma::uword>(cfg.n_symbols) ||
        symbols.values.n_cols != static_cast<arma::uword>(cfg.n_subcarriers) ||
        static_cast<arma::uword>(user_index) >= symbols.values.n_slices)
        throw std::invalid_argument("radar_snapshots_single: symbol grid dimensions mismatch");

    const int n_antennas = static_cast<int>(bank.u.n_rows);
    const int n_rf = static_cast<int>(bank.u.n_cols);
    const int n_sym = cfg.n_symbols;
    const int n_sub = cfg.n_subcarriers;

    const LinkCoefficients lc = link_coefficients(state, cfg.carrier_freq);
    const std::complex<double> g_t = array_gain(state.aod, bank.pointed_angle, n_antennas);
    const arma::cx_vec u_sig = bank.u.t() * steering_vector(n_antennas, state.aod);
    const arma::cx_vec dop = doppler_phasors(n_sym, cfg.slot_duration(), lc.doppler);
    const arma::cx_vec del = delay_phasors(n_sub, cfg.subcarrier_spacing, lc.delay);

    SnapshotGrid out;
    out.values.set_size(n_rf, n_sub, n_sym);

    const arma::cx_mat u_herm = bank.u.t();
    arma::cx_rowvec scale(n_sub);
    for (int n = 0; n < n_sym; ++n)
    {
        const std::complex<double> c = lc.h_bs * g_t * dop[n];
        for (int m = 0; m < n_sub; ++m)
            scale[m] = c * del[m] * symbols.values(n, m, user_index);
        out.values.slice(n) = u_sig * scale;
        if (cfg.noise_variance > 0.0)
            out.values.slice(n) += u_herm * sample_noise(rng, n_antennas, n_sub, cfg.noise_variance);
    }
    return out;
}

arma::cx_mat ue_received(const UserState& state, int n_antennas, double pointed_angle,
                         std::complex<double> rx_gain, const OfdmConfig& cfg,
                         const SymbolGrid& symbols, RngStream& rng, int user_index)
{
    cfg.validate();
    if (symbols.values.n_rows != static_cast<arma::uword>(cfg.n_symbols) ||
        symbols.values.n_cols != static_cast<arma::uword>(cfg.n_subcarriers) ||
        static_cast<arma::uword>(user_index) >= symbols.values.n_slices)
        throw std::invalid_argument("ue_received: symbol grid dimensions mismatch");

    const int n_sym = cfg.n_symbols;
    const int n_sub = cfg.n_subcarriers;

    const LinkCoefficients lc = link_coefficients(state, cfg.carrier_freq);
    // One-way delay and Doppler are half the two-way values.
    const arma::cx_vec dop = doppler_phasors(n_sym, cfg.slot_duration(), lc.doppler / 2.0);
    const arma::cx_vec del = delay_phasors(n_sub, cfg.subcarrier_spacing, lc.delay / 2.0);

    const std::complex<double> g_t = array_gain(state.aod, pointed_angle, n_antennas);
    const std::complex<double> coeff = lc.h_ue * g_t * rx_gain;

    arma::cx_mat y(n_sym, n_sub);
    for (int m = 0; m < n_sub; ++m)
        for (int n = 0; n < n_sym; ++n)
            y(n, m) = coeff * dop[n] * del[m] * symbols.values(n, m, user_index);

    if (cfg.noise_variance > 0.0)
        y += sample_noise(rng, n_sym, n_sub, cfg.noise_variance);
    return y;
}

} // namespace beamrefine
