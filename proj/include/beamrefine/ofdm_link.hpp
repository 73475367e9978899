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

#pragma once

#include <armadillo>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "beamrefine/array_geometry.hpp"
#include "beamrefine/channel.hpp"
#include "beamrefine/rng.hpp"

namespace beamrefine
{

/**
 * Sampled-domain OFDM waveform parameters. The synthesizers work directly on
 * the (symbol, subcarrier) grid; the cyclic prefix only enters through the
 * slot duration T0 = (1 + cp_fraction) * T and the timing validation.
 */
struct OfdmConfig
{
    int n_symbols = 16;                // N
    int n_subcarriers = 512;           // M
    double subcarrier_spacing = 1.0e6; // Delta f [Hz]
    double cp_fraction = 0.25;         // T_cp / T
    double carrier_freq = 60.0e9;      // f_c [Hz]
    double tx_power = 1.0;             // P_t [W]
    int n_users = 1;                   // K
    double noise_variance = 0.0;       // sigma_n^2

    double symbol_duration() const { return 1.0 / subcarrier_spacing; }          // T
    double cp_duration() const { return cp_fraction / subcarrier_spacing; }      // T_cp
    double slot_duration() const { return (1.0 + cp_fraction) / subcarrier_spacing; } // T0
    double bandwidth() const { return n_subcarriers * subcarrier_spacing; }      // B

    void validate() const;
    void validate_against(const ArrayConfig& array) const; // adds n_users <= n_rf
};

/**
 * Information symbols x_k[n, m], unit-modulus QPSK scaled so every entry has
 * squared magnitude tx_power / n_users.
 *
 * Layout: values(n, m, k).
 */
struct SymbolGrid
{
    arma::cx_cube values; // n_symbols x n_subcarriers x n_users

    arma::cx_mat user(int k) const { return values.slice(k); }
};

/**
 * Received RF-chain observations y[n, m] after the reduction matrix.
 *
 * Layout: values(r, m, n) — slice n is the n_rf x n_subcarriers matrix of
 * symbol n, column m is the n_rf-vector y[n, m].
 */
struct SnapshotGrid
{
    arma::cx_cube values; // n_rf x n_subcarriers x n_symbols

    arma::uword n_rf() const { return values.n_rows; }
    arma::uword n_subcarriers() const { return values.n_cols; }
    arma::uword n_symbols() const { return values.n_slices; }
    arma::cx_vec at(arma::uword n, arma::uword m) const { return values.slice(n).col(m); }
};

/** Result of checking the narrowband/CP assumptions against user states. */
struct TimingReport
{
    bool pass = true;
    double max_doppler = 0.0; // Hz, two-way
    double max_delay = 0.0;   // s, two-way
    std::vector<std::string> violations;
};

SymbolGrid generate_symbols(const OfdmConfig& cfg, RngStream& rng);

// Checks max doppler <= subcarrier_spacing / 100, max delay <= T_cp and
// max delay < T. Returns a report instead of throwing.
TimingReport validate_timing(const OfdmConfig& cfg, std::span<const UserState> states);

/**
 * Exact multi-user radar snapshots, including all cross-beam terms:
 *
 *   y[n,m] = U^H( sum_k h'_k e^{j2pi(n T0 nu_k - m df tau_k)} a(phi_k)
 *                 * sum_k' a^H(phi_k) f(phihat_k') x_k'[n,m]  +  w[n,m] )
 */
SnapshotGrid radar_snapshots_exact(std::span<const UserState> states,
                                   std::span<const double> pointed_angles,
                                   const ReductionBank& bank, const OfdmConfig& cfg,
                                   const SymbolGrid& symbols, RngStream& rng);

/**
 * Single-user approximation (cross-beam terms dropped):
 *
 *   y[n,m] = U^H( h' g_t a(phi) x[n,m] e^{j2pi(n T0 nu - m df tau)} + w[n,m] )
 *
 * with g_t = a^H(phi) f(pointed), pointed = bank.pointed_angle.
 */
SnapshotGrid radar_snapshots_single(const UserState& state, const ReductionBank& bank,
                                    const OfdmConfig& cfg, const SymbolGrid& symbols,
                                    RngStream& rng, int user_index = 0);

/**
 * Received grid at the UE after FFT processing. Delay and Doppler are the
 * one-way values, i.e. half the two-way quantities:
 *
 *   y[n,m] = h g_t g_r x[n,m] e^{j2pi(n T0 nu/2 - m df tau/2)} + w[n,m]
 *
 * with g_t = a^H(aod) f(pointed_angle) on an n_antennas-element BS array.
 */
arma::cx_mat ue_received(const UserState& state, int n_antennas, double pointed_angle,
                         std::complex<double> rx_gain, const OfdmConfig& cfg,
                         const SymbolGrid& symbols, RngStream& rng, int user_index = 0);

} // namespace beamrefine
