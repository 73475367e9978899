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

namespace beamrefine
{

/**
 * Static geometry of the hybrid receiver: a half-wavelength uniform linear
 * array with n_antennas elements feeding n_rf RF chains through a tunable
 * phase-shifter network and a fixed bank of spatial filters.
 *
 * beta is the dimensionless half-width (in sin-space, divided by pi) of the
 * band the filter bank concentrates on; n_rf <= beta * n_antennas keeps all
 * selected filters well concentrated.
 */
struct ArrayConfig
{
    int n_antennas = 64;
    int n_rf = 4;
    double beta = 4.0 / 64.0;

    void validate() const; // throws std::invalid_argument on violation
};

/**
 * The reduction matrix U(phi_hat) = D(phi_hat) * Psi mapping n_antennas
 * antenna ports to n_rf RF-chain observations.
 *
 * d_diag holds the diagonal of the phase-shifter matrix D, psi the fixed
 * filter bank, u their product. U is semi-unitary: U^H U = I.
 */
struct ReductionBank
{
    arma::cx_vec d_diag;  // [i] = exp(+j * i * pi * sin(pointed_angle));
                          // D^H (as applied inside U^H) demodulates the pointing
    arma::cx_mat psi;     // n_antennas x n_rf, orthonormal columns
    arma::cx_mat u;       // n_antennas x n_rf
    double pointed_angle; // radians
};

// ULA array response, [a(angle)]_i = exp(j * pi * i * sin(angle)).
// angle must lie in [-pi/2, pi/2].
arma::cx_vec steering_vector(int n_antennas, double angle);

// Unit-norm transmit beamformer f(angle) = a(angle) / sqrt(n_antennas).
arma::cx_vec tx_beamformer(int n_antennas, double angle);

// Transmit array gain g_t = a^H(true_angle) * f(pointed_angle).
std::complex<double> array_gain(double true_angle, double pointed_angle, int n_antennas);

// Diagonal of the phase-shifter matrix D(pointed_angle).
arma::cx_vec phase_shift_network(int n_antennas, double pointed_angle);

/**
 * Spectral concentration matrix over the band [-beta*pi, beta*pi] of
 * sin-space, in closed form:
 *
 *   Gamma[p, q] = sin((p - q) * beta * pi) / ((p - q) * pi),  Gamma[p, p] = beta.
 *
 * Real symmetric, positive semidefinite, trace = n * beta.
 */
arma::mat concentration_matrix(int n, double beta);

/**
 * The fixed filter bank: eigenvectors of the concentration matrix for the
 * n_rf largest eigenvalues, ordered by decreasing eigenvalue. Each column is
 * rotated so its largest-magnitude entry is real positive, which pins the
 * eigenvector gauge and makes the bank reproducible across eigensolvers.
 *
 * If eigenvalues is non-null it receives the n_rf concentration eigenvalues
 * in decreasing order.
 */
arma::cx_mat slepian_bank(const ArrayConfig& cfg, arma::vec* eigenvalues = nullptr);

// U(phi_hat) = D(phi_hat) * Psi with Psi recomputed from cfg.
ReductionBank reduction_matrix(const ArrayConfig& cfg, double pointed_angle);

// Same, reusing a precomputed bank (Psi does not depend on the pointing).
ReductionBank reduction_matrix(const ArrayConfig& cfg, const arma::cx_mat& psi, double pointed_angle);

} // namespace beamrefine
