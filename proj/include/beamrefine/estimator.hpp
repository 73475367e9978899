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
#include <stdexcept>
#include <utility>

#include "beamrefine/array_geometry.hpp"
#include "beamrefine/ofdm_link.hpp"

namespace beamrefine
{

/** Estimation-chain failure (as opposed to bad inputs). */
class estimation_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/** Scan grid for the MUSIC pseudospectrum, in demodulated angle space. */
struct MusicGridSpec
{
    double half_width; // radians; scan covers [-half_width, +half_width]
    int n_points = 256;

    // Default scan width: the filter-bank passband edge asin(beta).
    static MusicGridSpec for_bank(const ArrayConfig& cfg, int n_points = 256)
    {
        return {std::asin(cfg.beta), n_points};
    }
};

struct MusicResult
{
    double refined_offset; // phi' peak, radians (demodulated domain)
    double refined_angle;  // phi_check = asin(sin(pointed) + sin(phi'))
    arma::vec scan_angles;
    arma::vec pseudospectrum;
    arma::vec eigenvalues; // covariance eigenvalues, decreasing
    bool peak_on_boundary = false;
};

struct DelayDopplerEstimate
{
    double delay;   // seconds, in [0, 1/df)
    double doppler; // hertz, in [-1/(2 T0), 1/(2 T0))
    double objective_peak;
    bool delay_on_boundary = false;
    bool doppler_on_boundary = false;
};

/** Full refined user state with diagnostic metadata. */
struct StateEstimate
{
    double angle;    // radians
    double delay;    // seconds, two-way
    double doppler;  // hertz, two-way
    double range;    // meters
    double velocity; // m/s
    double objective_peak;
    MusicResult music;
};

// Sample covariance R = (1/NM) sum_{n,m} y[n,m] y^H[n,m].
arma::cx_mat sample_covariance(const SnapshotGrid& grid);

/**
 * Beamspace MUSIC refinement for a single source. The noise subspace is
 * spanned by the eigenvectors of the n_rf - 1 smallest eigenvalues; the
 * pseudospectrum P(phi') = ||b(phi')||^2 / ||E_n^H b(phi')||^2 uses the
 * beamspace steering b(phi') = Psi^H a(phi'), since the snapshots are
 * already demodulated by D^H. The coarse grid peak is polished by
 * golden-section search to 1e-6 rad.
 */
MusicResult music_refine(const arma::cx_mat& cov, const ReductionBank& bank,
                         const MusicGridSpec& grid);

/**
 * Projects the snapshot grid onto the refined steering direction:
 *
 *   y'[n,m] = a^H(angle) U y[n,m] / (a^H(angle) U U^H a(angle))
 *
 * Throws estimation_error when the direction falls outside the bank support
 * (vanishing denominator).
 */
arma::cx_mat beamspace_combine(const SnapshotGrid& grid, const ReductionBank& bank,
                               double refined_angle);

/**
 * Matched-filter objective |sum_{n,m} z[n,m] e^{-j2pi(n T0 nu - m df tau)}|
 * with z = y' .* conj(x), evaluated on the FFT grid nu = p/(n_fft T0),
 * tau = q/(m_fft df). Row p, column q.
 */
arma::mat delay_doppler_objective(const arma::cx_mat& y_prime, const arma::cx_mat& symbols,
                                  int n_fft, int m_fft);

/**
 * Objective argmax plus 3-point parabolic interpolation independently along
 * each axis. A peak sitting on the edge of the unambiguous range is flagged
 * and left uninterpolated on that axis. objective_out, when non-null,
 * receives the full surface (for CSV export / plotting).
 */
DelayDopplerEstimate estimate_delay_doppler(const arma::cx_mat& y_prime,
                                            const arma::cx_mat& symbols, const OfdmConfig& cfg,
                                            int n_fft, int m_fft,
                                            arma::mat* objective_out = nullptr);

// d = c tau / 2, v = nu lambda / 2.
std::pair<double, double> to_range_velocity(double delay, double doppler, double carrier_freq);

// Composition rule for refined angles (asin argument clamped to [-1, 1]).
double compose_refined_angle(double pointed_angle, double offset);

/**
 * Runs the full chain on one snapshot grid: covariance, MUSIC refinement,
 * beamspace combining and FFT delay/Doppler estimation. fft_oversampling
 * scales both transform sizes (next power of two of size * oversampling).
 */
StateEstimate estimate_user_state(const SnapshotGrid& grid, const ReductionBank& bank,
                                  const arma::cx_mat& symbols, const OfdmConfig& cfg,
                                  const MusicGridSpec& music_grid, int fft_oversampling = 4,
                                  arma::mat* objective_out = nullptr);

} // namespace beamrefine
