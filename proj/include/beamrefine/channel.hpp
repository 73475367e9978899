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

#include "beamrefine/rng.hpp"

namespace beamrefine
{

inline constexpr double speed_of_light = 299'792'458.0; // m/s

/**
 * Ground-truth kinematic and RF state of one user. Angles in radians,
 * range in meters, radial speed in m/s, radar cross section in m^2.
 *
 * tx_phase / bs_phase are the phases of the one-way and two-way channel
 * coefficients. The models leave them unspecified, so they are drawn once
 * per trial and stored here; the estimators must not depend on them.
 */
struct UserState
{
    double aod = 0.0;      // angle of departure at the BS (phi)
    double aoa = 0.0;      // angle of arrival at the UE (theta)
    double range = 40.0;   // line-of-sight distance d
    double speed = 20.0;   // radial velocity v
    double rcs = 100.0;    // radar cross section sigma_rcs
    double tx_phase = 0.0; // phase of the one-way coefficient h
    double bs_phase = 0.0; // phase of the two-way coefficient h'

    void validate() const;
};

/**
 * Derived link quantities. delay and doppler are the round-trip (two-way)
 * values; the UE link sees half of each.
 *
 *   |h_ue|^2 = lambda^2 / (4 pi d)^2
 *   |h_bs|^2 = lambda^2 sigma_rcs / ((4 pi)^3 d^4)
 *   delay    = 2 d / c
 *   doppler  = 2 v / lambda
 */
struct LinkCoefficients
{
    std::complex<double> h_ue;
    std::complex<double> h_bs;
    double delay;   // seconds, two-way
    double doppler; // hertz, two-way
};

LinkCoefficients link_coefficients(const UserState& state, double carrier_freq);

// i.i.d. circularly symmetric complex Gaussian noise, per-sample variance
// as given (real and imaginary parts each carry variance/2).
arma::cx_mat sample_noise(RngStream& rng, arma::uword n_rows, arma::uword n_cols, double variance);

} // namespace beamrefine
