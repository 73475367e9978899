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

#include <cstdint>
#include <vector>

#include "beamrefine/array_geometry.hpp"
#include "beamrefine/channel.hpp"
#include "beamrefine/estimator.hpp"
#include "beamrefine/ofdm_link.hpp"

namespace beamrefine
{

/**
 * Monte-Carlo sweep over (SNR before beamforming, angle discretization
 * error). Per trial the true angle is drawn uniform in [-30 deg, +30 deg],
 * the coarse estimate is phi_hat = phi - epsilon and the synthesis noise
 * variance is back-solved from the requested snr_bbf. A SweepResult is a
 * pure function of the SweepSpec: trial (i, j, t) always consumes substream
 * derive(seed, {i, j, t}) no matter the thread count.
 */
struct SweepSpec
{
    std::vector<double> snr_bbf_db = {-30, -25, -20, -15, -10, -5, 0};
    std::vector<double> epsilon_deg = {0.5, 1.0, 1.5};
    int n_trials = 1000;
    std::uint64_t seed = 1;

    ArrayConfig array;
    OfdmConfig ofdm;       // noise_variance is ignored (back-solved per point)
    UserState user;        // kinematics; aod and phases are redrawn per trial
    double rx_gain_sq = 4.0;

    bool noiseless = false;       // zero synthesis noise, SE still uses snr_bbf
    double music_half_width = 0;  // radians; 0 = asin(beta)
    int music_points = 256;
    int fft_oversampling = 4;
    int n_threads = 0; // 0 = hardware concurrency

    void validate() const;
    MusicGridSpec music_grid() const;
};

struct TrialOutcome
{
    bool success = false;
    double true_angle = 0.0;    // radians
    double coarse_angle = 0.0;  // radians
    double refined_angle = 0.0; // radians
    double range_est = 0.0;     // meters
    double velocity_est = 0.0;  // m/s
    double se_refined = 0.0;    // bits/s/Hz
    double se_unrefined = 0.0;  // bits/s/Hz
};

struct SweepPoint
{
    double snr_bbf_db;
    double epsilon_deg;
    double se_refined_mean;
    double se_unrefined_mean;
    double rmse_angle_deg;
    double rmse_range_m;
    double rmse_velocity_mps;
    int failures;
    int n_trials;
};

struct SweepResult
{
    std::vector<SweepPoint> points; // snr-major, epsilon-minor order
};

// One end-to-end trial at the given grid point, consuming the given stream.
TrialOutcome run_trial(const SweepSpec& spec, double snr_bbf_db, double epsilon_deg,
                       RngStream& rng);

// Same, reusing a precomputed filter bank (the bank is pointing-independent).
// estimate_out / objective_out, when non-null, capture the estimator
// diagnostics (pseudospectrum, delay-Doppler surface) for export.
TrialOutcome run_trial(const SweepSpec& spec, const arma::cx_mat& psi, double snr_bbf_db,
                       double epsilon_deg, RngStream& rng,
                       StateEstimate* estimate_out = nullptr,
                       arma::mat* objective_out = nullptr);

SweepResult run_sweep(const SweepSpec& spec);

} // namespace beamrefine
