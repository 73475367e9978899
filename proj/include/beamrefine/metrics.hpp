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

#include <complex>

#include "beamrefine/array_geometry.hpp"
#include "beamrefine/channel.hpp"
#include "beamrefine/ofdm_link.hpp"

namespace beamrefine
{

/**
 * Link-budget SNRs (stored linear; convert to dB at I/O boundaries only).
 *
 *   snr_ue  = |h|^2 |g_t|^2 |g_r|^2 P_t / (K sigma_n^2)   user receiver
 *   snr_bs  = |h'|^2 |g_t|^2 P_t / (N_rf sigma_n^2)       per BS receive antenna,
 *                                                         before the reduction matrix
 *   snr_bbf = |h|^2 P_t / (K sigma_n^2)                   user side, before any
 *                                                         beamforming gain
 *
 * spectral_efficiency = log2(1 + snr_ue).
 */
struct LinkBudget
{
    double snr_ue;
    double snr_bs;
    double snr_bbf;
    double spectral_efficiency; // bits/s/Hz
    double rx_gain_sq;          // |g_r|^2
};

LinkBudget link_budget(const UserState& state, const OfdmConfig& ofdm, const ArrayConfig& array,
                       std::complex<double> g_t, double rx_gain_sq);

// Shannon spectral efficiency for a user-side pre-beamforming SNR and gains.
double spectral_efficiency(double snr_bbf, double g_t_sq, double rx_gain_sq);

} // namespace beamrefine
