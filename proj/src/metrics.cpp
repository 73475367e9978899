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

#include "beamrefine/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace beamrefine
{

LinkBudget link_budget(const UserState& state, const OfdmConfig& ofdm, const ArrayConfig& array,
                       std::complex<double> g_t, double rx_gain_sq)
{
    if (!(ofdm.noise_variance > 0.0))
        throw std::invalid_argument("link_budget: noise_variance must be positive");
    if (rx_gain_sq < 0.0)
        throw std::invalid_argument("link_budget: rx_gain_sq must be nonnegative");

    const LinkCoefficients lc = link_coefficients(state, ofdm.carrier_freq);
    const double h_ue_sq = std::norm(lc.h_ue);
    const double h_bs_sq = std::norm(lc.h_bs);
    const double g_t_sq = std::norm(g_t);
    const double per_user_power = ofdm.tx_power / ofdm.n_users;

    LinkBudget budget;
    budget.rx_gain_sq = rx_gain_sq;
    budget.snr_bbf = h_ue_sq * per_user_power / ofdm.noise_variance;
    budget.snr_ue = budget.snr_bbf * g_t_sq * rx_gain_sq;
    budget.snr_bs = h_bs_sq * g_t_sq * ofdm.tx_power / (array.n_rf * ofdm.noise_variance);
    budget.spectral_efficiency = std::log2(1.0 + budget.snr_ue);
    return budget;
}

double spectral_efficiency(double snr_bbf, double g_t_sq, double rx_gain_sq)
{
    return std::log2(1.0 + snr_bbf * g_t_sq * rx_gain_sq);
}

} // namespace beamrefine
