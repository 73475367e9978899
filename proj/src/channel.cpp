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

#include "beamrefine/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace beamrefine
{

void UserState::validate() const
{
    if (!(range > 0.0))
        throw std::invalid_argument("user: range must be positive");
    if (!(rcs > 0.0))
        throw std::invalid_argument("user: rcs must be positive");
    if (!(std::abs(aod) <= M_PI / 2.0))
        throw std::invalid_argument("user: aod outside [-pi/2, pi/2]");
}

LinkCoefficients link_coefficients(const UserState& state, double carrier_freq)
{
    state.validate();
    if (!(carrier_freq > 0.0))
        throw std::invalid_argument("link_coefficients: carrier_freq must be positive");

    const double lambda = speed_of_light / carrier_freq;
    const double d = state.range;

    const double h_ue_mag = lambda / (4.0 * M_PI * d);
    const double h_bs_mag =
        lambda * std::sqrt(state.rcs) / (std::sqrt(std::pow(4.0 * M_PI, 3)) * d * d);

    LinkCoefficients lc;
    lc.h_ue = std::polar(h_ue_mag, state.tx_phase);
    lc.h_bs = std::polar(h_bs_mag, state.bs_phase);
    lc.delay = 2.0 * d / speed_of_light;
    lc.doppler = 2.0 * state.speed / lambda;
    return lc;
}

arma::cx_mat sample_noise(RngStream& rng, arma::uword n_rows, arma::uword n_cols, double variance)
{
    if (variance < 0.0)
        throw std::invalid_argument("sample_noise: variance must be nonnegative");

    arma::cx_mat w(n_rows, n_cols);
    if (variance == 0.0)
    {
        w.zeros();
        return w;
    }
    // Column-major fill keeps the draw order independent of how callers
    // slice the result.
    for (arma::uword c = 0; c < n_cols; ++c)
        for (arma::uword r = 0; r < n_rows; ++r)
            w(r, c) = rng.complex_normal(variance);
    return w;
}

} // namespace beamrefine
