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

#include "beamrefine/array_geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace beamrefine
{

void ArrayConfig::validate() const
{
    if (n_antennas < 1)
        throw std::invalid_argument("array: n_antennas must be positive");
    if (n_rf < 1)
        throw std::invalid_argument("array: n_rf must be positive");
    if (n_rf > n_antennas)
        throw std::invalid_argument("array: n_rf must not exceed n_antennas");
    if (beta <= 0.0 || beta > 1.0)
        throw std::invalid_argument("array: beta must lie in (0, 1]");
    if (beta < 1.0 / n_antennas)
        throw std::invalid_argument("array: beta must be at least 1/n_antennas");
    if (static_cast<double>(n_rf) > beta * n_antennas + 1e-12)
        throw std::invalid_argument("array: n_rf must not exceed beta * n_antennas");
}

arma::cx_vec steering_vector(int n_antennas, double angle)
{
    if (n_antennas < 1)
        throw std::invalid_argument("steering_vector: n_antennas must be positive");
    if (!(std::abs(angle) <= M_PI / 2.0))
        throw std::invalid_argument("steering_vector: angle outside [-pi/2, pi/2]");

    const double s = std::sin(angle);
    arma::cx_vec a(n_antennas);
    for (int i = 0; i < n_antennas; ++i)
        a[i] = std::polar(1.0, M_PI * i * s);
    return a;
}

arma::cx_vec tx_beamformer(int n_antennas, double angle)
{
    return steering_vector(n_antennas, angle) / std::sqrt(static_cast<double>(n_antennas));
}

std::complex<double> array_gain(double true_angle, double pointed_angle, int n_antennas)
{
    // a^H(true) f(pointed) = sum_i exp(j pi i (sin pointed - sin true)) / sqrt(n)
    const double ds = std::sin(pointed_angle) - std::sin(true_angle);
    std::complex<double> acc = 0.0;
    for (int i = 0; i < n_antennas; ++i)
        acc += std::polar(1.0, M_PI * i * ds);
    return acc / std::sqrt(static_cast<double>(n_antennas));
}

arma::cx_vec phase_shift_network(int n_antennas, double pointed_angle)
{
    if (n_antennas < 1)
        throw std::invalid_argument("phase_shift_network: n_antennas must be positive");
    // The network enters the receive path through U^H = Psi^H D^H, so the
    // diagonal carries +j phases: D^H then strips the pointing progression,
    // D^H(phi_hat) a(phi) = a(asin(sin phi - sin phi_hat)).
    const double s = std::sin(pointed_angle);
    arma::cx_vec d(n_antennas);
    for (int i = 0; i < n_antennas; ++i)
        d[i] = std::polar(1.0, M_PI * i * s);
    return d;
}

arma::mat concentration_matrix(int n, double beta)
{
    if (n < 1)
        throw std::invalid_argument("concentration_matrix: n must be positive");
    if (beta <= 0.0 || beta > 1.0)
        throw std::invalid_argument("concentration_matrix: beta must lie in (0, 1]");

    arma::mat gamma(n, n);
    for (int p = 0; p < n; ++p)
    {
        gamma(p, p) = beta;
        for (int q = 0; q < p; ++q)
        {
            const double k = static_cast<double>(p - q);
            const double v = std::sin(k * beta * M_PI) / (k * M_PI);
            gamma(p, q) = v;
            gamma(q, p) = v;
        }
    }
    return gamma;
}

arma::cx_mat slepian_bank(const ArrayConfig& cfg, arma::vec* eigenvalues)
{
    cfg.validate();

    const arma::mat gamma = concentration_matrix(cfg.n_antennas, cfg.beta);
    arma::vec eval;
    arma::mat evec;
    if (!arma::eig_sym(eval, evec, gamma))
        throw std::runtime_error("slepian_bank: eigendecomposition failed");

    // eig_sym returns ascending order; take the n_rf largest, descending.
    arma::mat psi(cfg.n_antennas, cfg.n_rf);
    for (int i = 0; i < cfg.n_rf; ++i)
        psi.col(i) = evec.col(cfg.n_antennas - 1 - i);

    // Gauge: largest-magnitude entry of each column real positive.
    for (int i = 0; i < cfg.n_rf; ++i)
    {
        const arma::uword imax = arma::index_max(arma::abs(psi.col(i)));
        if (psi(imax, i) < 0.0)
            psi.col(i) *= -1.0;
    }

    if (eigenvalues != nullptr)
    {
        eigenvalues->set_size(cfg.n_rf);
        for (int i = 0; i < cfg.n_rf; ++i)
            (*eigenvalues)[i] = eval[cfg.n_antennas - 1 - i];
    }

    return arma::cx_mat(psi, arma::mat(cfg.n_antennas, cfg.n_rf, arma::fill::zeros));
}

ReductionBank reduction_matrix(const ArrayConfig& cfg, double pointed_angle)
{
    return reduction_matrix(cfg, slepian_bank(cfg), pointed_angle);
}

ReductionBank reduction_matrix(const ArrayConfig& cfg, const arma::cx_mat& psi, double pointed_angle)
{
    if (psi.n_rows != static_cast<arma::uword>(cfg.n_antennas) ||
        psi.n_cols != static_cast<arma::uword>(cfg.n_rf))
        throw std::invalid_argument("reduction_matrix: bank dimensions do not match config");

    ReductionBank bank;
    bank.pointed_angle = pointed_angle;
    bank.d_diag = phase_shift_network(cfg.n_antennas, pointed_angle);
    bank.psi = psi;
    bank.u = arma::diagmat(bank.d_diag) * psi;
    return bank;
}

} // namespace beamrefine
