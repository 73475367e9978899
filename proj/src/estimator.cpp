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

#include "beamrefine/estimator.hpp"

#include <algorithm>
#include <cmath>

namespace beamrefine
{

namespace
{

int next_pow2(int n)
{
    int p = 1;
    while (p < n)
        p *= 2;
    return p;
}

// Golden-section maximization of f over [lo, hi] to the given x tolerance.
template <typename F>
double golden_section_max(F&& f, double lo, double hi, double tol)
{
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol)
    {
        if (f1 < f2)
        {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        else
        {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

// Offset of the parabola vertex through (-1, ym), (0, y0), (1, yp),
// clamped to [-0.5, 0.5]. Sub-ulp neighbor asymmetry snaps to zero so a
// symmetric peak interpolates to its bin exactly.
double parabolic_offset(double ym, double y0, double yp)
{
    const double denom = ym - 2.0 * y0 + yp;
    if (denom == 0.0)
        return 0.0;
    const double d = 0.5 * (ym - yp) / denom;
    if (std::abs(d) < 1e-9)
        return 0.0;
    return std::clamp(d, -0.5, 0.5);
}

} // namespace

arma::cx_mat sample_covariance(const SnapshotGrid& grid)
{
    const arma::uword n_rf = grid.n_rf();
    const arma::uword n_snapshots = grid.n_symbols() * grid.n_subcarriers();
    if (n_snapshots == 0 || n_rf == 0)
        throw std::invalid_argument("sample_covariance: empty snapshot grid");
    if (n_snapshots < n_rf)
        throw std::invalid_argument("sample_covariance: fewer snapshots than RF chains");

    arma::cx_mat r(n_rf, n_rf, arma::fill::zeros);
    for (arma::uword n = 0; n < grid.n_symbols(); ++n)
    {
        const arma::cx_mat& slice = grid.values.slice(n);
        r += slice * slice.t();
    }
    r /= static_cast<double>(n_snapshots);
    // symmetrize against accumulation round-off
    return 0.5 * (r + r.t());
}

MusicResult music_refine(const arma::cx_mat& cov, const ReductionBank& bank,
                         const MusicGridSpec& grid)
{
    const int n_rf = static_cast<int>(cov.n_rows);
    if (cov.n_rows != cov.n_cols)
        throw std::invalid_argument("music_refine: covariance must be square");
    if (n_rf < 2)
        throw std::invalid_argument("music_refine: need at least two RF chains");
    if (grid.n_points < 3 || !(grid.half_width > 0.0))
        throw std::invalid_argument("music_refine: invalid scan grid");

    arma::vec eval;
    arma::cx_mat evec;
    if (!arma::eig_sym(eval, evec, cov))
        throw estimation_error("music_refine: eigendecomposition failed");

    // Single-source model: noise subspace spans the n_rf - 1 smallest modes.
    const arma::cx_mat noise_basis = evec.cols(0, n_rf - 2);
    const int n_antennas = static_cast<int>(bank.psi.n_rows);
    const arma::cx_mat psi_herm = bank.psi.t();

    auto pseudospectrum = [&](double offset) {
        const arma::cx_vec b = psi_herm * steering_vector(n_antennas, offset);
        const double num = arma::norm(b);
        const double den = arma::norm(noise_basis.t() * b);
        return (num * num) / (den * den);
    };

    MusicResult result;
    result.eigenvalues = arma::reverse(eval);
    result.scan_angles = arma::linspace(-grid.half_width, grid.half_width, grid.n_points);
    result.pseudospectrum.set_size(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i)
        result.pseudospectrum[i] = pseudospectrum(result.scan_angles[i]);

    const arma::uword peak = result.pseudospectrum.index_max();
    result.peak_on_boundary = (peak == 0 || peak + 1 == result.scan_angles.n_elem);

    double offset = result.scan_angles[peak];
    if (!result.peak_on_boundary)
    {
        const double lo = result.scan_angles[peak - 1];
        const double hi = result.scan_angles[peak + 1];
        offset = golden_section_max(pseudospectrum, lo, hi, 1e-6);
    }

    result.refined_offset = offset;
    result.refined_angle = compose_refined_angle(bank.pointed_angle, offset);
    return result;
}

arma::cx_mat beamspace_combine(const SnapshotGrid& grid, const ReductionBank& bank,
                               double refined_angle)
{
    const int n_antennas = static_cast<int>(bank.u.n_rows);
    if (grid.n_rf() != bank.u.n_cols)
        throw std::invalid_argument("beamspace_combine: grid/bank RF dimension mismatch");

    // a^H U y / (a^H U U^H a) with w = U^H a: w^H y / ||w||^2
    const arma::cx_vec w = bank.u.t() * steering_vector(n_antennas, refined_angle);
    const double wn = arma::norm(w);
    const double den = wn * wn; // a^H U U^H a
    if (!(den > 1e-12))
        throw estimation_error("beamspace_combine: angle outside filter-bank support");

    const int n_sym = static_cast<int>(grid.n_symbols());
    const int n_sub = static_cast<int>(grid.n_subcarriers());
    arma::cx_mat y_prime(n_sym, n_sub);
    for (int n = 0; n < n_sym; ++n)
        y_prime.row(n) = (w.t() * grid.values.slice(n)) / den;
    return y_prime;
}

arma::mat delay_doppler_objective(const arma::cx_mat& y_prime, const arma::cx_mat& symbols,
                                  int n_fft, int m_fft)
{
    const int n_sym = static_cast<int>(y_prime.n_rows);
    const int n_sub = static_cast<int>(y_prime.n_cols);
    if (symbols.n_rows != y_prime.n_rows || symbols.n_cols != y_prime.n_cols)
        throw std::invalid_argument("delay_doppler_objective: grid dimensions mismatch");
    if (n_fft < n_sym || m_fft < n_sub)
        throw std::invalid_argument("delay_doppler_objective: FFT sizes smaller than the grid");

    const arma::cx_mat z = y_prime % arma::conj(symbols);

    // nu axis (rows, forward transform): sum_n z e^{-j 2 pi n p / n_fft}
    const arma::cx_mat along_n = arma::fft(z, n_fft); // n_fft x n_sub
    // tau axis (columns, inverse sense): sum_m (.) e^{+j 2 pi m q / m_fft};
    // arma::ifft normalizes by 1/m_fft, so undo it.
    const arma::cx_mat along_m =
        arma::ifft(along_n.st(), m_fft) * static_cast<double>(m_fft); // m_fft x n_fft

    return arma::abs(along_m.st()); // n_fft x m_fft
}

DelayDopplerEstimate estimate_delay_doppler(const arma::cx_mat& y_prime,
                                            const arma::cx_mat& symbols, const OfdmConfig& cfg,
                                            int n_fft, int m_fft, arma::mat* objective_out)
{
    const arma::mat obj = delay_doppler_objective(y_prime, symbols, n_fft, m_fft);
    if (objective_out != nullptr)
        *objective_out = obj;

    arma::uword p_star, q_star;
    obj.max(p_star, q_star);

    DelayDopplerEstimate est;
    est.objective_peak = obj(p_star, q_star);

    // Doppler index mapped to the signed range [-n_fft/2, n_fft/2).
    const int p_signed = (static_cast<int>(p_star) < n_fft / 2)
                             ? static_cast<int>(p_star)
                             : static_cast<int>(p_star) - n_fft;
    est.doppler_on_boundary = (p_signed == -n_fft / 2 || p_signed == n_fft / 2 - 1);
    double dp = 0.0;
    if (!est.doppler_on_boundary)
    {
        // Objective is periodic along the transform axes; neighbors wrap.
        const arma::uword pm = (p_star + n_fft - 1) % n_fft;
        const arma::uword pp = (p_star + 1) % n_fft;
        dp = parabolic_offset(obj(pm, q_star), obj(p_star, q_star), obj(pp, q_star));
    }

    est.delay_on_boundary = (q_star == 0 || q_star + 1 == static_cast<arma::uword>(m_fft));
    double dq = 0.0;
    if (!est.delay_on_boundary)
    {
        const arma::uword qm = q_star - 1;
        const arma::uword qp = q_star + 1;
        dq = parabolic_offset(obj(p_star, qm), obj(p_star, q_star), obj(p_star, qp));
    }

    est.doppler = (p_signed + dp) / (n_fft * cfg.slot_duration());
    est.delay = (q_star + dq) / (m_fft * cfg.subcarrier_spacing);
    return est;
}

std::pair<double, double> to_range_velocity(double delay, double doppler, double carrier_freq)
{
    const double lambda = speed_of_light / carrier_freq;
    return {speed_of_light * delay / 2.0, doppler * lambda / 2.0};
}

double compose_refined_angle(double pointed_angle, double offset)
{
    const double s = std::clamp(std::sin(pointed_angle) + std::sin(offset), -1.0, 1.0);
    return std::asin(s);
}

StateEstimate estimate_user_state(const SnapshotGrid& grid, const ReductionBank& bank,
                                  const arma::cx_mat& symbols, const OfdmConfig& cfg,
                                  const MusicGridSpec& music_grid, int fft_oversampling,
                                  arma::mat* objective_out)
{
    if (fft_oversampling < 1)
        throw std::invalid_argument("estimate_user_state: fft_oversampling must be positive");

    const arma::cx_mat cov = sample_covariance(grid);
    MusicResult music = music_refine(cov, bank, music_grid);

    const arma::cx_mat y_prime = beamspace_combine(grid, bank, music.refined_angle);

    const int n_fft = next_pow2(cfg.n_symbols * fft_oversampling);
    const int m_fft = next_pow2(cfg.n_subcarriers * fft_oversampling);
    const DelayDopplerEstimate dd =
        estimate_delay_doppler(y_prime, symbols, cfg, n_fft, m_fft, objective_out);

    const auto [range, velocity] = to_range_velocity(dd.delay, dd.doppler, cfg.carrier_freq);

    StateEstimate est;
    est.angle = music.refined_angle;
    est.delay = dd.delay;
    est.doppler = dd.doppler;
    est.range = range;
    est.velocity = velocity;
    est.objective_peak = dd.objective_peak;
    est.music = std::move(music);
    return est;
}

} // namespace beamrefine
