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

#include "beamrefine/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>

#include "beamrefine/metrics.hpp"

namespace beamrefine
{

void SweepSpec::validate() const
{
    if (snr_bbf_db.empty())
        throw std::invalid_argument("sweep: snr_bbf_db grid must be nonempty");
    if (epsilon_deg.empty())
        throw std::invalid_argument("sweep: epsilon_deg grid must be nonempty");
    if (n_trials < 1)
        throw std::invalid_argument("sweep: n_trials must be positive");
    if (music_points < 3)
        throw std::invalid_argument("sweep: music_points must be at least 3");
    if (fft_oversampling < 1)
        throw std::invalid_argument("sweep: fft_oversampling must be positive");
    array.validate();
    ofdm.validate_against(array);
    user.validate();
    if (rx_gain_sq < 0.0)
        throw std::invalid_argument("sweep: rx_gain_sq must be nonnegative");
    if (music_half_width < 0.0)
        throw std::invalid_argument("sweep: music_half_width must be nonnegative");
}

MusicGridSpec SweepSpec::music_grid() const
{
    if (music_half_width > 0.0)
        return {music_half_width, music_points};
    return MusicGridSpec::for_bank(array, music_points);
}

TrialOutcome run_trial(const SweepSpec& spec, double snr_bbf_db, double epsilon_deg,
                       RngStream& rng)
{
    const arma::cx_mat psi = slepian_bank(spec.array);
    return run_trial(spec, psi, snr_bbf_db, epsilon_deg, rng);
}

TrialOutcome run_trial(const SweepSpec& spec, const arma::cx_mat& psi, double snr_bbf_db,
                       double epsilon_deg, RngStream& rng, StateEstimate* estimate_out,
                       arma::mat* objective_out)
{
    const double epsilon = epsilon_deg * M_PI / 180.0;
    const double snr_bbf = std::pow(10.0, snr_bbf_db / 10.0);

    TrialOutcome outcome;
    outcome.true_angle = rng.uniform(-M_PI / 6.0, M_PI / 6.0);
    outcome.coarse_angle = outcome.true_angle - epsilon;

    UserState state = spec.user;
    state.aod = outcome.true_angle;
    state.tx_phase = rng.uniform(0.0, 2.0 * M_PI);
    state.bs_phase = rng.uniform(0.0, 2.0 * M_PI);

    OfdmConfig cfg = spec.ofdm;
    const LinkCoefficients lc = link_coefficients(state, cfg.carrier_freq);
    const double per_user_power = cfg.tx_power / cfg.n_users;
    cfg.noise_variance = spec.noiseless ? 0.0 : std::norm(lc.h_ue) * per_user_power / snr_bbf;

    const std::complex<double> g_t_coarse =
        array_gain(state.aod, outcome.coarse_angle, spec.array.n_antennas);
    outcome.se_unrefined = spectral_efficiency(snr_bbf, std::norm(g_t_coarse), spec.rx_gain_sq);

    try
    {
        const ReductionBank bank = reduction_matrix(spec.array, psi, outcome.coarse_angle);
        const SymbolGrid symbols = generate_symbols(cfg, rng);
        const SnapshotGrid grid = radar_snapshots_single(state, bank, cfg, symbols, rng);
        StateEstimate est = estimate_user_state(grid, bank, symbols.user(0), cfg,
                                                spec.music_grid(), spec.fft_oversampling,
                                                objective_out);

        outcome.refined_angle = est.angle;
        outcome.range_est = est.range;
        outcome.velocity_est = est.velocity;

        const std::complex<double> g_t_refined =
            array_gain(state.aod, est.angle, spec.array.n_antennas);
        outcome.se_refined = spectral_efficiency(snr_bbf, std::norm(g_t_refined), spec.rx_gain_sq);

        outcome.success = std::isfinite(est.angle) && std::isfinite(est.range) &&
                          std::isfinite(est.velocity);
        if (estimate_out != nullptr)
            *estimate_out = std::move(est);
    }
    catch (const estimation_error&)
    {
        outcome.success = false;
    }
    return outcome;
}

namespace
{

SweepPoint aggregate(const SweepSpec& spec, double snr_db, double eps_deg,
                     const std::vector<TrialOutcome>& trials)
{
    SweepPoint point;
    point.snr_bbf_db = snr_db;
    point.epsilon_deg = eps_deg;
    point.n_trials = static_cast<int>(trials.size());

    double se_ref = 0.0, se_unref = 0.0;
    double sq_angle = 0.0, sq_range = 0.0, sq_vel = 0.0;
    int ok = 0;
    for (const TrialOutcome& t : trials)
    {
        if (!t.success)
            continue;
        ++ok;
        se_ref += t.se_refined;
        se_unref += t.se_unrefined;
        const double angle_err_deg = (t.refined_angle - t.true_angle) * 180.0 / M_PI;
        sq_angle += angle_err_deg * angle_err_deg;
        const double range_err = t.range_est - spec.user.range;
        sq_range += range_err * range_err;
        const double vel_err = t.velocity_est - spec.user.speed;
        sq_vel += vel_err * vel_err;
    }

    point.failures = point.n_trials - ok;
    if (ok > 0)
    {
        point.se_refined_mean = se_ref / ok;
        point.se_unrefined_mean = se_unref / ok;
        point.rmse_angle_deg = std::sqrt(sq_angle / ok);
        point.rmse_range_m = std::sqrt(sq_range / ok);
        point.rmse_velocity_mps = std::sqrt(sq_vel / ok);
    }
    else
    {
        point.se_refined_mean = point.se_unrefined_mean = 0.0;
        point.rmse_angle_deg = point.rmse_range_m = point.rmse_velocity_mps =
            std::numeric_limits<double>::quiet_NaN();
    }
    return point;
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec)
{
    spec.validate();

    const arma::cx_mat psi = slepian_bank(spec.array);

    unsigned n_threads = spec.n_threads > 0 ? static_cast<unsigned>(spec.n_threads)
                                            : std::thread::hardware_concurrency();
    if (n_threads == 0)
        n_threads = 1;
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(spec.n_trials));

    SweepResult result;
    std::vector<TrialOutcome> trials(spec.n_trials);

    for (std::size_t si = 0; si < spec.snr_bbf_db.size(); ++si)
    {
        for (std::size_t ei = 0; ei < spec.epsilon_deg.size(); ++ei)
        {
            auto worker = [&](unsigned tid) {
                for (int t = static_cast<int>(tid); t < spec.n_trials;
                     t += static_cast<int>(n_threads))
                {
                    RngStream rng = RngStream::substream(
                        spec.seed, {static_cast<std::uint64_t>(si), static_cast<std::uint64_t>(ei),
                                    static_cast<std::uint64_t>(t)});
                    trials[t] = run_trial(spec, psi, spec.snr_bbf_db[si],
                                          spec.epsilon_deg[ei], rng);
                }
            };

            if (n_threads == 1)
            {
                worker(0);
            }
            else
            {
                std::vector<std::thread> pool;
                pool.reserve(n_threads);
                for (unsigned tid = 0; tid < n_threads; ++tid)
                    pool.emplace_back(worker, tid);
                for (std::thread& th : pool)
                    th.join();
            }

            result.points.push_back(
                aggregate(spec, spec.snr_bbf_db[si], spec.epsilon_deg[ei], trials));
        }
    }
    return result;
}

} // namespace beamrefine
