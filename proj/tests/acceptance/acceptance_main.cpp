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
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "beamrefine/config.hpp"
#include "beamrefine/experiments.hpp"
#include "beamrefine/metrics.hpp"

using namespace beamrefine;
namespace fs = std::filesystem;

namespace
{

constexpr double deg = M_PI / 180.0;

struct Check
{
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond)
        {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }

    void note(const std::string& what)
    {
        detail += (detail.empty() ? "" : "; ") + what;
    }
};

ArrayConfig table_array()
{
    return {64, 4, 4.0 / 64.0};
}

SweepSpec base_spec()
{
    SweepSpec spec; // reference defaults: N=16, M=512, 1 MHz, 60 GHz, d=40, v=20
    spec.seed = 20260808;
    return spec;
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// ---- criterion bodies ----------------------------------------------------

// Slepian bank: orthonormality, eigenvalue bounds/sum, closed form vs
// Simpson quadrature of the defining integral.
Check c1_slepian_bank()
{
    Check c;
    const ArrayConfig cfg = table_array();

    arma::vec bank_eigenvalues;
    const arma::cx_mat psi = slepian_bank(cfg, &bank_eigenvalues);
    const arma::cx_mat gram = psi.t() * psi;
    double gram_err = 0.0;
    for (int i = 0; i < cfg.n_rf; ++i)
        for (int j = 0; j < cfg.n_rf; ++j)
            gram_err = std::max(gram_err,
                                std::abs(gram(i, j) - ((i == j) ? 1.0 : 0.0)));
    c.require(gram_err < 1e-10, "Psi^H Psi deviates from I by " + fmt(gram_err));

    const arma::mat gamma = concentration_matrix(cfg.n_antennas, cfg.beta);
    const arma::vec eval = arma::eig_sym(gamma);
    c.require(eval.min() > -1e-12, "eigenvalue below 0: " + fmt(eval.min()));
    c.require(eval.max() < 1.0 + 1e-12, "eigenvalue above 1: " + fmt(eval.max()));
    c.require(std::abs(arma::sum(eval) - 4.0) <= 1e-9,
              "eigenvalue sum " + fmt(arma::sum(eval)) + " != 4");

    // Simpson quadrature of (1/2pi) int_{-beta pi}^{beta pi} e^{j(p-q)g} dg
    double quad_err = 0.0;
    const int segments = 2048;
    for (int p = 0; p < cfg.n_antennas; ++p)
        for (int q = 0; q <= p; ++q)
        {
            const double lo = -cfg.beta * M_PI, hi = cfg.beta * M_PI;
            const double h = (hi - lo) / segments;
            std::complex<double> acc =
                std::polar(1.0, (p - q) * lo) + std::polar(1.0, (p - q) * hi);
            for (int i = 1; i < segments; ++i)
                acc += std::polar(1.0, (p - q) * (lo + i * h)) * ((i % 2 == 1) ? 4.0 : 2.0);
            const double ref = (acc * (h / 3.0) / (2.0 * M_PI)).real();
            quad_err = std::max(quad_err, std::abs(gamma(p, q) - ref));
        }
    c.require(quad_err < 1e-9, "closed form vs quadrature " + fmt(quad_err));
    c.note("gram " + fmt(gram_err) + ", quad " + fmt(quad_err));
    return c;
}

// Demodulation identity over 1e4 random angle pairs.
Check c2_demodulation_identity()
{
    Check c;
    RngStream rng(4242);
    double worst = 0.0;
    int done = 0;
    while (done < 10000)
    {
        const double phi = rng.uniform(-M_PI / 2, M_PI / 2);
        const double phi_hat = rng.uniform(-M_PI / 2, M_PI / 2);
        const double ds = std::sin(phi) - std::sin(phi_hat);
        if (std::abs(ds) > 1.0)
            continue;
        ++done;
        const arma::cx_vec d = phase_shift_network(64, phi_hat);
        const arma::cx_vec a = steering_vector(64, phi);
        const arma::cx_vec target = steering_vector(64, std::asin(ds));
        for (int i = 0; i < 64; ++i)
            worst = std::max(worst, std::abs(std::conj(d[i]) * a[i] - target[i]));
    }
    c.require(worst < 1e-12, "worst elementwise deviation " + fmt(worst));
    c.note("max dev " + fmt(worst) + " over 10^4 pairs");
    return c;
}

// Exact vs single-user synthesis: cross-term energy at +/-30 deg below 1%,
// monotone decreasing with separation.
Check c3_cross_terms()
{
    Check c;
    const ArrayConfig array = table_array();
    OfdmConfig cfg;
    cfg.n_users = 2;
    cfg.noise_variance = 0.0;

    auto cross_energy = [&](double separation_deg) {
        UserState u0, u1;
        u0.aod = separation_deg / 2.0 * deg;
        u1.aod = -separation_deg / 2.0 * deg;
        u0.range = u1.range = 40.0;
        u0.speed = 20.0;
        u1.speed = -8.0;
        u0.bs_phase = 0.3;
        u1.bs_phase = 1.9;

        const std::vector<UserState> states = {u0, u1};
        const std::vector<double> pointings = {u0.aod, u1.aod};
        const ReductionBank bank = reduction_matrix(array, u0.aod);

        RngStream r1(77), r2(77);
        const SymbolGrid symbols = generate_symbols(cfg, r1);
        const SnapshotGrid exact =
            radar_snapshots_exact(states, pointings, bank, cfg, symbols, r1);
        const SymbolGrid symbols2 = generate_symbols(cfg, r2);
        const SnapshotGrid approx = radar_snapshots_single(u0, bank, cfg, symbols2, r2);

        double num = 0.0, den = 0.0;
        for (int n = 0; n < cfg.n_symbols; ++n)
        {
            num += std::pow(arma::norm(exact.values.slice(n) - approx.values.slice(n), "fro"), 2);
            den += std::pow(arma::norm(approx.values.slice(n), "fro"), 2);
        }
        return num / den;
    };

    const double e60 = cross_energy(60.0);
    c.require(e60 <= 0.01, "energy at +/-30 deg separation " + fmt(e60));

    const double e5 = cross_energy(5.0);
    const double e10 = cross_energy(10.0);
    const double e20 = cross_energy(20.0);
    const double e40 = cross_energy(40.0);
    c.require(e10 < e5 && e20 < e10 && e40 < e20,
              "not monotone: " + fmt(e5) + " " + fmt(e10) + " " + fmt(e20) + " " + fmt(e40));
    c.note("+/-30deg: " + fmt(e60) + "; 5/10/20/40: " + fmt(e5) + "/" + fmt(e10) + "/" +
           fmt(e20) + "/" + fmt(e40));
    return c;
}

// Noiseless end-to-end recovery at the reference geometry, eps = 1 deg.
Check c4_noiseless_recovery()
{
    Check c;
    SweepSpec spec = base_spec();
    spec.noiseless = true;

    double worst_angle = 0.0, worst_range = 0.0, worst_velocity = 0.0;
    for (std::uint64_t t = 0; t < 5; ++t)
    {
        RngStream rng = RngStream::substream(spec.seed, {0, 0, t});
        const TrialOutcome o = run_trial(spec, 0.0, 1.0, rng);
        c.require(o.success, "trial failed");
        if (!o.success)
            continue;
        worst_angle =
            std::max(worst_angle, std::abs(o.refined_angle - o.true_angle) / deg);
        worst_range = std::max(worst_range, std::abs(o.range_est - 40.0));
        worst_velocity = std::max(worst_velocity, std::abs(o.velocity_est - 20.0));
    }
    c.require(worst_angle <= 0.01, "angle error " + fmt(worst_angle) + " deg");
    c.require(worst_range <= 0.05, "range error " + fmt(worst_range) + " m");
    c.require(worst_velocity <= 0.5, "velocity error " + fmt(worst_velocity) + " m/s");
    c.note("worst |dphi| " + fmt(worst_angle) + " deg, |dd| " + fmt(worst_range) +
           " m, |dv| " + fmt(worst_velocity) + " m/s");
    return c;
}

// FFT objective vs brute-force double summation at 8 random grid points.
Check c5_objective_equivalence()
{
    Check c;
    const OfdmConfig cfg;
    const double slot = cfg.slot_duration();
    const double df = cfg.subcarrier_spacing;
    const int n_fft = 64, m_fft = 2048;

    RngStream rng(555);
    arma::cx_mat z(cfg.n_symbols, cfg.n_subcarriers);
    for (auto& v : z)
        v = rng.complex_normal(1.0);
    const arma::cx_mat x =
        arma::ones<arma::cx_mat>(cfg.n_symbols, cfg.n_subcarriers);
    const arma::mat obj = delay_doppler_objective(z, x, n_fft, m_fft);

    double worst = 0.0;
    for (int t = 0; t < 8; ++t)
    {
        const int p = static_cast<int>(rng.next_u64() % n_fft);
        const int q = static_cast<int>(rng.next_u64() % m_fft);
        const double nu = static_cast<double>(p) / (n_fft * slot);
        const double tau = static_cast<double>(q) / (m_fft * df);

        std::complex<double> acc = 0.0;
        for (int n = 0; n < cfg.n_symbols; ++n)
            for (int m = 0; m < cfg.n_subcarriers; ++m)
                acc += z(n, m) *
                       std::polar(1.0, -2.0 * M_PI * (n * slot * nu - m * df * tau));
        const double direct = std::abs(acc);
        worst = std::max(worst, std::abs(obj(p, q) - direct) / direct);
    }
    c.require(worst < 1e-6, "relative deviation " + fmt(worst));
    c.note("worst relative deviation " + fmt(worst));
    return c;
}

// Analytic spectral-efficiency gap oracle: the unrefined rate averaged over
// the drawn angle distribution by composite Gauss-Legendre quadrature, the
// refined beam at the full array gain.
double se_gap_oracle(double snr_bbf, double epsilon_deg, double rx_gain_sq, int n_antennas)
{
    const double eps = epsilon_deg * deg;
    const double lo = -30.0 * deg, hi = 30.0 * deg;
    const int panels = 256;
    static const double nodes[4] = {-0.8611363115940526, -0.3399810435848563,
                                    0.3399810435848563, 0.8611363115940526};
    static const double weights[4] = {0.3478548451374538, 0.6521451548625461,
                                      0.6521451548625461, 0.3478548451374538};

    auto unrefined_se = [&](double phi) {
        const double ds = std::sin(phi) - std::sin(phi - eps);
        std::complex<double> acc = 0.0;
        for (int i = 0; i < n_antennas; ++i)
            acc += std::polar(1.0, M_PI * i * ds);
        const double g2 = std::norm(acc) / n_antennas;
        return std::log2(1.0 + snr_bbf * g2 * rx_gain_sq);
    };

    double integral = 0.0;
    const double w = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p)
    {
        const double a = lo + p * w;
        for (int k = 0; k < 4; ++k)
            integral += weights[k] * unrefined_se(a + 0.5 * w * (1.0 + nodes[k])) * 0.5 * w;
    }
    const double mean_unrefined = integral / (hi - lo);
    const double refined = std::log2(1.0 + snr_bbf * n_antennas * rx_gain_sq);
    return refined - mean_unrefined;
}

// Spectral-efficiency gap reproduction at -10 dB against the analytic
// oracle; small-epsilon gap stays small.
Check c6_se_gap()
{
    Check c;
    SweepSpec spec = base_spec();
    spec.snr_bbf_db = {-10.0};
    spec.epsilon_deg = {0.5, 1.5};
    spec.n_trials = 500;

    const SweepResult result = run_sweep(spec);
    const SweepPoint& p_small = result.points[0]; // eps 0.5
    const SweepPoint& p_large = result.points[1]; // eps 1.5

    const double oracle_large = se_gap_oracle(0.1, 1.5, 4.0, 64);
    const double gap_large = p_large.se_refined_mean - p_large.se_unrefined_mean;
    c.require(std::abs(gap_large - oracle_large) <= 0.3,
              "eps 1.5: sweep gap " + fmt(gap_large) + " vs oracle " + fmt(oracle_large));

    const double gap_small = p_small.se_refined_mean - p_small.se_unrefined_mean;
    c.require(gap_small <= 1.2, "eps 0.5 gap " + fmt(gap_small) + " above 1.2");

    c.note("eps 1.5: sweep " + fmt(gap_large) + ", oracle " + fmt(oracle_large) +
           "; eps 0.5: " + fmt(gap_small));
    return c;
}

// Sub-grid angle accuracy at the highest swept SNR, well below the ~2 deg
// codebook spacing.
Check c7_subgrid_accuracy()
{
    Check c;
    SweepSpec spec = base_spec();
    spec.snr_bbf_db = {0.0}; // highest point of the reference sweep grid
    spec.epsilon_deg = {0.5, 1.0, 1.5};
    spec.n_trials = 200;

    const SweepResult result = run_sweep(spec);
    for (const SweepPoint& p : result.points)
    {
        c.require(p.rmse_angle_deg <= 0.2, "eps " + fmt(p.epsilon_deg) + ": angle RMSE " +
                                               fmt(p.rmse_angle_deg) + " deg");
        c.note("eps " + fmt(p.epsilon_deg) + ": " + fmt(p.rmse_angle_deg) + " deg");
    }
    return c;
}

// Spearman rank correlation, averaged ranks for ties.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys)
{
    auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i)
            idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n)
        {
            std::size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]])
                ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k)
                r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };

    const std::vector<double> rx = ranks(xs), ry = ranks(ys);
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double num = 0.0, dx = 0.0, dy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    return num / std::sqrt(dx * dy);
}

// RMSE monotonicity in SNR for all three estimates.
Check c8_rmse_monotonic()
{
    Check c;
    SweepSpec spec = base_spec();
    spec.snr_bbf_db = {-30.0, -25.0, -20.0, -15.0, -10.0, -5.0, 0.0};
    spec.epsilon_deg = {1.0};
    spec.n_trials = 200;

    const SweepResult result = run_sweep(spec);

    std::vector<double> snr, angle, range, velocity;
    for (const SweepPoint& p : result.points)
    {
        snr.push_back(p.snr_bbf_db);
        angle.push_back(p.rmse_angle_deg);
        range.push_back(p.rmse_range_m);
        velocity.push_back(p.rmse_velocity_mps);
    }

    const double rho_a = spearman(snr, angle);
    const double rho_r = spearman(snr, range);
    const double rho_v = spearman(snr, velocity);
    c.require(rho_a <= 0.0, "angle rho " + fmt(rho_a));
    c.require(rho_r <= 0.0, "range rho " + fmt(rho_r));
    c.require(rho_v <= 0.0, "velocity rho " + fmt(rho_v));
    c.note("rho angle " + fmt(rho_a) + ", range " + fmt(rho_r) + ", velocity " + fmt(rho_v));

    // regression guard: hard failures stay rare at workable SNR
    for (const SweepPoint& p : result.points)
        if (p.snr_bbf_db >= -15.0)
            c.require(p.failures <= p.n_trials / 20,
                      "failures " + std::to_string(p.failures) + " at " + fmt(p.snr_bbf_db) +
                          " dB");
    return c;
}

// Byte-identical sweep CSVs from two CLI runs with the same seed.
Check c9_determinism(const std::string& cli_path)
{
    Check c;
    const fs::path dir = "acceptance_tmp";
    fs::create_directories(dir);
    const fs::path out1 = dir / "sweep1.csv";
    const fs::path out2 = dir / "sweep2.csv";

    const std::string args = " sweep --kind rmse --seed 424242"
                             " --set sweep.n_trials=10"
                             " --set sweep.snr_bbf_db=-15,0"
                             " --set sweep.epsilon_deg=1.0 --out ";
    const int rc1 = std::system((cli_path + args + out1.string() + " > /dev/null").c_str());
    const int rc2 = std::system((cli_path + args + out2.string() + " > /dev/null").c_str());
    c.require(WEXITSTATUS(rc1) == 0 && WEXITSTATUS(rc2) == 0, "cli run failed");

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = slurp(out1);
    const std::string b = slurp(out2);
    c.require(!a.empty(), "empty csv");
    c.require(a == b, "csv outputs differ");
    c.note(std::to_string(a.size()) + " bytes, identical");
    return c;
}

// snr_bs / snr_ue identity for K = N_rf over random geometries.
Check c10_snr_identity()
{
    Check c;
    const ArrayConfig array = table_array();
    RngStream rng(1001);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t)
    {
        UserState user;
        user.aod = rng.uniform(-1.0, 1.0);
        user.range = rng.uniform(5.0, 200.0);
        user.speed = rng.uniform(-30.0, 30.0);
        user.rcs = rng.uniform(0.5, 500.0);

        OfdmConfig ofdm;
        ofdm.n_users = array.n_rf;
        ofdm.tx_power = rng.uniform(0.1, 10.0);
        ofdm.noise_variance = rng.uniform(1e-13, 1e-9);

        const double rx_gain_sq = rng.uniform(0.5, 16.0);
        const std::complex<double> g_t =
            std::polar(rng.uniform(0.1, 8.0), rng.uniform(0.0, 2.0 * M_PI));

        const LinkBudget b = link_budget(user, ofdm, array, g_t, rx_gain_sq);
        const double expect = user.rcs / (4.0 * M_PI * user.range * user.range * rx_gain_sq);
        worst = std::max(worst, std::abs(b.snr_bs / b.snr_ue - expect) / expect);
    }
    c.require(worst < 1e-12, "worst relative deviation " + fmt(worst));
    c.note("worst relative deviation " + fmt(worst));
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    const std::string cli_path = (argc > 1) ? argv[1] : BEAMREFINE_CLI_PATH;

    struct Entry
    {
        int id;
        const char* label;
        std::function<Check()> body;
        double time_limit; // seconds; 0 = none
    };

    const std::vector<Entry> entries = {
        {1, "Slepian bank validity (orthonormality, eigenvalues, quadrature)",
         c1_slepian_bank, 1.0},
        {2, "Demodulation identity over 10^4 random angle pairs", c2_demodulation_identity,
         1.0},
        {3, "Cross-term approximation accuracy and monotonicity", c3_cross_terms, 0.0},
        {4, "Noiseless end-to-end state recovery", c4_noiseless_recovery, 5.0},
        {5, "FFT objective equals brute-force summation", c5_objective_equivalence, 0.0},
        {6, "Spectral-efficiency gap vs analytic oracle at -10 dB", c6_se_gap, 0.0},
        {7, "Sub-grid angle RMSE at the highest swept SNR", c7_subgrid_accuracy, 120.0},
        {8, "RMSE monotonicity in SNR (angle, range, velocity)", c8_rmse_monotonic, 0.0},
        {9, "Seeded sweep CSVs are byte-identical across runs",
         [&]() { return c9_determinism(cli_path); }, 0.0},
        {10, "BS/UE snr ratio identity for K = N_rf", c10_snr_identity, 0.0},
    };

    int failures = 0;
    for (const Entry& e : entries)
    {
        const auto t0 = std::chrono::steady_clock::now();
        Check c;
        try
        {
            c = e.body();
        }
        catch (const std::exception& ex)
        {
            c.ok = false;
            c.detail = std::string("exception: ") + ex.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (e.time_limit > 0.0 && elapsed > e.time_limit)
        {
            c.ok = false;
            c.detail += (c.detail.empty() ? "" : "; ") + std::string("runtime ") +
                        fmt(elapsed) + " s exceeds " + fmt(e.time_limit) + " s";
        }

        std::printf("C%-2d %-4s %s [%s] (%.2f s)\n", e.id, c.ok ? "PASS" : "FAIL", e.label,
                    c.detail.c_str(), elapsed);
        std::fflush(stdout);
        failures += c.ok ? 0 : 1;
    }

    if (failures == 0)
        std::printf("all %zu acceptance criteria passed\n", entries.size());
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures;
}
