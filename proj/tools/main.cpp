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

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "beamrefine/config.hpp"
#include "beamrefine/metrics.hpp"

namespace
{

constexpr double rad2deg = 180.0 / M_PI;

struct CommonArgs
{
    std::string config_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

void add_common_options(CLI::App* cmd, CommonArgs& args)
{
    cmd->add_option("-c,--config", args.config_path, "Config file (key=value per line)");
    cmd->add_option("--set", args.overrides, "Override a config key, e.g. --set array.n_rf=8");
    cmd->add_option("--seed", args.seed, "Random seed (overrides the config seed)")
        ->each([&args](const std::string&) { args.seed_given = true; });
}

beamrefine::RunConfig resolve_config(const CommonArgs& args)
{
    beamrefine::RunConfig cfg;
    if (!args.config_path.empty())
        cfg = beamrefine::load_config(args.config_path);
    for (const std::string& kv : args.overrides)
    {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw beamrefine::config_error("--set " + kv, 0, "expected key=value");
        beamrefine::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (args.seed_given)
        cfg.sweep.seed = args.seed;
    cfg.validate();
    return cfg;
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary); // binary: LF line endings everywhere
    if (!out)
        throw beamrefine::config_error(path, 0, "cannot open output file for writing");
    return out;
}

int cmd_refine(const CommonArgs& args, const std::string& pseudospectrum_path,
               const std::string& objective_path)
{
    using namespace beamrefine;
    const RunConfig cfg = resolve_config(args);

    SweepSpec spec = cfg.sweep;
    spec.noiseless = cfg.trial_noiseless;

    // Timing sanity for the configured kinematics (worst case at the
    // configured range/speed); reported, not fatal.
    UserState probe = spec.user;
    probe.aod = 0.0;
    const TimingReport timing = validate_timing(spec.ofdm, std::span<const UserState>(&probe, 1));

    RngStream rng(spec.seed);
    StateEstimate estimate;
    arma::mat objective;
    const arma::cx_mat psi = slepian_bank(spec.array);
    const TrialOutcome outcome =
        run_trial(spec, psi, cfg.trial_snr_bbf_db, cfg.trial_epsilon_deg, rng, &estimate,
                  objective_path.empty() ? nullptr : &objective);

    if (outcome.success && !pseudospectrum_path.empty())
    {
        std::ofstream out = open_output(pseudospectrum_path);
        write_pseudospectrum_csv(estimate.music, out);
    }
    if (outcome.success && !objective_path.empty())
    {
        std::ofstream out = open_output(objective_path);
        write_objective_csv(objective, spec.ofdm, out);
    }

    std::printf("beam refinement trial (seed %llu)\n",
                static_cast<unsigned long long>(spec.seed));
    std::printf("  snr_bbf          : %.2f dB%s\n", cfg.trial_snr_bbf_db,
                spec.noiseless ? " (noiseless synthesis)" : "");
    std::printf("  epsilon          : %.4f deg\n", cfg.trial_epsilon_deg);
    std::printf("  true angle       : %+.4f deg\n", outcome.true_angle * rad2deg);
    std::printf("  coarse angle     : %+.4f deg\n", outcome.coarse_angle * rad2deg);
    if (!timing.pass)
        for (const std::string& v : timing.violations)
            std::printf("  timing warning   : %s\n", v.c_str());

    if (!outcome.success)
    {
        std::printf("  refinement FAILED\n");
        return 2;
    }

    std::printf("  refined angle    : %+.4f deg (error %+.5f deg)\n",
                outcome.refined_angle * rad2deg,
                (outcome.refined_angle - outcome.true_angle) * rad2deg);
    std::printf("  range estimate   : %.3f m (true %.3f m)\n", outcome.range_est,
                spec.user.range);
    std::printf("  velocity estimate: %.3f m/s (true %.3f m/s)\n", outcome.velocity_est,
                spec.user.speed);
    std::printf("  SE refined       : %.4f bits/s/Hz\n", outcome.se_refined);
    std::printf("  SE unrefined     : %.4f bits/s/Hz\n", outcome.se_unrefined);
    return 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& kind, std::string out_path)
{
    using namespace beamrefine;
    const RunConfig cfg = resolve_config(args);

    if (out_path.empty())
        out_path = "sweep_" + kind + ".csv";

    const SweepResult result = run_sweep(cfg.sweep);

    std::ofstream out = open_output(out_path);
    if (kind == "se")
        write_sweep_se_csv(result, out);
    else
        write_sweep_rmse_csv(result, out);
    out.flush();
    if (!out)
        throw config_error(out_path, 0, "write failed");
    std::printf("wrote %s (%zu points, %d trials each)\n", out_path.c_str(),
                result.points.size(), cfg.sweep.n_trials);
    return 0;
}

int cmd_slepian_dump(const CommonArgs& args, std::string out_path)
{
    using namespace beamrefine;
    const RunConfig cfg = resolve_config(args);

    if (out_path.empty())
        out_path = "slepian.csv";

    std::ofstream out = open_output(out_path);
    write_slepian_csv(cfg.sweep.array, out);
    out.flush();
    if (!out)
        throw config_error(out_path, 0, "write failed");
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_snapshot_dump(const CommonArgs& args, std::string out_path)
{
    using namespace beamrefine;
    const RunConfig cfg = resolve_config(args);

    if (out_path.empty())
        out_path = "snapshot.csv";

    // One seeded single-user synthesis at the trial settings.
    SweepSpec spec = cfg.sweep;
    spec.noiseless = cfg.trial_noiseless;
    const double epsilon = cfg.trial_epsilon_deg * M_PI / 180.0;
    const double snr_bbf = std::pow(10.0, cfg.trial_snr_bbf_db / 10.0);

    RngStream rng(spec.seed);
    UserState state = spec.user;
    state.aod = rng.uniform(-M_PI / 6.0, M_PI / 6.0);
    state.tx_phase = rng.uniform(0.0, 2.0 * M_PI);
    state.bs_phase = rng.uniform(0.0, 2.0 * M_PI);

    OfdmConfig ofdm = spec.ofdm;
    const LinkCoefficients lc = link_coefficients(state, ofdm.carrier_freq);
    ofdm.noise_variance =
        spec.noiseless ? 0.0 : std::norm(lc.h_ue) * ofdm.tx_power / (ofdm.n_users * snr_bbf);

    const ReductionBank bank = reduction_matrix(spec.array, state.aod - epsilon);
    const SymbolGrid symbols = generate_symbols(ofdm, rng);
    const SnapshotGrid grid = radar_snapshots_single(state, bank, ofdm, symbols, rng);

    std::ofstream out = open_output(out_path);
    write_snapshot_csv(grid, out);
    out.flush();
    if (!out)
        throw config_error(out_path, 0, "write failed");
    std::printf("wrote %s (%llu x %llu x %llu)\n", out_path.c_str(),
                static_cast<unsigned long long>(grid.n_symbols()),
                static_cast<unsigned long long>(grid.n_subcarriers()),
                static_cast<unsigned long long>(grid.n_rf()));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"OFDM radar beam refinement and user state estimation simulator"};
    app.require_subcommand(1);

    CommonArgs refine_args;
    std::string refine_pseudospectrum, refine_objective;
    CLI::App* refine = app.add_subcommand("refine", "Run one end-to-end refinement trial");
    add_common_options(refine, refine_args);
    refine->add_option("--dump-pseudospectrum", refine_pseudospectrum,
                       "Write the MUSIC scan as CSV");
    refine->add_option("--dump-objective", refine_objective,
                       "Write the delay-Doppler surface as CSV");

    CommonArgs sweep_args;
    std::string sweep_kind = "se";
    std::string sweep_out;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Monte-Carlo sweep over SNR and discretization error, CSV output");
    add_common_options(sweep, sweep_args);
    sweep->add_option("-k,--kind", sweep_kind, "Output kind: se or rmse")
        ->check(CLI::IsMember({"se", "rmse"}));
    sweep->add_option("-o,--out", sweep_out, "Output CSV path (default sweep_<kind>.csv)");

    CommonArgs slepian_args;
    std::string slepian_out;
    CLI::App* slepian =
        app.add_subcommand("slepian-dump", "Dump filter-bank beam patterns as CSV");
    add_common_options(slepian, slepian_args);
    slepian->add_option("-o,--out", slepian_out, "Output CSV path (default slepian.csv)");

    CommonArgs snapshot_args;
    std::string snapshot_out;
    CLI::App* snapshot =
        app.add_subcommand("snapshot-dump", "Dump one synthesized snapshot grid as CSV");
    add_common_options(snapshot, snapshot_args);
    snapshot->add_option("-o,--out", snapshot_out, "Output CSV path (default snapshot.csv)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return 1;
    }

    try
    {
        if (refine->parsed())
            return cmd_refine(refine_args, refine_pseudospectrum, refine_objective);
        if (sweep->parsed())
            return cmd_sweep(sweep_args, sweep_kind, sweep_out);
        if (slepian->parsed())
            return cmd_slepian_dump(slepian_args, slepian_out);
        if (snapshot->parsed())
            return cmd_snapshot_dump(snapshot_args, snapshot_out);
    }
    catch (const beamrefine::estimation_error& e)
    {
        std::cerr << "estimation failed: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
