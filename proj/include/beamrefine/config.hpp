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
#include <ostream>
#include <stdexcept>
#include <string>

#include "beamrefine/experiments.hpp"

namespace beamrefine
{

/** Config-file or override parse failure, anchored to a line when known. */
class config_error : public std::runtime_error
{
public:
    config_error(const std::string& where, int line, const std::string& what)
        : std::runtime_error(line > 0 ? where + ":" + std::to_string(line) + ": " + what
                                      : where + ": " + what)
    {
    }
};

/**
 * Full run configuration: simulation parameters plus the single-trial knobs
 * used by the refine command. Loaded from a flat key=value file with section
 * prefixes (e.g. array.n_antennas=64); every key has a default matching the
 * reference 60 GHz / 64-antenna setup. Unknown keys are rejected.
 */
struct RunConfig
{
    SweepSpec sweep;              // array/ofdm/user/sweep/music/estimator settings
    double trial_epsilon_deg = 1.0;
    double trial_snr_bbf_db = 0.0;
    bool trial_noiseless = false;

    void validate() const;
};

// Parse a config file. Throws config_error with file:line anchors.
RunConfig load_config(const std::string& path);

// Apply one key=value override (the --set flag). Throws config_error.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// CSV emitters (header row, '.' decimal separator, LF line endings).
void write_sweep_se_csv(const SweepResult& result, std::ostream& out);
void write_sweep_rmse_csv(const SweepResult& result, std::ostream& out);
void write_slepian_csv(const ArrayConfig& array, std::ostream& out);
void write_snapshot_csv(const SnapshotGrid& grid, std::ostream& out);
void write_pseudospectrum_csv(const MusicResult& music, std::ostream& out);
void write_objective_csv(const arma::mat& objective, const OfdmConfig& ofdm, std::ostream& out);

} // namespace beamrefine
