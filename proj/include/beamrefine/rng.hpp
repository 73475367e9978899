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
#include <cstdint>
#include <initializer_list>
#include <random>

namespace beamrefine
{

/**
 * Deterministic random stream with explicit substream derivation.
 *
 * Substreams are derived counter-style: the root seed and a path of indices
 * (e.g. {snr_index, epsilon_index, trial_index}) are folded together with a
 * splitmix64 mix, so a given trial always sees the same stream regardless of
 * scheduling order or thread count.
 */
class RngStream
{
public:
    explicit RngStream(std::uint64_t seed);

    // Folds a path of indices into a seed. Same path, same seed, always.
    static std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path);
    static RngStream substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

    std::uint64_t next_u64();

    double uniform(); // [0, 1)
    double uniform(double lo, double hi);

    double normal(); // N(0, 1), Box-Muller

    // Circularly symmetric complex Gaussian, E|z|^2 = variance
    std::complex<double> complex_normal(double variance);

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace beamrefine
