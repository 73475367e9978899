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

#include "beamrefine/rng.hpp"

#include <cmath>

namespace beamrefine
{

namespace
{

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

RngStream::RngStream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

std::uint64_t RngStream::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t id : path)
        h = splitmix64(h ^ (id + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
    return h;
}

RngStream RngStream::substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
{
    return RngStream(derive(seed, path));
}

std::uint64_t RngStream::next_u64()
{
    return gen_();
}

double RngStream::uniform()
{
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

double RngStream::normal()
{
    if (have_spare_)
    {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 1.0 - uniform(); // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

std::complex<double> RngStream::complex_normal(double variance)
{
    if (variance == 0.0)
        return {0.0, 0.0};
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-variance * std::log(u1));
    double a = 2.0 * M_PI * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

} // namespace beamrefine
