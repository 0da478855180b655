/*
   Copyright 2026 The ncasp authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ncasp {

// Deterministic sampling helpers. Distributions are hand-rolled on top of the
// raw mt19937_64 stream so outputs are identical across standard libraries.

inline std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t tag) {
    // splitmix64 step on seed ^ tag
    std::uint64_t z = (seed ^ (tag * 0x9E3779B97F4A7C15ull)) + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;  // [0,1)
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

inline double gaussian(std::mt19937_64& g) {
    // Box-Muller; discards the second variate for a stateless helper.
    double u1 = 0.0;
    do { u1 = uniform01(g); } while (u1 <= 0.0);
    double u2 = uniform01(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline int uniform_int(std::mt19937_64& g, int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(g() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace ncasp
