// SPDX-License-Identifier: Apache-2.0
//
// cfsound - drone virtual-array channel sounding and cell-free massive MIMO analysis
// Copyright (C) 2026 cfsound contributors
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

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace cfsound {

// Deterministic, fully specified RNG primitives. Every stochastic quantity in
// the simulator is derived from a hash of (seed, stream id, indices), never
// from shared sequential state, so results are identical across runs and
// across thread counts. std:: distributions are avoided on purpose: their
// algorithms are implementation-defined.

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer (Vigna). Bijective 64-bit mix with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t seed_mix(std::uint64_t seed, std::uint64_t word) noexcept {
    return mix64(seed ^ (mix64(word + kGoldenGamma)));
}

// Folds any number of 64-bit words into one stream seed.
template <typename... Words>
constexpr std::uint64_t seed_from(std::uint64_t seed, Words... words) noexcept {
    ((seed = seed_mix(seed, static_cast<std::uint64_t>(words))), ...);
    return seed;
}

inline std::uint64_t double_bits(double v) noexcept {
    return std::bit_cast<std::uint64_t>(v);
}

// Independent random streams, one tag per consumer.
enum class RandomStream : std::uint64_t {
    kShadowing = 1,
    kFading = 2,
    kJitter = 3,
    kSnrSubset = 4,
    kSinrSubset = 5,
};

// Counter-based SplitMix64 generator.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform();
    }

    // Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0)
            throw std::invalid_argument("Rng::below: bound must be positive.");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next_u64();
        while (x >= limit)
            x = next_u64();
        return x % n;
    }

    // Standard normal via Box-Muller (one output per pair of uniforms).
    double normal() noexcept {
        const double u1 = 1.0 - uniform(); // (0, 1], keeps log finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    // Circularly symmetric complex normal, unit total variance (CN(0,1)).
    std::complex<double> normal_complex() noexcept {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

  private:
    std::uint64_t state_;
};

} // namespace cfsound
