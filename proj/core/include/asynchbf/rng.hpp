// asynchbf - cooperative leakage beamforming for underlay spectrum sharing
// Copyright (C) 2026 The asynchbf authors
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

#ifndef ASYNCHBF_RNG_HPP
#define ASYNCHBF_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "asynchbf/types.hpp"

namespace asynchbf
{
    // Derives an independent stream seed from a master seed and a stream index.
    // SplitMix64 finalizer; bijective in the combined state, so distinct stream
    // indices never collide for a fixed master seed.
    inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream)
    {
        std::uint64_t z = master + stream * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Deterministic random source. All randomness in the library flows through
    // this class so that results are reproducible bit-for-bit across platforms
    // with the same IEEE-754 double arithmetic. Gaussian variates use the
    // Box-Muller transform rather than std::normal_distribution, whose output
    // sequence is implementation-defined.
    class Rng
    {
      public:
        explicit Rng(std::uint64_t seed) : eng_(seed) {}

        std::uint64_t next_u64() { return eng_(); }

        // Uniform on (0, 1]; never returns 0 so log() is always finite.
        double uniform()
        {
            return 1.0 - static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        }

        double gaussian()
        {
            if (have_spare_)
            {
                have_spare_ = false;
                return spare_;
            }
            double u1 = uniform();
            double u2 = uniform();
            double r = std::sqrt(-2.0 * std::log(u1));
            double a = 2.0 * std::numbers::pi * u2;
            spare_ = r * std::sin(a);
            have_spare_ = true;
            return r * std::cos(a);
        }

        // Circularly-symmetric complex Gaussian with unit variance, E|g|^2 = 1.
        cxd cgaussian()
        {
            double re = gaussian();
            double im = gaussian();
            return cxd(re, im) * std::numbers::sqrt2 * 0.5;
        }

      private:
        std::mt19937_64 eng_;
        bool have_spare_ = false;
        double spare_ = 0.0;
    };
} // namespace asynchbf

#endif
