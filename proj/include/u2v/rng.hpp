// u2vsim UAV-to-vehicle mmWave channel simulator
// Copyright (C) 2026 u2vsim project
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

#ifndef u2v_rng_H
#define u2v_rng_H

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace u2v
{

    // SplitMix64 step, used to derive independent seeds from (seed, path) tuples
    std::uint64_t split_mix64(std::uint64_t &state);

    // Deterministic seed derivation for named substreams. The same (seed, path)
    // always yields the same value, and distinct paths yield uncorrelated seeds.
    std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

    // Random stream with all distribution transforms implemented explicitly so
    // that the drawn sequences do not depend on the standard library in use.
    // mt19937_64 itself is fully specified by the C++ standard.
    class RandomStream
    {
      public:
        explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

        static RandomStream substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
        {
            return RandomStream(derive_seed(seed, path));
        }

        std::uint64_t next_u64() { return eng_(); }

        // Uniform on [0, 1), 53-bit resolution
        double uniform()
        {
            return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        }

        // Uniform on [a, b)
        double uniform(double a, double b) { return a + (b - a) * uniform(); }

        // Standard normal via Box-Muller; consumes exactly two uniforms per call
        double normal()
        {
            double u1 = 1.0 - uniform(); // (0, 1], keeps log() finite
            double u2 = uniform();
            return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
        }

        double normal(double mean, double stddev) { return mean + stddev * normal(); }

        // Laplace via inverse CDF
        double laplace(double loc, double scale)
        {
            double u = uniform() - 0.5;
            double s = (u < 0.0) ? -1.0 : 1.0;
            return loc - scale * s * std::log(1.0 - 2.0 * std::abs(u));
        }

        // Integer on [0, n)
        std::uint64_t below(std::uint64_t n);

        // k distinct indices drawn from [0, n), in draw order
        std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

        // Fisher-Yates shuffle of 0..n-1
        std::vector<std::size_t> permutation(std::size_t n);

      private:
        std::mt19937_64 eng_;
    };

} // namespace u2v

#endif
