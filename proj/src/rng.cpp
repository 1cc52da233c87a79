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

#include "u2v/rng.hpp"

#include <stdexcept>

namespace u2v
{

    std::uint64_t split_mix64(std::uint64_t &state)
    {
        state += 0x9E3779B97f4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path)
    {
        std::uint64_t state = seed;
        std::uint64_t out = split_mix64(state);
        for (std::uint64_t p : path)
        {
            state ^= p * 0xD1B54A32D192ED03ull;
            out = split_mix64(state);
        }
        return out;
    }

    std::uint64_t RandomStream::below(std::uint64_t n)
    {
        if (n == 0)
            throw std::invalid_argument("RandomStream::below: n must be positive.");

        // Rejection sampling keeps the draw unbiased
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = eng_();
        while (v >= limit)
            v = eng_();
        return v % n;
    }

    std::vector<std::size_t> RandomStream::sample_without_replacement(std::size_t n, std::size_t k)
    {
        if (k > n)
            throw std::invalid_argument("sample_without_replacement: k exceeds population size.");

        // Partial Fisher-Yates over the index vector
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i)
            idx[i] = i;
        for (std::size_t i = 0; i < k; ++i)
        {
            std::size_t j = i + static_cast<std::size_t>(below(n - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k);
        return idx;
    }

    std::vector<std::size_t> RandomStream::permutation(std::size_t n)
    {
        return sample_without_replacement(n, n);
    }

} // namespace u2v
