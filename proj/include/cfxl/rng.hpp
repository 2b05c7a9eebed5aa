// SPDX-License-Identifier: Apache-2.0
//
// cfxl - uplink combining and spectral-efficiency library for near-field cell-free XL-MIMO
// Copyright (C) 2026 The cfxl contributors
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

#ifndef CFXL_RNG_HPP
#define CFXL_RNG_HPP

#include "core.hpp"

#include <cstdint>
#include <random>

namespace cfxl
{
    using rng_engine = std::mt19937_64;

    // What a random stream is used for. Streams with different purposes never overlap,
    // so enabling another scheme or bound does not perturb channel draws.
    enum class stream_purpose : std::uint64_t
    {
        layout = 1,
        small_scale_fading = 2,
        pilot_noise = 3,
        test = 99,
    };

    namespace detail
    {
        inline constexpr std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9E3779B97F4A7C15ULL;
            x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
            x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
            return x ^ (x >> 31);
        }
    }

    /// Counter-based substream key: the stream is a pure function of
    /// (seed, location, realization, purpose).
    inline constexpr std::uint64_t substream_key(std::uint64_t seed, std::uint64_t location,
                                                 std::uint64_t realization, stream_purpose purpose)
    {
        std::uint64_t h = detail::splitmix64(seed);
        h = detail::splitmix64(h ^ location);
        h = detail::splitmix64(h ^ (realization + 0x632BE59BD9B4E019ULL));
        h = detail::splitmix64(h ^ static_cast<std::uint64_t>(purpose));
        return h;
    }

    inline rng_engine make_stream(std::uint64_t seed, std::uint64_t location, std::uint64_t realization,
                                  stream_purpose purpose)
    {
        return rng_engine(substream_key(seed, location, realization, purpose));
    }

    /// Circularly-symmetric complex normal CN(0, variance).
    inline cplx complex_normal(rng_engine &rng, double variance = 1.0)
    {
        std::normal_distribution<double> nd(0.0, std::sqrt(0.5 * variance));
        const double re = nd(rng);
        const double im = nd(rng);
        return {re, im};
    }

    inline cvec complex_normal_vector(rng_engine &rng, Eigen::Index n, double variance = 1.0)
    {
        cvec z(n);
        for (Eigen::Index i = 0; i < n; ++i)
            z[i] = complex_normal(rng, variance);
        return z;
    }

    inline cmat complex_normal_matrix(rng_engine &rng, Eigen::Index rows, Eigen::Index cols, double variance = 1.0)
    {
        cmat z(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                z(i, j) = complex_normal(rng, variance);
        return z;
    }
}

#endif
