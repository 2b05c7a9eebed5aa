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

#ifndef CFXL_COMPLEXITY_HPP
#define CFXL_COMPLEXITY_HPP

#include "combining.hpp"
#include "core.hpp"

#include <cstdint>

namespace cfxl
{
    /// Leading-term complex multiply-add counts per location draw.
    struct ComplexityEstimate
    {
        Scheme scheme = Scheme::lmr;
        std::uint64_t combining = 0;
        std::uint64_t precompute = 0;

        std::uint64_t total() const { return combining + precompute; }
    };

    /// Counts for M BSs with N antennas, K UEs, N_r realizations and N_Iter SSOR sweeps.
    inline ComplexityEstimate complexity_estimate(Scheme s, std::uint64_t M, std::uint64_t N, std::uint64_t K,
                                                  std::uint64_t Nr, std::uint64_t n_iter)
    {
        if (M == 0 || N == 0 || K == 0 || Nr == 0)
            throw domain_error("complexity_estimate: M, N, K and N_r must be positive");
        const std::uint64_t N2 = N * N, N3 = N2 * N;
        const std::uint64_t estimation = M * N3 * K; // MMSE-family statistics precompute
        ComplexityEstimate c;
        c.scheme = s;
        switch (s)
        {
        case Scheme::cmmse:
            c.combining = M * M * N2 * K * Nr + M * M * M * N3 * Nr;
            c.precompute = estimation;
            break;
        case Scheme::gsli_mmse:
            c.combining = M * N3 + M * N2 * K * Nr + K * K * K + M * N * K * K * Nr;
            c.precompute = M * M * M * N3 * K * K;
            break;
        case Scheme::lmmse:
            c.combining = M * N2 * K * Nr + M * N3 * Nr;
            c.precompute = estimation;
            break;
        case Scheme::si_lmmse:
            c.combining = M * N3 + M * N2 * K * Nr;
            c.precompute = estimation;
            break;
        case Scheme::si_cmmse:
            c.combining = M * M * M * N3 + M * M * N2 * K * Nr;
            c.precompute = estimation;
            break;
        case Scheme::lmr:
            c.combining = M * N * K * Nr;
            c.precompute = estimation;
            break;
        case Scheme::lrzf:
            c.combining = M * N * K * K * Nr + M * K * K * K * Nr;
            c.precompute = estimation;
            break;
        case Scheme::ins_ssor:
        case Scheme::sta_ssor:
            c.combining = M * N2 * K * Nr * n_iter;
            c.precompute = estimation;
            break;
        case Scheme::ins_si_ssor:
            c.combining = M * N2 * K * Nr * n_iter + M * N3;
            c.precompute = estimation;
            break;
        }
        return c;
    }
}

#endif
