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

#ifndef CFXL_NETWORK_HPP
#define CFXL_NETWORK_HPP

#include "channel.hpp"
#include "core.hpp"
#include "coupling.hpp"
#include "geometry.hpp"
#include "rng.hpp"

#include <optional>
#include <vector>

namespace cfxl
{
    /// Effective (post-coupling) channel statistics of every BS-UE pair.
    /// Pair (m, k) is stored at index m * K + k.
    struct NetworkStats
    {
        int M = 0;
        int K = 0;
        int N = 0;
        std::vector<EffectiveStats> pair;
        cmat Z_BS; // empty when coupling is disabled

        const EffectiveStats &at(int m, int k) const { return pair[static_cast<std::size_t>(m * K + k)]; }
        EffectiveStats &at(int m, int k) { return pair[static_cast<std::size_t>(m * K + k)]; }
    };

    /// One small-scale fading draw; g[m * K + k] is the effective channel.
    struct ChannelRealization
    {
        std::vector<cvec> g;

        const cvec &at(int m, int k, int K) const { return g[static_cast<std::size_t>(m * K + k)]; }
    };

    /// Builds all pair statistics for a layout. Every BS shares one array shape,
    /// so the variance profile and Z_BS are computed once.
    inline NetworkStats build_network_stats(const Layout &layout, double wavelength, const PropagationParams &prop,
                                            const std::optional<CouplingParams> &coupling)
    {
        if (layout.bs.empty() || layout.ue.empty())
            throw domain_error("build_network_stats: empty layout");
        const ArrayGeometry &g0 = layout.bs.front();
        for (const auto &g : layout.bs)
            if (g.nx != g0.nx || g.ny != g0.ny || g.delta_x != g0.delta_x || g.delta_y != g0.delta_y)
                throw shape_error("build_network_stats: all BS arrays must share one shape");

        NetworkStats net;
        net.M = layout.num_bs();
        net.K = layout.num_ue();
        net.N = g0.size();
        const auto lattice = wavenumber_lattice(g0.nx, g0.ny, g0.delta_x, g0.delta_y, wavelength);
        const rvec profile = variance_profile(lattice, g0.nx, g0.ny, g0.delta_x, g0.delta_y, wavelength);
        if (coupling)
            net.Z_BS = coupling_matrix(*coupling, g0, wavelength).Z_BS;

        net.pair.reserve(static_cast<std::size_t>(net.M * net.K));
        for (int m = 0; m < net.M; ++m)
            for (int k = 0; k < net.K; ++k)
            {
                const auto stats = pair_channel_stats(layout.bs[m], layout.ue[k], wavelength, prop, &profile);
                net.pair.push_back(coupling ? apply_coupling(net.Z_BS, stats) : uncoupled(stats));
            }
        return net;
    }

    inline ChannelRealization sample_channels(const NetworkStats &net, rng_engine &rng)
    {
        ChannelRealization r;
        r.g.reserve(net.pair.size());
        for (const auto &p : net.pair)
            r.g.push_back(p.gbar + p.factor * complex_normal_vector(rng, p.factor.cols()));
        return r;
    }

    /// Dense block-diagonal matrix from equally sized square blocks.
    inline cmat block_diagonal(const std::vector<cmat> &blocks)
    {
        Eigen::Index n = 0;
        for (const auto &b : blocks)
            n += b.rows();
        cmat out = cmat::Zero(n, n);
        Eigen::Index off = 0;
        for (const auto &b : blocks)
        {
            out.block(off, off, b.rows(), b.cols()) = b;
            off += b.rows();
        }
        return out;
    }

    /// Stacks per-BS vectors (each length N) into one length-MN vector.
    inline cvec stack(const std::vector<cvec> &parts)
    {
        Eigen::Index n = 0;
        for (const auto &p : parts)
            n += p.size();
        cvec out(n);
        Eigen::Index off = 0;
        for (const auto &p : parts)
        {
            out.segment(off, p.size()) = p;
            off += p.size();
        }
        return out;
    }
}

#endif
