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

#ifndef CFXL_GEOMETRY_HPP
#define CFXL_GEOMETRY_HPP

#include "core.hpp"
#include "rng.hpp"

#include <random>
#include <vector>

namespace cfxl
{
    /// Uniform planar array parallel to the x-y plane (y is height).
    ///
    /// Antennas are indexed row by row from the bottom-left element, which
    /// sits at `origin`. Indices are zero-based: n in [0, nx*ny).
    struct ArrayGeometry
    {
        int nx = 1;
        int ny = 1;
        double delta_x = 0.0; // m
        double delta_y = 0.0; // m
        vec3 origin = vec3::Zero();

        int size() const { return nx * ny; }
        double height() const { return origin.y(); }
        double aperture_x() const { return nx * delta_x; }
        double aperture_y() const { return ny * delta_y; }

        void validate() const
        {
            if (nx < 1 || ny < 1)
                throw domain_error("ArrayGeometry: nx and ny must be at least 1");
            if (!(delta_x > 0.0) || !(delta_y > 0.0))
                throw domain_error("ArrayGeometry: antenna spacings must be positive");
            if (!origin.allFinite())
                throw domain_error("ArrayGeometry: origin must be finite");
        }
    };

    struct Layout
    {
        std::vector<ArrayGeometry> bs;
        std::vector<vec3> ue;
        double area_side = 0.0;

        int num_bs() const { return static_cast<int>(bs.size()); }
        int num_ue() const { return static_cast<int>(ue.size()); }
    };

    struct PlacementParams
    {
        int num_bs = 1;
        int num_ue = 1;
        int nx = 1;
        int ny = 1;
        double delta_x = 0.025;
        double delta_y = 0.025;
        double area_side = 1000.0;
        double bs_height = 12.5;
        double ue_height = 1.5;
    };

    inline vec3 antenna_position(const ArrayGeometry &geom, int n)
    {
        if (n < 0 || n >= geom.size())
            throw index_error("antenna_position: index " + std::to_string(n) + " outside [0, " +
                              std::to_string(geom.size()) + ")");
        const int col = n % geom.nx;
        const int row = n / geom.nx;
        return {geom.origin.x() + col * geom.delta_x, geom.origin.y() + row * geom.delta_y, geom.origin.z()};
    }

    /// All antenna positions as columns of a 3 x N matrix.
    inline Eigen::Matrix3Xd antenna_positions(const ArrayGeometry &geom)
    {
        Eigen::Matrix3Xd pos(3, geom.size());
        for (int n = 0; n < geom.size(); ++n)
            pos.col(n) = antenna_position(geom, n);
        return pos;
    }

    /// BS origins and UE positions uniform over the square [-L/2, L/2]^2 in the x-z plane.
    inline Layout place_scenario(const PlacementParams &params, rng_engine &rng)
    {
        if (params.num_bs < 1 || params.num_ue < 1)
            throw domain_error("place_scenario: need at least one BS and one UE");
        if (!(params.area_side > 0.0))
            throw domain_error("place_scenario: area side must be positive");

        std::uniform_real_distribution<double> coord(-0.5 * params.area_side, 0.5 * params.area_side);
        Layout layout;
        layout.area_side = params.area_side;
        layout.bs.reserve(params.num_bs);
        for (int m = 0; m < params.num_bs; ++m)
        {
            ArrayGeometry g;
            g.nx = params.nx;
            g.ny = params.ny;
            g.delta_x = params.delta_x;
            g.delta_y = params.delta_y;
            const double x = coord(rng);
            const double z = coord(rng);
            g.origin = vec3(x, params.bs_height, z);
            g.validate();
            layout.bs.push_back(g);
        }
        layout.ue.reserve(params.num_ue);
        for (int k = 0; k < params.num_ue; ++k)
        {
            const double x = coord(rng);
            const double z = coord(rng);
            layout.ue.emplace_back(x, params.ue_height, z);
        }
        return layout;
    }

    struct PairDistances
    {
        double reference = 0.0; // |r_m - s_k|
        rvec per_antenna;       // |r_mn - s_k|, per_antenna[0] == reference
    };

    inline PairDistances pair_distances(const ArrayGeometry &geom, const vec3 &ue)
    {
        geom.validate();
        constexpr double coincident = 1e-12;
        PairDistances d;
        d.reference = (geom.origin - ue).norm();
        d.per_antenna.resize(geom.size());
        for (int n = 0; n < geom.size(); ++n)
        {
            const double dist = (antenna_position(geom, n) - ue).norm();
            if (!(dist > coincident))
                throw degenerate_geometry("pair_distances: UE coincides with antenna " + std::to_string(n));
            d.per_antenna[n] = dist;
        }
        d.per_antenna[0] = d.reference;
        return d;
    }
}

#endif
