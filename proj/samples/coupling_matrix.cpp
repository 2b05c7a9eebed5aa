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

// Mutual-coupling strength of a small dipole array versus element spacing.

#include <cfxl/cfxl.hpp>

#include <cstdio>

int main()
{
    const double lambda = cfxl::wavelength_from_frequency(3e9);
    const auto params = cfxl::CouplingParams::defaults(lambda);
    std::printf("Z_A = %.4f %+.4fj ohm (dipole 0.1 lambda)\n\n", cfxl::antenna_impedance(params, lambda).real(),
                cfxl::antenna_impedance(params, lambda).imag());
    std::printf("%10s %14s %14s %14s\n", "spacing/l", "|Z_12|/|Z_A|", "max|offdiag|", "||Z_BS - I||_F");

    for (double spacing : {1.0, 0.5, 0.25, 0.125})
    {
        cfxl::ArrayGeometry g;
        g.nx = g.ny = 4;
        g.delta_x = g.delta_y = spacing * lambda;
        const auto cm = cfxl::coupling_matrix(params, g, lambda);
        cfxl::cmat off = cm.Z_BS;
        off.diagonal().setZero();
        const double id_dev = (cm.Z_BS - cfxl::cmat::Identity(g.size(), g.size())).norm();
        std::printf("%10.4f %14.4e %14.4e %14.4e\n", spacing, std::abs(cm.Z_C(0, 1)) / std::abs(cm.Z_A),
                    off.cwiseAbs().maxCoeff(), id_dev);
    }
    return 0;
}
