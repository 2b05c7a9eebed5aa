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

#ifndef CFXL_COUPLING_HPP
#define CFXL_COUPLING_HPP

#include "channel.hpp"
#include "core.hpp"
#include "geometry.hpp"
#include "specialfn.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace cfxl
{
    // Which algebraic form of the mutual-impedance expressions to use.
    //   classical  : induced-EMF forms for thin sinusoidal-current dipoles
    //   as_printed : reproduces an alternative transcription (sign of the
    //                u4 terms in the collinear case, the (h - l) offset in the
    //                outermost echelon arguments, the vertical distance in the
    //                side-by-side reactance)
    enum class ImpedanceFormulaVariant
    {
        classical,
        as_printed,
    };

    /// Dipole and load parameters. Dipoles are parallel to the y-axis (array height).
    struct CouplingParams
    {
        cplx load_impedance{50.0, 0.0}; // Z_L, ohm
        double dipole_length = 0.0;     // m
        double wire_radius = 0.0;       // m
        double eta = 120.0 * pi;        // ohm
        double euler_gamma = 0.577;
        ImpedanceFormulaVariant variant = ImpedanceFormulaVariant::classical;

        // Thin dipole of length 0.1 lambda and radius 1e-5 lambda.
        static CouplingParams defaults(double wavelength)
        {
            CouplingParams p;
            p.dipole_length = 0.1 * wavelength;
            p.wire_radius = 1e-5 * wavelength;
            return p;
        }

        void validate() const
        {
            if (!(dipole_length > 0.0) || !(wire_radius > 0.0) || !(eta > 0.0))
                throw domain_error("CouplingParams: dipole length, wire radius and eta must be positive");
        }
    };

    struct CouplingMatrix
    {
        cplx Z_A;
        cmat Z_C;  // mutual impedance matrix, diagonal Z_A
        cmat Z_BS; // (Z_A + Z_L)(Z_C + Z_L I)^{-1}
    };

    /// Self impedance of a thin centre-fed dipole, referred to its terminals.
    inline cplx antenna_impedance(const CouplingParams &params, double wavelength)
    {
        params.validate();
        const double k = wavenumber(wavelength);
        const double kl = k * params.dipole_length;
        const double s2 = std::pow(std::sin(0.5 * kl), 2);
        if (s2 < 1e-14)
            throw singular_configuration("antenna_impedance: dipole length is a multiple of the wavelength");
        const double g = params.euler_gamma;
        const double si1 = sine_integral(kl), si2 = sine_integral(2.0 * kl);
        const double ci1 = cosine_integral(kl), ci2 = cosine_integral(2.0 * kl);
        const double cir = cosine_integral(2.0 * k * params.wire_radius * params.wire_radius / params.dipole_length);
        const double s = std::sin(kl), c = std::cos(kl);

        const double r = params.eta / (2.0 * pi * s2) *
                         (g + std::log(kl) - ci1 + 0.5 * s * (si2 - 2.0 * si1) +
                          0.5 * c * (g + std::log(0.5 * kl) + ci2 - 2.0 * ci1));
        const double x = params.eta / (4.0 * pi * s2) *
                         (2.0 * si1 + c * (2.0 * si1 - si2) - s * (2.0 * ci1 - ci2 - cir));
        return {r, x};
    }

    namespace detail
    {
        inline cplx side_by_side(const CouplingParams &p, double k, double d, double d_vertical)
        {
            const double l = p.dipole_length;
            const double root = std::sqrt(d * d + l * l);
            const double v0 = k * d;
            const double v1 = k * (root + l);
            const double v2 = k * (root - l);
            const double v0x = p.variant == ImpedanceFormulaVariant::as_printed ? k * d_vertical : v0;
            const double c = p.eta / (4.0 * pi);
            const double r = c * (2.0 * cosine_integral(v0) - cosine_integral(v1) - cosine_integral(v2));
            const double x = -c * (2.0 * sine_integral(v0x) - sine_integral(v1) - sine_integral(v2));
            return {r, x};
        }

        inline cplx collinear(const CouplingParams &p, double k, double h)
        {
            const double l = p.dipole_length;
            if (!(h > l))
                throw singular_configuration("mutual_impedance: collinear dipoles overlap or touch (vertical spacing " +
                                             std::to_string(h) + " m <= dipole length)");
            const double u0 = k * h;
            const double u4 = 2.0 * k * (h + l);
            const double u5 = 2.0 * k * (h - l);
            const double u6 = (h * h - l * l) / (h * h);
            const double su4 = p.variant == ImpedanceFormulaVariant::as_printed ? -sine_integral(u4) : sine_integral(u4);
            const double c = p.eta / (8.0 * pi);
            const double co = std::cos(u0), si = std::sin(u0);
            const double ci2u0 = cosine_integral(2.0 * u0), si2u0 = sine_integral(2.0 * u0);
            const double ci4 = cosine_integral(u4), ci5 = cosine_integral(u5);
            const double si5 = sine_integral(u5);
            const double lg = std::log(u6);
            const double r = -c * co * (-2.0 * ci2u0 + ci5 + ci4 - lg) + c * si * (2.0 * si2u0 - si5 - su4);
            const double x = -c * co * (2.0 * si2u0 - si5 - su4) + c * si * (2.0 * ci2u0 - ci5 - ci4 - lg);
            return {r, x};
        }

        // k (r + x) and k (r - x) for r = sqrt(d^2 + x^2), avoiding cancellation.
        inline std::pair<double, double> sum_difference(double r, double x, double d, double k)
        {
            if (x >= 0.0)
                return {k * (r + x), k * d * d / (r + x)};
            return {k * d * d / (r - x), k * (r - x)};
        }

        inline cplx echelon(const CouplingParams &p, double k, double d, double h)
        {
            const double l = p.dipole_length;
            const double w0 = k * h;
            const double r0 = std::sqrt(d * d + h * h);
            const double r1 = std::sqrt(d * d + (h - l) * (h - l));
            const double r2 = std::sqrt(d * d + (h + l) * (h + l));
            const double off2 = p.variant == ImpedanceFormulaVariant::as_printed ? h - l : h + l;
            const auto [a0, a0p] = sum_difference(r0, h, d, k);
            const auto [a1, a1p] = sum_difference(r1, h - l, d, k);
            double a2, a2p;
            if (p.variant == ImpedanceFormulaVariant::as_printed)
                a2 = k * (r2 + off2), a2p = k * (r2 - off2);
            else
                std::tie(a2, a2p) = sum_difference(r2, off2, d, k);

            const double c0 = cosine_integral(a0), c0p = cosine_integral(a0p);
            const double c1 = cosine_integral(a1), c1p = cosine_integral(a1p);
            const double c2 = cosine_integral(a2), c2p = cosine_integral(a2p);
            const double s0 = sine_integral(a0), s0p = sine_integral(a0p);
            const double s1 = sine_integral(a1), s1p = sine_integral(a1p);
            const double s2 = sine_integral(a2), s2p = sine_integral(a2p);

            const double c = p.eta / (8.0 * pi);
            const double co = std::cos(w0), si = std::sin(w0);
            const double r = -c * co * (-2.0 * c0 - 2.0 * c0p + c1 + c1p + c2 + c2p) +
                             c * si * (2.0 * s0 - 2.0 * s0p - s1 + s1p - s2 + s2p);
            const double x = -c * co * (2.0 * s0 + 2.0 * s0p - s1 - s1p - s2 - s2p) +
                             c * si * (2.0 * c0 - 2.0 * c0p - c1 + c1p - c2 + c2p);
            return {r, x};
        }
    }

    /// Mutual impedance between two parallel dipoles separated by d_rows rows and
    /// d_cols columns of the array (zero-based offsets, sign irrelevant).
    inline cplx mutual_impedance_offset(const CouplingParams &params, double wavelength, const ArrayGeometry &geom,
                                        int d_rows, int d_cols)
    {
        params.validate();
        const double k = wavenumber(wavelength);
        d_rows = std::abs(d_rows);
        d_cols = std::abs(d_cols);
        const double h = d_rows * geom.delta_y;
        const double d = d_cols * geom.delta_x;
        if (d_rows == 0 && d_cols == 0)
            return antenna_impedance(params, wavelength);
        if (d_rows == 0)
            return detail::side_by_side(params, k, d, h);
        if (d_cols == 0)
            return detail::collinear(params, k, h);
        return detail::echelon(params, k, d, h);
    }

    /// Mutual impedance between antenna n1 of row a and antenna n1p of row b.
    inline cplx mutual_impedance(const CouplingParams &params, double wavelength, int a, int b, int n1, int n1p,
                                 const ArrayGeometry &geom)
    {
        if (a < 0 || b < 0 || a >= geom.ny || b >= geom.ny || n1 < 0 || n1p < 0 || n1 >= geom.nx || n1p >= geom.nx)
            throw index_error("mutual_impedance: row or column index out of range");
        return mutual_impedance_offset(params, wavelength, geom, a - b, n1 - n1p);
    }

    /// Z_C built from one evaluation per distinct (row offset, column offset).
    inline cmat mutual_impedance_matrix(const CouplingParams &params, const ArrayGeometry &geom, double wavelength)
    {
        geom.validate();
        const int nx = geom.nx, ny = geom.ny;
        std::vector<cplx> table(static_cast<std::size_t>(nx * ny));
        for (int dr = 0; dr < ny; ++dr)
            for (int dc = 0; dc < nx; ++dc)
                table[dr * nx + dc] = mutual_impedance_offset(params, wavelength, geom, dr, dc);
        const int n = geom.size();
        cmat zc(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
            {
                const int dr = std::abs(i / nx - j / nx);
                const int dc = std::abs(i % nx - j % nx);
                zc(i, j) = table[dr * nx + dc];
            }
        return zc;
    }

    /// Z_BS = (Z_A + Z_L)(Z_C + Z_L I)^{-1} for a caller-supplied Z_C.
    ///
    /// Evaluated as (I + E)^{-1} with E = (Z_C - Z_A I)/(Z_A + Z_L), so an
    /// uncoupled Z_C = Z_A I yields the identity without rounding.
    inline cmat coupling_from_mutual(cplx z_a, cplx z_l, const cmat &z_c)
    {
        if (z_c.rows() != z_c.cols())
            throw shape_error("coupling_from_mutual: Z_C must be square");
        const cplx scale = z_a + z_l;
        if (scale == cplx(0.0, 0.0))
            throw singular_configuration("coupling_from_mutual: Z_A + Z_L is zero");
        cmat sys = z_c;
        sys.diagonal().array() -= z_a;
        sys /= scale;
        sys.diagonal().array() += 1.0;
        Eigen::PartialPivLU<cmat> lu(sys);
        const double rc = lu.rcond();
        if (!(rc > 1e-14))
            throw linear_algebra_error("coupling matrix: Z_C + Z_L I is singular", rc > 0.0 ? 1.0 / rc : INFINITY);
        return lu.inverse();
    }

    inline CouplingMatrix coupling_matrix(const CouplingParams &params, const ArrayGeometry &geom, double wavelength)
    {
        CouplingMatrix cm;
        cm.Z_A = antenna_impedance(params, wavelength);
        cm.Z_C = mutual_impedance_matrix(params, geom, wavelength);
        cm.Z_BS = coupling_from_mutual(cm.Z_A, params.load_impedance, cm.Z_C);
        return cm;
    }

    /// Statistics of g = Z_BS h.
    struct EffectiveStats
    {
        cvec gbar;    // Z h_bar
        cmat Rcheck;  // Z R Z^H
        cmat factor;  // Z U Sigma^{1/2}; g = gbar + factor z
        LargeScale large_scale;
    };

    inline EffectiveStats apply_coupling(const cmat &z_bs, const PairChannelStats &stats)
    {
        if (z_bs.cols() != stats.los.size())
            throw shape_error("apply_coupling: dimension mismatch between Z_BS and the channel");
        EffectiveStats e;
        e.gbar = z_bs * stats.los;
        e.factor = z_bs * sampling_factor(stats.nlos);
        e.Rcheck = hermitian_part(e.factor * e.factor.adjoint());
        e.large_scale = stats.large_scale;
        return e;
    }

    /// Same as apply_coupling with Z_BS = I.
    inline EffectiveStats uncoupled(const PairChannelStats &stats)
    {
        EffectiveStats e;
        e.gbar = stats.los;
        e.factor = sampling_factor(stats.nlos);
        e.Rcheck = stats.nlos.R;
        e.large_scale = stats.large_scale;
        return e;
    }
}

#endif
