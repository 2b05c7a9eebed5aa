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

#ifndef CFXL_CHANNEL_HPP
#define CFXL_CHANNEL_HPP

#include "core.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace cfxl
{
    // Large-scale propagation law: beta_dB = -(a + b log10(d / 1 m)),
    // Rician factor kappa = 10^(c0 - c1 d).
    struct PropagationParams
    {
        double pathloss_a = 42.6 + 20.0 * std::log10(3000.0) - 78.0;
        double pathloss_b = 26.0;
        double rice_c0 = 1.3;
        double rice_c1 = 0.003;
        double distance_floor = 1.0; // m
    };

    struct LargeScale
    {
        double beta = 0.0;
        double kappa = 0.0;
        double beta_los = 0.0;
        double beta_nlos = 0.0;
    };

    struct NlosFactor
    {
        std::vector<std::pair<int, int>> lattice; // (lx, ly)
        cmat U;                                   // N x n_r, unit-norm columns
        rvec sigma;                               // diagonal of Sigma, sums to N beta_nlos
        cmat R;                                   // U Sigma U^H

        Eigen::Index rank() const { return U.cols(); }
    };

    struct PairChannelStats
    {
        cvec los;
        NlosFactor nlos;
        LargeScale large_scale;
    };

    inline double rician_factor(double distance, const PropagationParams &prop = {})
    {
        return std::pow(10.0, prop.rice_c0 - prop.rice_c1 * distance);
    }

    inline double pathloss_gain(double distance, const PropagationParams &prop = {})
    {
        const double d = std::max(distance, prop.distance_floor);
        return db_to_linear(-(prop.pathloss_a + prop.pathloss_b * std::log10(d)));
    }

    inline LargeScale large_scale_fading(double distance, const PropagationParams &prop = {})
    {
        if (!std::isfinite(distance) || distance < 0.0)
            throw domain_error("large_scale_fading: distance must be finite and nonnegative");
        const double d = std::max(distance, prop.distance_floor);
        LargeScale ls;
        ls.beta = pathloss_gain(d, prop);
        ls.kappa = rician_factor(d, prop);
        ls.beta_los = ls.kappa / (ls.kappa + 1.0) * ls.beta;
        ls.beta_nlos = ls.beta - ls.beta_los;
        return ls;
    }

    /// Near-field LoS vector: sqrt(beta_los) (d/d_n) exp(-j 2pi/lambda (d_n - d)).
    inline cvec los_channel(const ArrayGeometry &geom, const vec3 &ue, const LargeScale &ls, double wavelength)
    {
        if (!(wavelength > 0.0))
            throw domain_error("los_channel: wavelength must be positive");
        const PairDistances dist = pair_distances(geom, ue);
        const double k0 = wavenumber(wavelength);
        const double amp = std::sqrt(ls.beta_los);
        cvec h(geom.size());
        for (int n = 0; n < geom.size(); ++n)
        {
            const double dn = dist.per_antenna[n];
            h[n] = std::polar(amp * dist.reference / dn, -k0 * (dn - dist.reference));
        }
        return h;
    }

    /// Integer lattice points inside the wavenumber ellipse, ly outer, lx inner.
    inline std::vector<std::pair<int, int>> wavenumber_lattice(int nx, int ny, double delta_x, double delta_y,
                                                               double wavelength)
    {
        if (!(delta_x > 0.0) || !(delta_y > 0.0) || !(wavelength > 0.0))
            throw domain_error("wavenumber_lattice: spacings and wavelength must be positive");
        const double sx = nx * delta_x / wavelength; // semi-axis in lx
        const double sy = ny * delta_y / wavelength;
        const int mx = static_cast<int>(std::floor(sx));
        const int my = static_cast<int>(std::floor(sy));
        std::vector<std::pair<int, int>> lattice;
        for (int ly = -my; ly <= my; ++ly)
            for (int lx = -mx; lx <= mx; ++lx)
            {
                const double ex = lx / sx;
                const double ey = ly / sy;
                if (ex * ex + ey * ey <= 1.0 + 1e-12)
                    lattice.emplace_back(lx, ly);
            }
        return lattice;
    }

    namespace detail
    {
        // Integral over ky in [lo, hi] of (a^2 - ky^2)^{-1/2}, restricted to |ky| < a.
        inline double ky_cell_integral(double a, double lo, double hi)
        {
            if (!(a > 0.0))
                return 0.0;
            const double u = std::clamp(hi / a, -1.0, 1.0);
            const double l = std::clamp(lo / a, -1.0, 1.0);
            return std::max(0.0, std::asin(u) - std::asin(l));
        }
    }

    inline constexpr int variance_profile_nodes = 32;

    /// Normalized per-lattice-point variances for isotropic scattering.
    ///
    /// Each cell weight is the integral of (k^2 - kx^2 - ky^2)^{-1/2} over the
    /// cell intersected with the visible disk. The ky integral is closed-form;
    /// the kx integral uses Gauss-Legendre split at the kinks of the integrand.
    inline rvec variance_profile(const std::vector<std::pair<int, int>> &lattice, int nx, int ny, double delta_x,
                                 double delta_y, double wavelength)
    {
        if (lattice.empty())
            throw domain_error("variance_profile: empty lattice");
        const double k0 = wavenumber(wavelength);
        const double lrx = nx * delta_x;
        const double lry = ny * delta_y;
        const double hx = pi / lrx;
        const double hy = pi / lry;
        static const GaussLegendreRule rule = gauss_legendre(variance_profile_nodes);

        rvec w(static_cast<Eigen::Index>(lattice.size()));
        for (std::size_t i = 0; i < lattice.size(); ++i)
        {
            const double kx_c = 2.0 * pi * lattice[i].first / lrx;
            const double ky_c = 2.0 * pi * lattice[i].second / lry;
            const double ky_lo = ky_c - hy;
            const double ky_hi = ky_c + hy;
            const double a = std::max(kx_c - hx, -k0);
            const double b = std::min(kx_c + hx, k0);
            if (!(b > a))
            {
                w[i] = 0.0;
                continue;
            }
            std::vector<double> cuts{a, b};
            for (double edge : {ky_lo, ky_hi})
                if (std::abs(edge) < k0)
                {
                    const double c = std::sqrt(k0 * k0 - edge * edge);
                    for (double s : {-c, c})
                        if (s > a && s < b)
                            cuts.push_back(s);
                }
            std::sort(cuts.begin(), cuts.end());
            auto g = [&](double kx)
            {
                const double rad = k0 * k0 - kx * kx;
                return detail::ky_cell_integral(rad > 0.0 ? std::sqrt(rad) : 0.0, ky_lo, ky_hi);
            };
            double acc = 0.0;
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c)
                if (cuts[c + 1] > cuts[c])
                    acc += integrate(rule, g, cuts[c], cuts[c + 1]);
            w[i] = acc;
        }
        const double total = w.sum();
        if (!(total > 0.0))
            throw domain_error("variance_profile: all cells have zero weight");
        return w / total;
    }

    /// Plane-wave factor of the NLoS covariance: R = U diag(sigma) U^H.
    inline NlosFactor nlos_statistics(const ArrayGeometry &geom, const vec3 &ue, const LargeScale &ls,
                                      double wavelength, const rvec *profile = nullptr)
    {
        geom.validate();
        NlosFactor f;
        f.lattice = wavenumber_lattice(geom.nx, geom.ny, geom.delta_x, geom.delta_y, wavelength);
        const rvec prof = profile ? *profile
                                  : variance_profile(f.lattice, geom.nx, geom.ny, geom.delta_x, geom.delta_y,
                                                     wavelength);
        if (prof.size() != static_cast<Eigen::Index>(f.lattice.size()))
            throw shape_error("nlos_statistics: variance profile does not match the lattice");

        const int n_ant = geom.size();
        const auto n_r = static_cast<Eigen::Index>(f.lattice.size());
        const double k0 = wavenumber(wavelength);
        const double lrx = geom.aperture_x();
        const double lry = geom.aperture_y();
        const Eigen::Matrix3Xd pos = antenna_positions(geom);
        const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n_ant));

        f.U.resize(n_ant, n_r);
        for (Eigen::Index c = 0; c < n_r; ++c)
        {
            const double kx = 2.0 * pi * f.lattice[c].first / lrx;
            const double ky = 2.0 * pi * f.lattice[c].second / lry;
            const double gamma = std::sqrt(std::max(0.0, k0 * k0 - kx * kx - ky * ky));
            for (int n = 0; n < n_ant; ++n)
            {
                const double phase = kx * pos(0, n) + ky * pos(1, n) + gamma * pos(2, n) - k0 * ue.z();
                f.U(n, c) = std::polar(inv_sqrt_n, phase);
            }
        }
        f.sigma = (static_cast<double>(n_ant) * ls.beta_nlos) * prof;
        f.R = hermitian_part(f.U * f.sigma.asDiagonal() * f.U.adjoint());
        return f;
    }

    inline PairChannelStats pair_channel_stats(const ArrayGeometry &geom, const vec3 &ue, double wavelength,
                                               const PropagationParams &prop = {}, const rvec *profile = nullptr)
    {
        PairChannelStats s;
        s.large_scale = large_scale_fading(pair_distances(geom, ue).reference, prop);
        s.los = los_channel(geom, ue, s.large_scale, wavelength);
        s.nlos = nlos_statistics(geom, ue, s.large_scale, wavelength, profile);
        return s;
    }

    /// U Sigma^{1/2}, the factor that maps iid CN(0,1) draws to NLoS samples.
    inline cmat sampling_factor(const NlosFactor &f)
    {
        return f.U * f.sigma.cwiseSqrt().asDiagonal();
    }

    inline cvec sample_pair_channel(const PairChannelStats &stats, rng_engine &rng)
    {
        const cvec z = complex_normal_vector(rng, stats.nlos.rank());
        return stats.los + sampling_factor(stats.nlos) * z;
    }

    /// Raw dump: row-major, interleaved real/imag, little-endian doubles.
    inline void write_matrix_binary(const std::string &path, const cmat &m)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw error("write_matrix_binary: cannot open " + path);
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
            {
                const double v[2] = {m(i, j).real(), m(i, j).imag()};
                out.write(reinterpret_cast<const char *>(v), sizeof v);
            }
    }
}

#endif
