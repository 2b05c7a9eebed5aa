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

#include <catch_amalgamated.hpp>

#include <cfxl/channel.hpp>

#include "test_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    constexpr double lambda = 0.1;

    cfxl::ArrayGeometry make_array(int nx, int ny, double delta, cfxl::vec3 origin = {0.0, 12.5, 0.0})
    {
        cfxl::ArrayGeometry g;
        g.nx = nx;
        g.ny = ny;
        g.delta_x = delta;
        g.delta_y = delta;
        g.origin = origin;
        return g;
    }
}

TEST_CASE("large-scale fading splits", "[channel]")
{
    CHECK_THAT(cfxl::rician_factor(0.0), WithinRel(std::pow(10.0, 1.3), 1e-15));
    const auto ls = cfxl::large_scale_fading(1.3 / 0.003);
    CHECK_THAT(ls.kappa, WithinRel(1.0, 1e-12));
    CHECK_THAT(ls.beta_los, WithinRel(0.5 * ls.beta, 1e-12));
    CHECK_THAT(ls.beta_nlos, WithinRel(0.5 * ls.beta, 1e-12));

    for (double d : {1.0, 17.0, 250.0, 999.0})
    {
        const auto s = cfxl::large_scale_fading(d);
        CHECK(s.beta_los + s.beta_nlos == s.beta);
        CHECK(s.beta_los > 0.0);
        CHECK(s.beta_nlos > 0.0);
    }
    // Reference law at 3 GHz: -(42.6 + 26 log10(d/1 km) + 20 log10(3000)) dB.
    const double d = 200.0;
    const double db = -(42.6 + 26.0 * std::log10(d / 1000.0) + 20.0 * std::log10(3000.0));
    CHECK_THAT(cfxl::large_scale_fading(d).beta, WithinRel(std::pow(10.0, db / 10.0), 1e-12));
    // Distance floor.
    CHECK(cfxl::large_scale_fading(0.2).beta == cfxl::large_scale_fading(1.0).beta);
}

TEST_CASE("LoS vector follows the spherical-wave law", "[channel]")
{
    cfxl::LargeScale ls;
    ls.beta_los = 4e-9;
    const auto single = make_array(1, 1, lambda / 2);
    const auto h1 = cfxl::los_channel(single, {3.0, 1.5, 40.0}, ls, lambda);
    CHECK(h1.size() == 1);
    CHECK_THAT(h1[0].real(), WithinRel(std::sqrt(4e-9), 1e-15));
    CHECK(h1[0].imag() == 0.0);

    const auto pair = make_array(2, 1, lambda / 2, {0.0, 0.0, 0.0});
    const auto h2 = cfxl::los_channel(pair, {0.0, 0.0, 5.0}, ls, lambda);
    const double dn = std::sqrt(25.0 + 0.0025);
    const cfxl::cplx expect = std::polar(std::sqrt(4e-9) * 5.0 / dn, -(2 * cfxl::pi / lambda) * (dn - 5.0));
    CHECK(std::abs(h2[1] - expect) < 1e-15 * std::abs(expect));

    const auto g = make_array(6, 5, lambda / 4);
    const cfxl::vec3 ue(2.0, 1.5, 3.0);
    const auto h = cfxl::los_channel(g, ue, ls, lambda);
    const auto d = cfxl::pair_distances(g, ue);
    for (int n = 0; n < g.size(); ++n)
        CHECK_THAT(std::abs(h[n]), WithinRel(std::sqrt(ls.beta_los) * d.reference / d.per_antenna[n], 1e-13));
}

TEST_CASE("wavenumber lattice enumeration", "[channel]")
{
    const auto one = cfxl::wavenumber_lattice(1, 1, lambda / 4, lambda / 4, lambda);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == std::make_pair(0, 0));

    const auto five = cfxl::wavenumber_lattice(2, 2, lambda / 2, lambda / 2, lambda);
    REQUIRE(five.size() == 5);
    CHECK(five == std::vector<std::pair<int, int>>{{0, -1}, {-1, 0}, {0, 0}, {1, 0}, {0, 1}});

    // Exhaustive oracle: count integer points inside the ellipse.
    const int nx = 32, ny = 32;
    const double delta = lambda / 4;
    const auto big = cfxl::wavenumber_lattice(nx, ny, delta, delta, lambda);
    const double s = nx * delta / lambda;
    std::size_t count = 0;
    for (int a = -40; a <= 40; ++a)
        for (int b = -40; b <= 40; ++b)
            if ((a / s) * (a / s) + (b / s) * (b / s) <= 1.0 + 1e-12)
                ++count;
    CHECK(big.size() == count);
    const double area = cfxl::pi * s * s;
    CHECK(std::abs(static_cast<double>(big.size()) - area) < 0.1 * area);
}

TEST_CASE("variance profile normalization and symmetry", "[channel]")
{
    const auto lat = cfxl::wavenumber_lattice(8, 6, lambda / 4, lambda / 4, lambda);
    const auto w = cfxl::variance_profile(lat, 8, 6, lambda / 4, lambda / 4, lambda);
    CHECK_THAT(w.sum(), WithinAbs(1.0, 1e-12));
    CHECK(w.minCoeff() >= 0.0);

    std::map<std::pair<int, int>, double> by_point;
    for (std::size_t i = 0; i < lat.size(); ++i)
        by_point[lat[i]] = w[static_cast<Eigen::Index>(i)];
    for (const auto &[p, v] : by_point)
    {
        CHECK_THAT(by_point.at({-p.first, p.second}), WithinRel(v, 1e-12));
        CHECK_THAT(by_point.at({p.first, -p.second}), WithinRel(v, 1e-12));
    }

    const auto single = cfxl::wavenumber_lattice(1, 1, lambda / 4, lambda / 4, lambda);
    CHECK(cfxl::variance_profile(single, 1, 1, lambda / 4, lambda / 4, lambda)[0] == 1.0);
}

TEST_CASE("variance profile matches brute-force cell integration", "[channel][oracle]")
{
    // Midpoint rule on a fine polar grid of the visible disk, binned by cell.
    const int nx = 4, ny = 4;
    const double delta = lambda / 2;
    const auto lat = cfxl::wavenumber_lattice(nx, ny, delta, delta, lambda);
    const auto w = cfxl::variance_profile(lat, nx, ny, delta, delta, lambda);
    const double k0 = 2 * cfxl::pi / lambda;
    const double lr = nx * delta;
    std::map<std::pair<int, int>, double> acc;
    // Substituting k = k0 sin(t) removes the edge singularity: dk / sqrt(k0^2 - k^2) = dt.
    const int nt = 1500, nphi = 1500;
    for (int i = 0; i < nt; ++i)
    {
        const double t = (i + 0.5) * (cfxl::pi / 2) / nt;
        const double rho = k0 * std::sin(t);
        for (int j = 0; j < nphi; ++j)
        {
            const double phi = (j + 0.5) * 2 * cfxl::pi / nphi;
            const double kx = rho * std::cos(phi), ky = rho * std::sin(phi);
            const int lx = static_cast<int>(std::lround(kx * lr / (2 * cfxl::pi)));
            const int ly = static_cast<int>(std::lround(ky * lr / (2 * cfxl::pi)));
            acc[{lx, ly}] += rho; // Jacobian rho dphi dt
        }
    }
    double total = 0.0;
    for (const auto &p : lat)
        total += acc[p];
    for (std::size_t i = 0; i < lat.size(); ++i)
        CHECK_THAT(w[static_cast<Eigen::Index>(i)], WithinAbs(acc[lat[i]] / total, 2e-3));
}

TEST_CASE("NLoS factor invariants", "[channel][property]")
{
    auto rng = cfxl::make_stream(21, 0, 0, cfxl::stream_purpose::test);
    std::uniform_real_distribution<double> u(-200.0, 200.0);
    for (int t = 0; t < 10; ++t)
    {
        const auto g = make_array(4 + t % 3, 4, lambda / (t % 2 ? 4 : 8), {u(rng), 12.5, u(rng)});
        const cfxl::vec3 ue(u(rng), 1.5, u(rng));
        const auto stats = cfxl::pair_channel_stats(g, ue, lambda);
        const auto &f = stats.nlos;
        for (Eigen::Index c = 0; c < f.U.cols(); ++c)
            CHECK_THAT(f.U.col(c).norm(), WithinAbs(1.0, 1e-13));
        CHECK(f.sigma.minCoeff() >= 0.0);
        CHECK_THAT(f.sigma.sum(), WithinRel(g.size() * stats.large_scale.beta_nlos, 1e-12));
        CHECK((f.R - f.R.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        const double tr = f.R.trace().real();
        CHECK_THAT(tr / g.size(), WithinRel(stats.large_scale.beta_nlos, 1e-9));
        Eigen::SelfAdjointEigenSolver<cfxl::cmat> es(f.R);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10 * tr);
        CHECK(std::abs(stats.los[0].imag()) == 0.0);
        CHECK(stats.los[0].real() > 0.0);
    }
}

TEST_CASE("single lattice point gives a rank-one covariance", "[channel]")
{
    const auto g = make_array(1, 1, lambda / 4);
    cfxl::LargeScale ls;
    ls.beta_nlos = 3e-10;
    const auto f = cfxl::nlos_statistics(g, {1.0, 1.5, 9.0}, ls, lambda);
    REQUIRE(f.rank() == 1);
    CHECK_THAT(f.R(0, 0).real(), WithinRel(3e-10, 1e-14));
}

TEST_CASE("sampled channels reproduce mean and covariance", "[channel][statistics]")
{
    const auto g = make_array(2, 2, lambda / 4);
    const cfxl::vec3 ue(15.0, 1.5, 30.0);
    const auto stats = cfxl::pair_channel_stats(g, ue, lambda);
    const int draws = 100000;
    auto rng = cfxl::make_stream(8, 0, 0, cfxl::stream_purpose::test);
    const int n = g.size();
    cfxl::cvec mean = cfxl::cvec::Zero(n);
    cfxl::cmat cov = cfxl::cmat::Zero(n, n);
    double energy = 0.0;
    for (int i = 0; i < draws; ++i)
    {
        const cfxl::cvec h = cfxl::sample_pair_channel(stats, rng);
        const cfxl::cvec e = h - stats.los;
        mean += h;
        cov += e * e.adjoint();
        energy += e.squaredNorm();
    }
    mean /= draws;
    cov /= draws;
    energy /= draws;
    const auto &R = stats.nlos.R;
    for (int a = 0; a < n; ++a)
    {
        const double se_mean = std::sqrt(R(a, a).real() / draws);
        CHECK(std::abs(mean[a] - stats.los[a]) < 3.0 * se_mean);
        for (int b = 0; b < n; ++b)
        {
            const double se = std::sqrt(R(a, a).real() * R(b, b).real() / draws);
            CHECK(std::abs(cov(a, b) - R(a, b)) < 3.0 * se);
        }
    }
    // Var ||e||^2 = tr(R^2) for circular Gaussian e.
    const double se_energy = std::sqrt((R * R).trace().real() / draws);
    CHECK(std::abs(energy - R.trace().real()) < 3.0 * se_energy);

    auto zero = stats;
    zero.nlos.sigma.setZero();
    CHECK(cfxl::sample_pair_channel(zero, rng) == zero.los);
}
