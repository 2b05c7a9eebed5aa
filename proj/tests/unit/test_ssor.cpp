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

#include <cfxl/oracle.hpp>
#include <cfxl/ssor.hpp>

#include <cmath>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    // Diagonally weighted HPD matrix: random Gram plus a dominant diagonal.
    cfxl::cmat dominated_hpd(int n, cfxl::rng_engine &rng)
    {
        const cfxl::cmat z = cfxl::complex_normal_matrix(rng, n, n);
        cfxl::cmat a = z * z.adjoint() / n;
        a.diagonal().array() += 1.0;
        return cfxl::hermitian_part(a);
    }

    // Textbook SSOR written from the splitting A = D + L + L^H with explicit triangular solves.
    cfxl::cvec reference_sweep(const cfxl::cmat &a, const cfxl::cvec &b, const cfxl::cvec &x, double w)
    {
        const cfxl::cmat d = a.diagonal().asDiagonal();
        const cfxl::cmat l = a.triangularView<Eigen::StrictlyLower>();
        const cfxl::cmat u = a.triangularView<Eigen::StrictlyUpper>();
        const cfxl::cmat fwd = d + w * l;
        const cfxl::cvec half = fwd.triangularView<Eigen::Lower>().solve(w * b + ((1.0 - w) * d - w * u) * x);
        const cfxl::cmat bwd = d + w * u;
        return bwd.triangularView<Eigen::Upper>().solve(w * b + ((1.0 - w) * d - w * l) * half);
    }
}

TEST_CASE("relaxation parameter", "[ssor]")
{
    CHECK_THAT(cfxl::ssor_relaxation(1, 1000000), WithinAbs(2.0 / (1.0 + std::sqrt(2.0)), 2e-3));
    const double mu = std::pow(1.0 + std::sqrt(10.0 / 64.0), 2) - 1.0;
    CHECK_THAT(mu, WithinAbs(0.94682, 1e-5));
    CHECK_THAT(cfxl::ssor_relaxation(10, 64), WithinAbs(2.0 / (1.0 + std::sqrt(2.0 * (1.0 - mu))), 1e-14));
    CHECK_THAT(cfxl::ssor_relaxation(10, 64), WithinAbs(1.5084, 5e-4));
    CHECK_THROWS_AS(cfxl::ssor_relaxation(10, 36), cfxl::out_of_regime);
    CHECK(cfxl::ssor_relaxation(10, 36, true) == 1.0);
    CHECK_THAT(cfxl::ssor_load_limit(), WithinAbs(0.171573, 1e-6));
    CHECK_THROWS_AS(cfxl::ssor_relaxation(0, 10), cfxl::domain_error);
}

TEST_CASE("one sweep on the identity", "[ssor]")
{
    auto rng = cfxl::make_stream(3, 0, 0, cfxl::stream_purpose::test);
    const cfxl::cmat b = cfxl::complex_normal_matrix(rng, 7, 3);
    const cfxl::cmat eye = cfxl::cmat::Identity(7, 7);
    for (double w : {0.3, 0.8284, 1.0, 1.5084, 1.9})
    {
        const cfxl::cmat x = cfxl::ssor_solve(eye, b, w, 1);
        CHECK((x - w * (2.0 - w) * b).cwiseAbs().maxCoeff() <= 1e-15 * b.cwiseAbs().maxCoeff());
    }
    CHECK((cfxl::ssor_solve(eye, b, 1.0, 1) - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK(cfxl::ssor_solve(eye, b, 1.2, 0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sweep matches the triangular-splitting form", "[ssor][oracle]")
{
    auto rng = cfxl::make_stream(4, 0, 0, cfxl::stream_purpose::test);
    for (int t = 0; t < 20; ++t)
    {
        const int n = 3 + t;
        const cfxl::cmat a = dominated_hpd(n, rng);
        const cfxl::cvec b = cfxl::complex_normal_vector(rng, n);
        const cfxl::cvec x0 = cfxl::complex_normal_vector(rng, n);
        const double w = 0.4 + 0.07 * t;
        const cfxl::cmat got = cfxl::ssor_solve(a, cfxl::cmat(b), w, 1, cfxl::cmat(x0));
        const cfxl::cvec ref = reference_sweep(a, b, x0, w);
        CHECK((got.col(0) - ref).norm() <= 1e-12 * ref.norm());
    }
}

TEST_CASE("exact solution is a fixed point", "[ssor]")
{
    auto rng = cfxl::make_stream(5, 0, 0, cfxl::stream_purpose::test);
    for (double w : {0.5, 1.0, 1.7})
    {
        const cfxl::cmat a = dominated_hpd(12, rng);
        const cfxl::cmat b = cfxl::complex_normal_matrix(rng, 12, 2);
        const cfxl::cmat xs = cfxl::oracle::direct_solve(a, b);
        const cfxl::cmat x1 = cfxl::ssor_solve(a, b, w, 1, xs);
        CHECK((x1 - xs).norm() <= 1e-13 * xs.norm());
    }
}

TEST_CASE("convergence to the direct solution", "[ssor][oracle]")
{
    auto rng = cfxl::make_stream(6, 0, 0, cfxl::stream_purpose::test);
    for (int t = 0; t < 25; ++t)
    {
        const int n = 8 + 2 * t;
        const cfxl::cmat a = dominated_hpd(n, rng);
        const cfxl::cmat b = cfxl::complex_normal_matrix(rng, n, 3);
        const cfxl::cmat x = cfxl::ssor_solve(a, b, 1.0 + 0.02 * t, 500);
        CHECK((a * x - b).norm() / b.norm() < 1e-8);
    }
    // Non-dominant spectrum with condition number 20.
    const cfxl::cmat hard = cfxl::oracle::random_hpd(16, 20.0, rng);
    const cfxl::cvec b = cfxl::complex_normal_vector(rng, 16);
    const cfxl::cmat x = cfxl::ssor_solve(hard, cfxl::cmat(b), 1.0, 500);
    const cfxl::cmat xs = cfxl::oracle::direct_solve(hard, cfxl::cmat(b));
    CHECK((x - xs).norm() < 1e-8 * xs.norm());
}

TEST_CASE("energy-norm error does not increase", "[ssor]")
{
    auto rng = cfxl::make_stream(7, 0, 0, cfxl::stream_purpose::test);
    int violations = 0, steps = 0;
    for (int t = 0; t < 40; ++t)
    {
        const int n = 6 + t % 20;
        const cfxl::cmat a = t % 2 ? dominated_hpd(n, rng) : cfxl::oracle::random_hpd(n, 50.0, rng);
        const cfxl::cmat b = cfxl::complex_normal_matrix(rng, n, 1);
        const cfxl::cmat xs = cfxl::oracle::direct_solve(a, b);
        const double w = 0.2 + 1.6 * (t / 40.0);
        cfxl::cmat x = cfxl::cmat::Zero(n, 1);
        auto energy = [&](const cfxl::cmat &v) { return std::sqrt(((v - xs).adjoint() * a * (v - xs))(0, 0).real()); };
        double prev = energy(x);
        for (int s = 0; s < 15; ++s)
        {
            cfxl::ssor_sweeps(a, b, x, w, 1);
            const double cur = energy(x);
            ++steps;
            if (cur > prev * (1.0 + 1e-12) + 1e-14)
                ++violations;
            prev = cur;
        }
    }
    CHECK(steps == 600);
    CHECK(violations == 0);
}

TEST_CASE("input validation", "[ssor]")
{
    cfxl::cmat a = cfxl::cmat::Identity(3, 3);
    const cfxl::cmat b = cfxl::cmat::Ones(3, 1);
    CHECK_THROWS_AS(cfxl::ssor_solve(a, b, 2.0, 1), cfxl::domain_error);
    CHECK_THROWS_AS(cfxl::ssor_solve(a, b, 0.0, 1), cfxl::domain_error);
    CHECK_THROWS_AS(cfxl::ssor_solve(a, b, 1.0, -1), cfxl::domain_error);
    CHECK_THROWS_AS(cfxl::ssor_solve(a, cfxl::cmat::Ones(4, 1), 1.0, 1), cfxl::shape_error);
    a(1, 1) = 0.0;
    CHECK_THROWS_AS(cfxl::ssor_solve(a, b, 1.0, 1), cfxl::linear_algebra_error);

    cfxl::SsorConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.omega = 2.5;
    CHECK_THROWS_AS(cfg.validate(), cfxl::domain_error);
}
