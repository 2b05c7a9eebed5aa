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

#ifndef CFXL_ORACLE_HPP
#define CFXL_ORACLE_HPP

// Dense brute-force references used to validate the fast paths.

#include "core.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace cfxl::oracle
{
    inline constexpr Eigen::Index max_dense_dimension = 256;

    /// Full-pivot LU solve; throws if A is numerically singular.
    inline cmat direct_solve(const cmat &A, const cmat &b)
    {
        if (A.rows() != A.cols() || A.rows() != b.rows())
            throw shape_error("direct_solve: dimension mismatch");
        const Eigen::FullPivLU<cmat> lu(A);
        if (!lu.isInvertible())
            throw linear_algebra_error("direct_solve: matrix is singular", std::numeric_limits<double>::infinity());
        return lu.solve(b);
    }

    inline cvec direct_solve(const cmat &A, const cvec &b) { return direct_solve(A, cmat(b)).col(0); }

    struct LemmaCheck
    {
        bool passed = false;
        double max_deviation = 0.0;
    };

    /// Compares (A + B C B^H)^{-1} B with A^{-1} B (B^H A^{-1} B + C^{-1})^{-1} C^{-1}.
    inline LemmaCheck matrix_inversion_lemma_check(const cmat &A, const cmat &B, const cmat &C, double tolerance)
    {
        if (A.rows() != A.cols() || B.rows() != A.rows() || C.rows() != C.cols() || C.rows() != B.cols())
            throw shape_error("matrix_inversion_lemma_check: inconsistent shapes");
        const cmat lhs = direct_solve(cmat(A + B * C * B.adjoint()), B);
        const cmat ainv_b = direct_solve(A, B);
        const cmat cinv = direct_solve(C, cmat(cmat::Identity(C.rows(), C.cols())));
        const cmat inner = B.adjoint() * ainv_b + cinv;
        const cmat rhs = ainv_b * direct_solve(inner, cinv);
        LemmaCheck out;
        out.max_deviation = lhs.size() ? (lhs - rhs).cwiseAbs().maxCoeff() : 0.0;
        out.passed = out.max_deviation <= tolerance;
        return out;
    }

    struct ConcentrationPoint
    {
        int n = 0;
        double median_quadratic = 0.0; // median |x^H A x - tr(A)/n|
        double median_bilinear = 0.0;  // median |x^H A y|
    };

    struct ConcentrationCurve
    {
        std::vector<ConcentrationPoint> points;
        double slope_quadratic = 0.0; // least-squares log-log slope
        double slope_bilinear = 0.0;
    };

    namespace detail
    {
        inline double median(std::vector<double> v)
        {
            if (v.empty())
                return 0.0;
            const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
            std::nth_element(v.begin(), mid, v.end());
            if (v.size() % 2 == 1)
                return *mid;
            const double hi = *mid;
            return 0.5 * (hi + *std::max_element(v.begin(), mid));
        }

        inline double loglog_slope(const std::vector<double> &x, const std::vector<double> &y)
        {
            double mx = 0, my = 0;
            const double n = static_cast<double>(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
            {
                mx += std::log(x[i]) / n;
                my += std::log(y[i]) / n;
            }
            double sxy = 0, sxx = 0;
            for (std::size_t i = 0; i < x.size(); ++i)
            {
                const double dx = std::log(x[i]) - mx;
                sxy += dx * (std::log(y[i]) - my);
                sxx += dx * dx;
            }
            return sxx > 0.0 ? sxy / sxx : 0.0;
        }
    }

    /// Matrix family for the concentration check; `make_matrix(n, rng)` must have bounded spectral norm.
    template <typename MatrixFactory>
    ConcentrationCurve trace_concentration_check(const std::vector<int> &n_list, int trials, rng_engine &rng,
                                                 MatrixFactory make_matrix)
    {
        if (trials < 1)
            throw domain_error("trace_concentration_check: trials must be positive");
        ConcentrationCurve curve;
        std::vector<double> ns, q, b;
        for (int n : n_list)
        {
            if (n < 2)
                throw domain_error("trace_concentration_check: n must be at least 2");
            const cmat A = make_matrix(n, rng);
            const cplx tr = A.trace() / static_cast<double>(n);
            std::vector<double> dq, db;
            dq.reserve(trials);
            db.reserve(trials);
            for (int t = 0; t < trials; ++t)
            {
                const cvec x = complex_normal_vector(rng, n, 1.0 / n);
                const cvec y = complex_normal_vector(rng, n, 1.0 / n);
                dq.push_back(std::abs(x.dot(A * x) - tr));
                db.push_back(std::abs(x.dot(A * y)));
            }
            ConcentrationPoint p{n, detail::median(dq), detail::median(db)};
            curve.points.push_back(p);
            if (p.median_quadratic > 0.0 && p.median_bilinear > 0.0)
            {
                ns.push_back(n);
                q.push_back(p.median_quadratic);
                b.push_back(p.median_bilinear);
            }
        }
        if (ns.size() >= 2)
        {
            curve.slope_quadratic = detail::loglog_slope(ns, q);
            curve.slope_bilinear = detail::loglog_slope(ns, b);
        }
        return curve;
    }

    /// Default family: Hermitian matrix with eigenvalues uniform in [0.5, 1.5] and random eigenvectors.
    inline cmat bounded_hermitian(int n, rng_engine &rng)
    {
        const cmat z = complex_normal_matrix(rng, n, n, 1.0);
        const Eigen::HouseholderQR<cmat> qr(z);
        const cmat u = qr.householderQ() * cmat::Identity(n, n);
        std::uniform_real_distribution<double> ev(0.5, 1.5);
        rvec d(n);
        for (int i = 0; i < n; ++i)
            d[i] = ev(rng);
        return hermitian_part(u * d.cast<cplx>().asDiagonal() * u.adjoint());
    }

    inline ConcentrationCurve trace_concentration_check(const std::vector<int> &n_list, int trials, rng_engine &rng)
    {
        return trace_concentration_check(n_list, trials, rng, bounded_hermitian);
    }

    /// Random Hermitian positive definite test matrix with condition number about `cond`.
    inline cmat random_hpd(int n, double cond, rng_engine &rng)
    {
        const cmat z = complex_normal_matrix(rng, n, n, 1.0);
        const Eigen::HouseholderQR<cmat> qr(z);
        const cmat u = qr.householderQ() * cmat::Identity(n, n);
        rvec d(n);
        for (int i = 0; i < n; ++i)
            d[i] = n > 1 ? std::pow(cond, -static_cast<double>(i) / (n - 1)) : 1.0;
        return hermitian_part(u * d.cast<cplx>().asDiagonal() * u.adjoint());
    }
}

#endif
