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

#ifndef CFXL_SSOR_HPP
#define CFXL_SSOR_HPP

#include "core.hpp"

#include <cmath>
#include <string>

namespace cfxl
{
    enum class SsorInit
    {
        zero,
        statistics,
    };

    struct SsorConfig
    {
        int n_iter = 5;
        double omega = 1.0;
        SsorInit init = SsorInit::zero;

        void validate() const
        {
            if (n_iter < 0)
                throw domain_error("SsorConfig: n_iter must be nonnegative");
            if (!(omega > 0.0 && omega < 2.0))
                throw domain_error("SsorConfig: omega must lie in (0, 2)");
        }
    };

    /// Largest K/N for which the relaxation rule below is defined: (sqrt(2) - 1)^2.
    inline double ssor_load_limit() { return (std::sqrt(2.0) - 1.0) * (std::sqrt(2.0) - 1.0); }

    /// omega = 2 / (1 + sqrt(2 (1 - mu))), mu = (1 + sqrt(K/N))^2 - 1.
    ///
    /// Outside the regime K/N < (sqrt(2) - 1)^2 this throws out_of_regime, or
    /// returns 1 (symmetric Gauss-Seidel) when `fallback_to_one` is set.
    inline double ssor_relaxation(int K, int N, bool fallback_to_one = false)
    {
        if (K < 1 || N < 1)
            throw domain_error("ssor_relaxation: K and N must be positive");
        const double load = static_cast<double>(K) / N;
        const double mu = std::pow(1.0 + std::sqrt(load), 2) - 1.0;
        if (!(2.0 * (1.0 - mu) > 0.0) || load >= ssor_load_limit())
        {
            if (fallback_to_one)
                return 1.0;
            throw out_of_regime("ssor_relaxation: K/N = " + std::to_string(load) + " is not below " +
                                std::to_string(ssor_load_limit()) + " (use the omega=1 fallback or a fixed omega)");
        }
        return 2.0 / (1.0 + std::sqrt(2.0 * (1.0 - mu)));
    }

    /// In-place SSOR sweeps for A X = B with Hermitian A (all right-hand sides at once).
    ///
    /// Each sweep is a forward pass over rows 0..N-1 followed by a backward pass
    /// over N-1..0, both updating x_i = (1 - omega) x_i + omega / a_ii (b_i - sum_{j != i} a_ij x_j).
    /// Row i of A is read as the conjugate of column i, so A must be Hermitian.
    template <typename DerivedA, typename DerivedB, typename DerivedX>
    void ssor_sweeps(const Eigen::MatrixBase<DerivedA> &A, const Eigen::MatrixBase<DerivedB> &B,
                     Eigen::MatrixBase<DerivedX> &X, double omega, int n_iter)
    {
        const Eigen::Index n = A.rows();
        if (A.cols() != n || B.rows() != n || X.rows() != n || X.cols() != B.cols())
            throw shape_error("ssor_solve: dimension mismatch");
        if (!(omega > 0.0 && omega < 2.0))
            throw domain_error("ssor_solve: omega must lie in (0, 2)");
        if (n_iter < 0)
            throw domain_error("ssor_solve: n_iter must be nonnegative");
        Eigen::VectorXd inv_diag(n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double d = std::real(A(i, i));
            if (!(d > 0.0))
                throw linear_algebra_error("ssor_solve: diagonal entry " + std::to_string(i) + " is not positive");
            inv_diag[i] = 1.0 / d;
        }

        using Scalar = typename DerivedX::Scalar;
        Eigen::Matrix<Scalar, 1, Eigen::Dynamic> row(X.cols());
        auto relax = [&](Eigen::Index i)
        {
            // sum_{j != i} a_ij x_j, with a_ij = conj(a_ji).
            row.noalias() = A.col(i).adjoint() * X;
            row -= A(i, i) * X.row(i);
            X.row(i) = (1.0 - omega) * X.row(i) + (omega * inv_diag[i]) * (B.row(i) - row);
        };
        for (int it = 0; it < n_iter; ++it)
        {
            for (Eigen::Index i = 0; i < n; ++i)
                relax(i);
            for (Eigen::Index i = n - 1; i >= 0; --i)
                relax(i);
        }
    }

    template <typename DerivedA, typename DerivedB>
    cmat ssor_solve(const Eigen::MatrixBase<DerivedA> &A, const Eigen::MatrixBase<DerivedB> &B, double omega,
                    int n_iter, const cmat &x0)
    {
        cmat X = x0;
        ssor_sweeps(A, B, X, omega, n_iter);
        return X;
    }

    template <typename DerivedA, typename DerivedB>
    cmat ssor_solve(const Eigen::MatrixBase<DerivedA> &A, const Eigen::MatrixBase<DerivedB> &B, double omega,
                    int n_iter)
    {
        return ssor_solve(A, B, omega, n_iter, cmat::Zero(B.rows(), B.cols()));
    }
}

#endif
