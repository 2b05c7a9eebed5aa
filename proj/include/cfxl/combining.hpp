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

#ifndef CFXL_COMBINING_HPP
#define CFXL_COMBINING_HPP

#include "core.hpp"
#include "estimation.hpp"
#include "network.hpp"
#include "ssor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace cfxl
{
    enum class Scheme
    {
        cmmse,
        gsli_mmse,
        lmmse,
        si_lmmse,
        si_cmmse,
        lmr,
        lrzf,
        ins_ssor,
        sta_ssor,
        ins_si_ssor,
    };

    inline constexpr std::array<Scheme, 10> all_schemes = {
        Scheme::cmmse, Scheme::gsli_mmse, Scheme::lmmse,    Scheme::si_lmmse, Scheme::si_cmmse,
        Scheme::lmr,   Scheme::lrzf,      Scheme::ins_ssor, Scheme::sta_ssor, Scheme::ins_si_ssor,
    };

    inline std::string to_string(Scheme s)
    {
        switch (s)
        {
        case Scheme::cmmse:
            return "CMMSE";
        case Scheme::gsli_mmse:
            return "GSLI-MMSE";
        case Scheme::lmmse:
            return "LMMSE";
        case Scheme::si_lmmse:
            return "SI-LMMSE";
        case Scheme::si_cmmse:
            return "SI-CMMSE";
        case Scheme::lmr:
            return "LMR";
        case Scheme::lrzf:
            return "LRZF";
        case Scheme::ins_ssor:
            return "Ins-SSOR";
        case Scheme::sta_ssor:
            return "Sta-SSOR";
        case Scheme::ins_si_ssor:
            return "Ins-SI-SSOR";
        }
        return "unknown";
    }

    inline Scheme scheme_from_string(const std::string &name)
    {
        std::string key;
        for (char c : name)
            if (c != '-' && c != '_' && c != ' ')
                key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        for (Scheme s : all_schemes)
        {
            std::string ref;
            for (char c : to_string(s))
                if (c != '-')
                    ref.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            if (ref == key)
                return s;
        }
        if (key == "gsli")
            return Scheme::gsli_mmse;
        throw config_error("unknown combining scheme '" + name + "'");
    }

    /// Centralized schemes produce one MN-vector per UE; the rest are per-BS.
    inline bool is_centralized(Scheme s) { return s == Scheme::cmmse || s == Scheme::si_cmmse; }

    /// Combining vectors of one realization. V[m] is N x K; for centralized
    /// schemes the stacked columns of V[0..M-1] form v_k.
    struct CombinerOutput
    {
        Scheme scheme = Scheme::lmr;
        std::vector<cmat> V;

        cvec stacked(int k) const
        {
            std::vector<cvec> parts;
            parts.reserve(V.size());
            for (const auto &b : V)
                parts.push_back(b.col(k));
            return stack(parts);
        }
    };

    /// Per-realization estimates gathered as Ghat_m (N x K), one per BS.
    inline std::vector<cmat> gather_estimates(const std::vector<cvec> &ghat, int M, int K, int N)
    {
        if (ghat.size() != static_cast<std::size_t>(M * K))
            throw shape_error("gather_estimates: expected M*K estimates");
        std::vector<cmat> G(M, cmat(N, K));
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                G[m].col(k) = ghat[static_cast<std::size_t>(m * K + k)];
        return G;
    }

    inline cmat stack_rows(const std::vector<cmat> &blocks)
    {
        Eigen::Index rows = 0;
        for (const auto &b : blocks)
            rows += b.rows();
        cmat out(rows, blocks.front().cols());
        Eigen::Index off = 0;
        for (const auto &b : blocks)
        {
            out.middleRows(off, b.rows()) = b;
            off += b.rows();
        }
        return out;
    }

    inline std::vector<cmat> split_rows(const cmat &m, int M, int N)
    {
        std::vector<cmat> out;
        out.reserve(M);
        for (int i = 0; i < M; ++i)
            out.push_back(m.middleRows(static_cast<Eigen::Index>(i) * N, N));
        return out;
    }

    namespace detail
    {
        inline Eigen::LLT<cmat> checked_llt(const cmat &a, const char *what)
        {
            Eigen::LLT<cmat> llt(a);
            if (llt.info() != Eigen::Success)
                throw linear_algebra_error(std::string(what) + ": system matrix is not positive definite");
            return llt;
        }

        inline void require_finite(const CombinerOutput &out)
        {
            for (const auto &b : out.V)
                if (!b.allFinite())
                    throw linear_algebra_error("combiner " + to_string(out.scheme) + " produced non-finite values");
        }

        inline cmat power_diag(const rvec &p) { return p.cast<cplx>().asDiagonal(); }
    }

    /// Statistics-only quantities, computed once per location draw and shared by
    /// every realization and scheme.
    struct CombiningPrecompute
    {
        int M = 0, K = 0, N = 0;
        rvec powers;
        double sigma2 = 0.0;
        std::vector<Eigen::LLT<cmat>> Q_llt; // per BS
        std::vector<cmat> A_sta;             // Q_m + sum_l p_l Rbar_ml
        std::vector<Eigen::LLT<cmat>> A_sta_llt;

        // GSLI-MMSE: Sigma and the factored K x K inner matrix Sigma + P^{-1}/(MN).
        bool has_gsli = false;
        cmat Sigma;
        Eigen::PartialPivLU<cmat> gsli_inner;

        // SI-CMMSE: dense statistics matrix Q + sum_l p_l Rbar_l.
        bool has_si_cmmse = false;
        Eigen::LLT<cmat> si_cmmse_llt;
    };

    /// Sigma_kl = (1/MN)[gbar_k^H Q^{-1} gbar_l + 1{l in P_k} tau_p sum_m tr(A_ml Psi_mk A_mk^H Q_m^{-1})].
    inline cmat gsli_sigma(const NetworkStats &net, const EstimationStatistics &est,
                           const std::vector<Eigen::LLT<cmat>> &Q_llt)
    {
        const int M = net.M, K = net.K, N = net.N;
        const double mn = static_cast<double>(M) * N;
        cmat sigma = cmat::Zero(K, K);
        for (int m = 0; m < M; ++m)
        {
            cmat gbar(N, K);
            for (int k = 0; k < K; ++k)
                gbar.col(k) = net.at(m, k).gbar;
            sigma += gbar.adjoint() * Q_llt[m].solve(gbar);

            // X_k = Psi_mk A_mk^H Q_m^{-1}; tr(A_ml X_k) = sum_ij A_ml(i,j) X_k(j,i).
            const cmat qinv = Q_llt[m].solve(cmat::Identity(N, N));
            for (int k = 0; k < K; ++k)
            {
                const cmat xk = est.Psi(m, k) * est.at(m, k).A.adjoint() * qinv;
                for (int l : est.plan.copilots[k])
                    sigma(k, l) += static_cast<double>(est.plan.tau_p) *
                                   (est.at(m, l).A.cwiseProduct(xk.transpose())).sum();
            }
        }
        return sigma / mn;
    }

    inline CombiningPrecompute prepare_combining(const NetworkStats &net, const EstimationStatistics &est,
                                                 bool with_gsli, bool with_si_cmmse)
    {
        CombiningPrecompute pre;
        pre.M = net.M;
        pre.K = net.K;
        pre.N = net.N;
        pre.powers = est.powers;
        pre.sigma2 = est.sigma2;
        pre.Q_llt.reserve(net.M);
        pre.A_sta.reserve(net.M);
        pre.A_sta_llt.reserve(net.M);
        for (int m = 0; m < net.M; ++m)
        {
            pre.Q_llt.push_back(detail::checked_llt(est.Q[m], "Q_m"));
            cmat a = est.Q[m];
            for (int l = 0; l < net.K; ++l)
                a += est.powers[l] * rbar(net, est, m, l);
            a = hermitian_part(a);
            pre.A_sta_llt.push_back(detail::checked_llt(a, "A_sta"));
            pre.A_sta.push_back(std::move(a));
        }

        if (with_gsli)
        {
            pre.has_gsli = true;
            pre.Sigma = gsli_sigma(net, est, pre.Q_llt);
            const double mn = static_cast<double>(net.M) * net.N;
            cmat inner = pre.Sigma;
            inner.diagonal() += (pre.powers.cwiseInverse() / mn).cast<cplx>();
            pre.gsli_inner.compute(inner);
            if (!(pre.gsli_inner.rcond() > 1e-12))
            {
                const double ridge = 1e-12 * std::abs(inner.trace()) / net.K;
                warn("GSLI-MMSE inner matrix is ill-conditioned (rcond " + std::to_string(pre.gsli_inner.rcond()) +
                     "); adding ridge " + std::to_string(ridge));
                inner.diagonal().array() += ridge;
                pre.gsli_inner.compute(inner);
            }
        }

        if (with_si_cmmse)
        {
            pre.has_si_cmmse = true;
            std::vector<cmat> blocks(est.Q.begin(), est.Q.end());
            for (int m = 0; m < net.M; ++m)
                for (int l = 0; l < net.K; ++l)
                    blocks[m] += est.powers[l] * est.at(m, l).Rhat;
            cmat s = block_diagonal(blocks);
            for (int l = 0; l < net.K; ++l)
            {
                std::vector<cvec> parts;
                for (int m = 0; m < net.M; ++m)
                    parts.push_back(net.at(m, l).gbar);
                const cvec gb = stack(parts);
                s += est.powers[l] * gb * gb.adjoint();
            }
            pre.si_cmmse_llt = detail::checked_llt(hermitian_part(s), "SI-CMMSE statistics matrix");
        }
        return pre;
    }

    /// v_k = p_k (Ghat P Ghat^H + Q)^{-1} ghat_k, dense MN x MN factorization.
    inline CombinerOutput cmmse(const std::vector<cmat> &G, const EstimationStatistics &est)
    {
        const int M = est.M, N = est.N;
        const cmat g = stack_rows(G);
        const cmat gp = g * detail::power_diag(est.powers);
        cmat s = block_diagonal(est.Q);
        s.noalias() += gp * g.adjoint();
        const auto llt = detail::checked_llt(s, "CMMSE");
        cmat x = llt.solve(gp);

        // One refinement step; the residual gp - (Q + gp g^H) x is formed in extended precision
        // from the unrounded factors.
        using lcplx = std::complex<long double>;
        using lmat = Eigen::Matrix<lcplx, Eigen::Dynamic, Eigen::Dynamic>;
        const lmat xl = x.cast<lcplx>();
        const lmat gpl = gp.cast<lcplx>();
        lmat r = gpl - gpl * (g.cast<lcplx>().adjoint() * xl);
        for (int m = 0; m < M; ++m)
            r.middleRows(m * N, N) -= est.Q[m].cast<lcplx>() * xl.middleRows(m * N, N);
        x += llt.solve(r.cast<cplx>());

        CombinerOutput out{Scheme::cmmse, split_rows(x, M, N)};
        detail::require_finite(out);
        return out;
    }

    /// v_k = Q^{-1} Ghat (Ghat^H Q^{-1} Ghat + P^{-1})^{-1} e_k with block-diagonal Q.
    inline CombinerOutput cmmse_factored(const std::vector<cmat> &G, const std::vector<Eigen::LLT<cmat>> &Q_llt,
                                         const rvec &powers)
    {
        const auto M = G.size();
        const auto K = powers.size();
        std::vector<cmat> X(M);
        cmat inner = cmat::Zero(K, K);
        for (std::size_t m = 0; m < M; ++m)
        {
            X[m] = Q_llt[m].solve(G[m]);
            inner.noalias() += G[m].adjoint() * X[m];
        }
        inner.diagonal() += powers.cwiseInverse().cast<cplx>();
        const Eigen::PartialPivLU<cmat> lu(inner);
        const cmat t = lu.inverse();
        CombinerOutput out{Scheme::cmmse, {}};
        out.V.reserve(M);
        for (std::size_t m = 0; m < M; ++m)
            out.V.push_back(X[m] * t);
        detail::require_finite(out);
        return out;
    }

    /// Same algebra with a dense Q; oracle for the block-wise path.
    inline CombinerOutput cmmse_factored_dense(const std::vector<cmat> &G, const cmat &Q, const rvec &powers)
    {
        const int M = static_cast<int>(G.size());
        const int N = static_cast<int>(G.front().rows());
        const cmat g = stack_rows(G);
        const cmat x = Q.fullPivLu().solve(g);
        cmat inner = g.adjoint() * x;
        inner.diagonal() += powers.cwiseInverse().cast<cplx>();
        return {Scheme::cmmse, split_rows(x * inner.fullPivLu().inverse(), M, N)};
    }

    /// Per-BS (Ghat_m P Ghat_m^H + Q_m)^{-1} Ghat_m P.
    inline cmat lmmse_local(const cmat &Gm, const cmat &Qm, const rvec &powers)
    {
        const cmat gp = Gm * detail::power_diag(powers);
        cmat s = Qm;
        s.noalias() += gp * Gm.adjoint();
        return detail::checked_llt(s, "LMMSE").solve(gp);
    }

    inline CombinerOutput lmmse(const std::vector<cmat> &G, const EstimationStatistics &est)
    {
        CombinerOutput out{Scheme::lmmse, {}};
        for (int m = 0; m < est.M; ++m)
            out.V.push_back(lmmse_local(G[m], est.Q[m], est.powers));
        detail::require_finite(out);
        return out;
    }

    /// V_m = (1/MN) Q_m^{-1} Ghat_m (Sigma + P^{-1}/MN)^{-1} P.
    inline CombinerOutput gsli_mmse(const std::vector<cmat> &G, const CombiningPrecompute &pre)
    {
        if (!pre.has_gsli)
            throw domain_error("gsli_mmse: precompute was built without GSLI statistics");
        const double mn = static_cast<double>(pre.M) * pre.N;
        const cmat right = pre.gsli_inner.solve(detail::power_diag(pre.powers)) / mn;
        CombinerOutput out{Scheme::gsli_mmse, {}};
        for (int m = 0; m < pre.M; ++m)
            out.V.push_back(pre.Q_llt[m].solve(G[m]) * right);
        detail::require_finite(out);
        return out;
    }

    /// V_m = (A_sta_m)^{-1} Ghat_m P with the statistics-only factorization.
    inline CombinerOutput si_lmmse(const std::vector<cmat> &G, const CombiningPrecompute &pre)
    {
        CombinerOutput out{Scheme::si_lmmse, {}};
        const cmat p = detail::power_diag(pre.powers);
        for (int m = 0; m < pre.M; ++m)
            out.V.push_back(pre.A_sta_llt[m].solve(G[m] * p));
        detail::require_finite(out);
        return out;
    }

    inline CombinerOutput si_cmmse(const std::vector<cmat> &G, const CombiningPrecompute &pre)
    {
        if (!pre.has_si_cmmse)
            throw domain_error("si_cmmse: precompute was built without the SI-CMMSE statistics matrix");
        const cmat gp = stack_rows(G) * detail::power_diag(pre.powers);
        CombinerOutput out{Scheme::si_cmmse, split_rows(pre.si_cmmse_llt.solve(gp), pre.M, pre.N)};
        detail::require_finite(out);
        return out;
    }

    inline CombinerOutput lmr(const std::vector<cmat> &G) { return {Scheme::lmr, G}; }

    /// V_m = Ghat_m (Ghat_m^H Ghat_m + sigma2 P^{-1})^{-1}.
    inline CombinerOutput lrzf(const std::vector<cmat> &G, const rvec &powers, double sigma2)
    {
        CombinerOutput out{Scheme::lrzf, {}};
        for (const auto &gm : G)
        {
            cmat inner = gm.adjoint() * gm;
            inner.diagonal() += (sigma2 * powers.cwiseInverse()).cast<cplx>();
            out.V.push_back(gm * detail::checked_llt(hermitian_part(inner), "LRZF").solve(
                                     cmat::Identity(inner.rows(), inner.cols())));
        }
        detail::require_finite(out);
        return out;
    }

    /// A_ins_m = Ghat_m P Ghat_m^H + Q_m.
    inline cmat instantaneous_system(const cmat &Gm, const cmat &Qm, const rvec &powers)
    {
        cmat s = Qm;
        s.noalias() += Gm * detail::power_diag(powers) * Gm.adjoint();
        return hermitian_part(s);
    }

    inline CombinerOutput ins_ssor(const std::vector<cmat> &G, const EstimationStatistics &est, double omega,
                                   int n_iter)
    {
        CombinerOutput out{Scheme::ins_ssor, {}};
        const cmat p = detail::power_diag(est.powers);
        for (int m = 0; m < est.M; ++m)
            out.V.push_back(ssor_solve(instantaneous_system(G[m], est.Q[m], est.powers), G[m] * p, omega, n_iter));
        detail::require_finite(out);
        return out;
    }

    inline CombinerOutput sta_ssor(const std::vector<cmat> &G, const CombiningPrecompute &pre, double omega,
                                   int n_iter)
    {
        CombinerOutput out{Scheme::sta_ssor, {}};
        const cmat p = detail::power_diag(pre.powers);
        for (int m = 0; m < pre.M; ++m)
            out.V.push_back(ssor_solve(pre.A_sta[m], G[m] * p, omega, n_iter));
        detail::require_finite(out);
        return out;
    }

    /// SSOR on A_ins warm-started from the SI-LMMSE solution.
    inline CombinerOutput ins_si_ssor(const std::vector<cmat> &G, const EstimationStatistics &est,
                                      const CombiningPrecompute &pre, double omega, int n_iter)
    {
        const CombinerOutput init = si_lmmse(G, pre);
        CombinerOutput out{Scheme::ins_si_ssor, {}};
        const cmat p = detail::power_diag(est.powers);
        for (int m = 0; m < est.M; ++m)
            out.V.push_back(
                ssor_solve(instantaneous_system(G[m], est.Q[m], est.powers), G[m] * p, omega, n_iter, init.V[m]));
        detail::require_finite(out);
        return out;
    }

    struct CombineOptions
    {
        int n_iter = 5;
        std::optional<double> omega; // default: relaxation rule from K and N
        bool omega_fallback = false;
    };

    inline double resolve_omega(const CombineOptions &opt, int K, int N)
    {
        return opt.omega ? *opt.omega : ssor_relaxation(K, N, opt.omega_fallback);
    }

    inline CombinerOutput combine(Scheme s, const std::vector<cmat> &G, const EstimationStatistics &est,
                                  const CombiningPrecompute &pre, const CombineOptions &opt = {})
    {
        switch (s)
        {
        case Scheme::cmmse:
            return cmmse(G, est);
        case Scheme::gsli_mmse:
            return gsli_mmse(G, pre);
        case Scheme::lmmse:
            return lmmse(G, est);
        case Scheme::si_lmmse:
            return si_lmmse(G, pre);
        case Scheme::si_cmmse:
            return si_cmmse(G, pre);
        case Scheme::lmr:
            return lmr(G);
        case Scheme::lrzf:
            return lrzf(G, est.powers, est.sigma2);
        case Scheme::ins_ssor:
            return ins_ssor(G, est, resolve_omega(opt, est.K, est.N), opt.n_iter);
        case Scheme::sta_ssor:
            return sta_ssor(G, pre, resolve_omega(opt, est.K, est.N), opt.n_iter);
        case Scheme::ins_si_ssor:
            return ins_si_ssor(G, est, pre, resolve_omega(opt, est.K, est.N), opt.n_iter);
        }
        throw domain_error("combine: unknown scheme");
    }
}

#endif
