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

#ifndef CFXL_SE_EVAL_HPP
#define CFXL_SE_EVAL_HPP

#include "combining.hpp"
#include "core.hpp"
#include "estimation.hpp"
#include "network.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace cfxl
{
    enum class Bound
    {
        uatf,     // centralized use-and-then-forget
        standard, // centralized, instantaneous estimates
        lsfd,     // distributed with optimal large-scale fading decoding weights
    };

    inline std::string to_string(Bound b)
    {
        switch (b)
        {
        case Bound::uatf:
            return "uatf";
        case Bound::standard:
            return "standard";
        case Bound::lsfd:
            return "lsfd";
        }
        return "unknown";
    }

    inline Bound bound_from_string(const std::string &s)
    {
        for (Bound b : {Bound::uatf, Bound::standard, Bound::lsfd})
            if (to_string(b) == s)
                return b;
        throw config_error("unknown bound '" + s + "'");
    }

    /// Noise term of the standard bound: v^H (sum p C + sigma2 I) v, or the inverse form when as_printed.
    enum class StandardBoundForm
    {
        classical,
        as_printed,
    };

    inline double prelog(int tau_c, int tau_p)
    {
        if (tau_c < 1 || tau_p < 0 || tau_p >= tau_c)
            throw domain_error("prelog: need 0 <= tau_p < tau_c");
        return static_cast<double>(tau_c - tau_p) / tau_c;
    }

    namespace detail
    {
        // Clamps a negative Monte-Carlo interference estimate to zero.
        inline double clamp_interference(double interference, const char *what)
        {
            if (interference < 0.0)
            {
                warn(std::string(what) + ": negative interference estimate " + std::to_string(interference) +
                     " clamped to zero");
                return 0.0;
            }
            return interference;
        }
    }

    /// Running sums for the centralized UatF bound; v_k and g_l are stacked over all BSs.
    struct CentralizedMoments
    {
        int K = 0;
        long count = 0;
        cvec sum_vg;    // sum v_k^H g_k
        rmat sum_abs2;  // (k, l): sum |v_k^H g_l|^2
        rvec sum_norm2; // sum ||v_k||^2

        explicit CentralizedMoments(int k = 0)
            : K(k), sum_vg(cvec::Zero(k)), sum_abs2(rmat::Zero(k, k)), sum_norm2(rvec::Zero(k))
        {
        }

        /// V[m] holds N x K combiners of BS m, G[m] the N x K true channels.
        void accumulate(const std::vector<cmat> &V, const std::vector<cmat> &G)
        {
            if (V.size() != G.size())
                throw shape_error("CentralizedMoments: combiner and channel BS counts differ");
            cmat h = cmat::Zero(K, K);
            rvec n2 = rvec::Zero(K);
            for (std::size_t m = 0; m < V.size(); ++m)
            {
                h.noalias() += V[m].adjoint() * G[m];
                n2 += V[m].colwise().squaredNorm().transpose();
            }
            sum_vg += h.diagonal();
            sum_abs2 += h.cwiseAbs2();
            sum_norm2 += n2;
            ++count;
        }

        void merge(const CentralizedMoments &o)
        {
            sum_vg += o.sum_vg;
            sum_abs2 += o.sum_abs2;
            sum_norm2 += o.sum_norm2;
            count += o.count;
        }
    };

    /// gamma_k = p_k |E{v^H g_k}|^2 / (sum_l p_l E{|v^H g_l|^2} - p_k |E{v^H g_k}|^2 + sigma2 E{||v||^2}).
    inline rvec uatf_sinr_centralized(const CentralizedMoments &mom, const rvec &powers, double sigma2)
    {
        if (mom.count < 1)
            throw domain_error("uatf_sinr_centralized: no samples accumulated");
        const double n = static_cast<double>(mom.count);
        rvec gamma(mom.K);
        for (int k = 0; k < mom.K; ++k)
        {
            const double signal = powers[k] * std::norm(mom.sum_vg[k] / n);
            const double total = (mom.sum_abs2.row(k).transpose().cwiseProduct(powers)).sum() / n;
            const double interf = detail::clamp_interference(total - signal, "uatf_sinr_centralized");
            gamma[k] = signal / (interf + sigma2 * mom.sum_norm2[k] / n);
        }
        return gamma;
    }

    inline rvec uatf_se_centralized(const CentralizedMoments &mom, const rvec &powers, double sigma2, double pre)
    {
        return pre * uatf_sinr_centralized(mom, powers, sigma2).array().log1p().matrix() / std::log(2.0);
    }

    /// Instantaneous SINR of the standard bound for one realization.
    /// `noise_cov[m]` is sum_l p_l C_ml + sigma2 I for BS m.
    inline rvec standard_sinr(const std::vector<cmat> &V, const std::vector<cmat> &Ghat, const std::vector<cmat> &noise_cov,
                              const rvec &powers, StandardBoundForm form = StandardBoundForm::classical)
    {
        const auto K = powers.size();
        cmat h = cmat::Zero(K, K);
        rvec noise = rvec::Zero(K);
        for (std::size_t m = 0; m < V.size(); ++m)
        {
            h.noalias() += V[m].adjoint() * Ghat[m];
            const cmat w = form == StandardBoundForm::classical ? cmat(noise_cov[m] * V[m])
                                                                : cmat(noise_cov[m].llt().solve(V[m]));
            noise += (V[m].conjugate().cwiseProduct(w)).colwise().sum().real().transpose();
        }
        rvec gamma(K);
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const double signal = powers[k] * std::norm(h(k, k));
            double interf = (h.row(k).cwiseAbs2().transpose().cwiseProduct(powers)).sum() - signal;
            interf = std::max(interf, 0.0);
            const double den = interf + noise[k];
            gamma[k] = den > 0.0 ? signal / den : 0.0;
        }
        return gamma;
    }

    /// Averages log2(1 + gamma) over realizations (expectation outside the log).
    struct StandardBoundAccumulator
    {
        long count = 0;
        rvec sum_log2;

        explicit StandardBoundAccumulator(int K = 0) : sum_log2(rvec::Zero(K)) {}

        void accumulate(const rvec &gamma)
        {
            sum_log2 += (gamma.array().log1p() / std::log(2.0)).matrix();
            ++count;
        }
        void merge(const StandardBoundAccumulator &o)
        {
            sum_log2 += o.sum_log2;
            count += o.count;
        }
        rvec se(double pre) const
        {
            if (count < 1)
                throw domain_error("StandardBoundAccumulator: no samples accumulated");
            return pre * sum_log2 / static_cast<double>(count);
        }
    };

    /// Per-BS noise covariance blocks sum_l p_l C_ml + sigma2 I.
    inline std::vector<cmat> standard_noise_covariance(const EstimationStatistics &est)
    {
        std::vector<cmat> out;
        out.reserve(est.M);
        for (int m = 0; m < est.M; ++m)
        {
            cmat c = est.Csum[m];
            c.diagonal().array() += est.sigma2;
            out.push_back(std::move(c));
        }
        return out;
    }

    /// The standard bound is only valid under MMSE estimation.
    inline void check_standard_bound_validity(EstimatorKind kind, bool downgrade_to_warning)
    {
        if (kind == EstimatorKind::mmse)
            return;
        const std::string msg = "standard bound requires the MMSE estimator (got " + to_string(kind) + ")";
        if (!downgrade_to_warning)
            throw validity_error(msg);
        warn(msg);
    }

    /// Running sums for distributed processing with LSFD.
    /// b_kl = [v_1k^H g_1l, ..., v_Mk^H g_Ml]^T; D_k = diag(E||v_mk||^2).
    struct DistributedMoments
    {
        int M = 0;
        int K = 0;
        long count = 0;
        std::vector<cvec> sum_bkk; // [k]
        std::vector<cmat> sum_bb;  // [k * K + l]: sum b_kl b_kl^H
        rmat sum_norm2;            // M x K

        DistributedMoments() = default;
        DistributedMoments(int m, int k)
            : M(m), K(k), sum_bkk(k, cvec::Zero(m)), sum_bb(static_cast<std::size_t>(k * k), cmat::Zero(m, m)),
              sum_norm2(rmat::Zero(m, k))
        {
        }

        void accumulate(const std::vector<cmat> &V, const std::vector<cmat> &G)
        {
            if (static_cast<int>(V.size()) != M || static_cast<int>(G.size()) != M)
                throw shape_error("DistributedMoments: expected one block per BS");
            std::vector<cmat> h(M);
            for (int m = 0; m < M; ++m)
            {
                h[m] = V[m].adjoint() * G[m];
                sum_norm2.row(m) += V[m].colwise().squaredNorm();
            }
            cvec b(M);
            for (int k = 0; k < K; ++k)
                for (int l = 0; l < K; ++l)
                {
                    for (int m = 0; m < M; ++m)
                        b[m] = h[m](k, l);
                    sum_bb[static_cast<std::size_t>(k * K + l)].noalias() += b * b.adjoint();
                    if (l == k)
                        sum_bkk[k] += b;
                }
            ++count;
        }

        void merge(const DistributedMoments &o)
        {
            for (int k = 0; k < K; ++k)
                sum_bkk[k] += o.sum_bkk[k];
            for (std::size_t i = 0; i < sum_bb.size(); ++i)
                sum_bb[i] += o.sum_bb[i];
            sum_norm2 += o.sum_norm2;
            count += o.count;
        }

        cvec mean_bkk(int k) const { return sum_bkk[k] / static_cast<double>(count); }

        /// sum_l p_l E{b_kl b_kl^H} - p_k E{b_kk} E{b_kk}^H + sigma2 D_k.
        cmat interference_matrix(int k, const rvec &powers, double sigma2) const
        {
            if (count < 1)
                throw domain_error("DistributedMoments: no samples accumulated");
            const double n = static_cast<double>(count);
            cmat s = cmat::Zero(M, M);
            for (int l = 0; l < K; ++l)
                s += (powers[l] / n) * sum_bb[static_cast<std::size_t>(k * K + l)];
            const cvec e = mean_bkk(k);
            s -= powers[k] * e * e.adjoint();
            s.diagonal() += (sigma2 / n * sum_norm2.col(k)).cast<cplx>();
            return hermitian_part(s);
        }
    };

    /// SINR of UE k for given LSFD weights a (M-vector).
    inline double lsfd_sinr(const DistributedMoments &mom, int k, const cvec &a, const rvec &powers, double sigma2)
    {
        const cvec e = mom.mean_bkk(k);
        const double signal = powers[k] * std::norm(a.dot(e));
        const cmat s = mom.interference_matrix(k, powers, sigma2);
        const double noise = sigma2 / static_cast<double>(mom.count) * (a.cwiseAbs2().cwiseProduct(mom.sum_norm2.col(k))).sum();
        const double total = std::real(a.dot(s * a));
        const double interf = detail::clamp_interference(total - noise, "lsfd_sinr");
        const double den = interf + noise;
        return den > 0.0 ? signal / den : 0.0;
    }

    /// a_k* = S_k^{-1} E{b_kk}; a ridge of 1e-12 trace/M is added if S_k is singular.
    inline std::vector<cvec> lsfd_weights(const DistributedMoments &mom, const rvec &powers, double sigma2)
    {
        std::vector<cvec> a;
        a.reserve(mom.K);
        for (int k = 0; k < mom.K; ++k)
        {
            cmat s = mom.interference_matrix(k, powers, sigma2);
            Eigen::LDLT<cmat> ldlt(s);
            if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-12))
            {
                const double ridge = 1e-12 * std::abs(s.trace()) / mom.M;
                warn("lsfd_weights: singular interference matrix for UE " + std::to_string(k) + "; adding ridge " +
                     std::to_string(ridge));
                s.diagonal().array() += ridge;
                ldlt.compute(s);
            }
            a.push_back(ldlt.solve(mom.mean_bkk(k)));
        }
        return a;
    }

    inline rvec lsfd_se(const DistributedMoments &mom, const std::vector<cvec> &a, const rvec &powers, double sigma2,
                        double pre)
    {
        rvec se(mom.K);
        for (int k = 0; k < mom.K; ++k)
            se[k] = pre * std::log2(1.0 + lsfd_sinr(mom, k, a[k], powers, sigma2));
        return se;
    }
}

#endif
