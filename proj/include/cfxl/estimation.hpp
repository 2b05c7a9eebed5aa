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

#ifndef CFXL_ESTIMATION_HPP
#define CFXL_ESTIMATION_HPP

#include "core.hpp"
#include "network.hpp"
#include "rng.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace cfxl
{
    struct PilotPlan
    {
        int tau_p = 1;
        std::vector<int> pilot;                 // t_k in [0, tau_p)
        std::vector<std::vector<int>> copilots; // P_k, ascending, contains k

        int num_ue() const { return static_cast<int>(pilot.size()); }
        bool shares_pilot(int k, int l) const { return pilot[k] == pilot[l]; }
    };

    /// Round-robin assignment t_k = k mod tau_p.
    inline PilotPlan assign_pilots(int K, int tau_p)
    {
        if (K < 1 || tau_p < 1)
            throw domain_error("assign_pilots: K and tau_p must be positive");
        PilotPlan plan;
        plan.tau_p = tau_p;
        plan.pilot.resize(K);
        for (int k = 0; k < K; ++k)
            plan.pilot[k] = k % tau_p;
        plan.copilots.assign(K, {});
        for (int k = 0; k < K; ++k)
            for (int l = 0; l < K; ++l)
                if (plan.pilot[l] == plan.pilot[k])
                    plan.copilots[k].push_back(l);
        return plan;
    }

    enum class EstimatorKind
    {
        mmse,
        ew_mmse,
        gls,
        custom,
    };

    inline std::string to_string(EstimatorKind kind)
    {
        switch (kind)
        {
        case EstimatorKind::mmse:
            return "mmse";
        case EstimatorKind::ew_mmse:
            return "ew_mmse";
        case EstimatorKind::gls:
            return "gls";
        case EstimatorKind::custom:
            return "custom";
        }
        return "unknown";
    }

    /// Psi_mk = sum_{l in P_k} p_l tau_p Rcheck_ml + sigma2 I.
    inline cmat psi_matrix(const NetworkStats &net, int m, int k, const PilotPlan &plan, const rvec &powers,
                           double sigma2)
    {
        cmat psi = cmat::Zero(net.N, net.N);
        for (int l : plan.copilots[k])
            psi += (powers[l] * plan.tau_p) * net.at(m, l).Rcheck;
        psi.diagonal().array() += sigma2;
        return hermitian_part(psi);
    }

    /// sqrt(p) Rcheck Psi^{-1}, shared by the generalized and the direct MMSE paths.
    inline cmat mmse_gain(const cmat &rcheck, const cmat &psi, double power)
    {
        Eigen::LLT<cmat> llt(psi);
        if (llt.info() != Eigen::Success)
            throw linear_algebra_error("mmse_gain: Psi is not positive definite");
        return std::sqrt(power) * llt.solve(rcheck).adjoint();
    }

    inline cmat estimator_matrix(EstimatorKind kind, const cmat &rcheck, const cmat &psi, double power, int tau_p)
    {
        const auto n = rcheck.rows();
        switch (kind)
        {
        case EstimatorKind::mmse:
            return mmse_gain(rcheck, psi, power);
        case EstimatorKind::ew_mmse:
        {
            cmat a = cmat::Zero(n, n);
            a.diagonal() = std::sqrt(power) * (rcheck.diagonal().real().array() / psi.diagonal().real().array())
                                                  .matrix()
                                                  .cast<cplx>();
            return a;
        }
        case EstimatorKind::gls:
            return cmat::Identity(n, n) / (std::sqrt(power) * tau_p);
        case EstimatorKind::custom:
            break;
        }
        throw domain_error("estimator_matrix: custom estimators must supply their own A matrices");
    }

    struct PairEstimation
    {
        cmat A;
        cmat Rhat; // tau_p A Psi A^H
        cmat B;    // sqrt(p) tau_p A Rcheck - Rhat
        cmat C;    // Rcheck - sqrt(p) tau_p (Rcheck A^H + A Rcheck) + Rhat
    };

    /// Estimation statistics of every pair plus the per-BS aggregates the combiners use.
    struct EstimationStatistics
    {
        int M = 0;
        int K = 0;
        int N = 0;
        EstimatorKind kind = EstimatorKind::mmse;
        PilotPlan plan;
        rvec powers;
        double sigma2 = 0.0;
        std::vector<cmat> psi;           // [m * tau_p + t]
        std::vector<PairEstimation> pair; // [m * K + k]
        std::vector<cmat> Q;             // per BS: sum_l p_l (B + B^H + C) + sigma2 I
        std::vector<cmat> Csum;          // per BS: sum_l p_l C_ml

        const cmat &Psi(int m, int k) const
        {
            return psi[static_cast<std::size_t>(m * plan.tau_p + plan.pilot[k])];
        }
        const PairEstimation &at(int m, int k) const { return pair[static_cast<std::size_t>(m * K + k)]; }
    };

    /// Rbar_mk = gbar gbar^H + Rhat_mk.
    inline cmat rbar(const NetworkStats &net, const EstimationStatistics &est, int m, int k)
    {
        const cvec &gb = net.at(m, k).gbar;
        return gb * gb.adjoint() + est.at(m, k).Rhat;
    }

    inline PairEstimation pair_estimation(const cmat &a, const cmat &rcheck, const cmat &psi, double power, int tau_p)
    {
        if (a.rows() != rcheck.rows() || a.cols() != rcheck.cols())
            throw shape_error("pair_estimation: estimator matrix has wrong dimensions");
        PairEstimation pe;
        pe.A = a;
        pe.Rhat = hermitian_part(static_cast<double>(tau_p) * a * psi * a.adjoint());
        const cmat ar = (std::sqrt(power) * tau_p) * a * rcheck;
        pe.B = ar - pe.Rhat;
        pe.C = hermitian_part(rcheck - ar.adjoint() - ar + pe.Rhat);
        return pe;
    }

    /// Builds all statistics. With kind == custom, `custom_a` supplies A_mk at index m * K + k.
    inline EstimationStatistics estimation_statistics(const NetworkStats &net, const PilotPlan &plan,
                                                      const rvec &powers, double sigma2, EstimatorKind kind,
                                                      const std::vector<cmat> *custom_a = nullptr)
    {
        if (plan.num_ue() != net.K || powers.size() != net.K)
            throw shape_error("estimation_statistics: pilot plan or power vector does not match K");
        if (!(sigma2 > 0.0) || !(powers.array() > 0.0).all())
            throw domain_error("estimation_statistics: powers and noise must be positive");
        if (kind == EstimatorKind::custom &&
            (!custom_a || custom_a->size() != static_cast<std::size_t>(net.M * net.K)))
            throw shape_error("estimation_statistics: custom estimator needs M*K matrices");

        EstimationStatistics est;
        est.M = net.M;
        est.K = net.K;
        est.N = net.N;
        est.kind = kind;
        est.plan = plan;
        est.powers = powers;
        est.sigma2 = sigma2;
        est.psi.resize(static_cast<std::size_t>(net.M * plan.tau_p));
        for (int m = 0; m < net.M; ++m)
            for (int k = 0; k < net.K; ++k)
            {
                auto &slot = est.psi[static_cast<std::size_t>(m * plan.tau_p + plan.pilot[k])];
                if (slot.size() == 0)
                    slot = psi_matrix(net, m, k, plan, powers, sigma2);
            }

        est.pair.reserve(static_cast<std::size_t>(net.M * net.K));
        for (int m = 0; m < net.M; ++m)
            for (int k = 0; k < net.K; ++k)
            {
                const cmat &rc = net.at(m, k).Rcheck;
                const cmat &psi = est.Psi(m, k);
                const cmat a = kind == EstimatorKind::custom
                                   ? (*custom_a)[static_cast<std::size_t>(m * net.K + k)]
                                   : estimator_matrix(kind, rc, psi, powers[k], plan.tau_p);
                est.pair.push_back(pair_estimation(a, rc, psi, powers[k], plan.tau_p));
            }

        est.Q.assign(net.M, cmat());
        est.Csum.assign(net.M, cmat());
        for (int m = 0; m < net.M; ++m)
        {
            cmat q = cmat::Zero(net.N, net.N);
            cmat cs = cmat::Zero(net.N, net.N);
            for (int l = 0; l < net.K; ++l)
            {
                const auto &pe = est.at(m, l);
                q += powers[l] * (pe.B + pe.B.adjoint() + pe.C);
                cs += powers[l] * pe.C;
            }
            q.diagonal().array() += sigma2;
            est.Q[m] = hermitian_part(q);
            est.Csum[m] = hermitian_part(cs);
        }
        return est;
    }

    /// Pilot noise n_{m,t} ~ CN(0, tau_p sigma2 I), index m * tau_p + t; shared by co-pilot UEs.
    inline std::vector<cvec> sample_pilot_noise(int M, int N, int tau_p, double sigma2, rng_engine &rng)
    {
        std::vector<cvec> noise;
        noise.reserve(static_cast<std::size_t>(M * tau_p));
        for (int i = 0; i < M * tau_p; ++i)
            noise.push_back(complex_normal_vector(rng, N, tau_p * sigma2));
        return noise;
    }

    namespace detail
    {
        // y_mk - ybar_mk for the received pilot of UE k at BS m.
        inline cvec pilot_innovation(const NetworkStats &net, const ChannelRealization &real, const PilotPlan &plan,
                                     const rvec &powers, const std::vector<cvec> &noise, int m, int k)
        {
            cvec y = noise[static_cast<std::size_t>(m * plan.tau_p + plan.pilot[k])];
            for (int l : plan.copilots[k])
                y += (std::sqrt(powers[l]) * plan.tau_p) * (real.at(m, l, net.K) - net.at(m, l).gbar);
            return y;
        }
    }

    /// ghat_mk = gbar_mk + A_mk (y_mk - ybar_mk); result index m * K + k.
    inline std::vector<cvec> estimate_channels(const NetworkStats &net, const EstimationStatistics &est,
                                               const ChannelRealization &real, const std::vector<cvec> &noise)
    {
        std::vector<cvec> ghat;
        ghat.reserve(static_cast<std::size_t>(net.M * net.K));
        for (int m = 0; m < net.M; ++m)
            for (int k = 0; k < net.K; ++k)
            {
                const cvec innov = detail::pilot_innovation(net, real, est.plan, est.powers, noise, m, k);
                ghat.push_back(net.at(m, k).gbar + est.at(m, k).A * innov);
            }
        return ghat;
    }

    /// MMSE estimate formed directly from Rcheck and Psi, without stored estimator matrices.
    inline std::vector<cvec> estimate_channels_mmse(const NetworkStats &net, const PilotPlan &plan,
                                                    const rvec &powers, double sigma2,
                                                    const ChannelRealization &real, const std::vector<cvec> &noise)
    {
        std::vector<cvec> ghat;
        ghat.reserve(static_cast<std::size_t>(net.M * net.K));
        for (int m = 0; m < net.M; ++m)
            for (int k = 0; k < net.K; ++k)
            {
                const cmat psi = psi_matrix(net, m, k, plan, powers, sigma2);
                const cvec innov = detail::pilot_innovation(net, real, plan, powers, noise, m, k);
                ghat.push_back(net.at(m, k).gbar + mmse_gain(net.at(m, k).Rcheck, psi, powers[k]) * innov);
            }
        return ghat;
    }
}

#endif
