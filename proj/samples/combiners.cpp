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

// One location draw evaluated with every combiner, using the library pieces
// directly instead of run_experiment.

#include <cfxl/cfxl.hpp>

#include <cstdio>

int main()
{
    const double lambda = cfxl::wavelength_from_frequency(3e9);
    const int num_realizations = 100;

    cfxl::PlacementParams pp;
    pp.num_bs = 3;
    pp.num_ue = 6;
    pp.nx = pp.ny = 8;
    pp.delta_x = pp.delta_y = lambda / 8;
    pp.area_side = 400.0;
    auto layout_rng = cfxl::make_stream(7, 0, 0, cfxl::stream_purpose::layout);
    const auto layout = cfxl::place_scenario(pp, layout_rng);

    const auto net = cfxl::build_network_stats(layout, lambda, cfxl::PropagationParams{},
                                               cfxl::CouplingParams::defaults(lambda));
    const auto plan = cfxl::assign_pilots(pp.num_ue, 1);
    const cfxl::rvec powers = cfxl::rvec::Constant(pp.num_ue, 0.2);
    const double sigma2 = cfxl::db_to_linear(-94.0) * 1e-3;
    const auto est = cfxl::estimation_statistics(net, plan, powers, sigma2, cfxl::EstimatorKind::mmse);
    const auto pre = cfxl::prepare_combining(net, est, true, true);

    std::vector<cfxl::CentralizedMoments> cmom;
    std::vector<cfxl::DistributedMoments> dmom;
    for (std::size_t i = 0; i < cfxl::all_schemes.size(); ++i)
    {
        cmom.emplace_back(net.K);
        dmom.emplace_back(net.M, net.K);
    }

    cfxl::CombineOptions opt;
    for (int r = 0; r < num_realizations; ++r)
    {
        auto f = cfxl::make_stream(7, 0, r, cfxl::stream_purpose::small_scale_fading);
        auto n = cfxl::make_stream(7, 0, r, cfxl::stream_purpose::pilot_noise);
        const auto real = cfxl::sample_channels(net, f);
        const auto noise = cfxl::sample_pilot_noise(net.M, net.N, plan.tau_p, sigma2, n);
        const auto Ghat = cfxl::gather_estimates(cfxl::estimate_channels(net, est, real, noise), net.M, net.K, net.N);
        const auto G = cfxl::gather_estimates(real.g, net.M, net.K, net.N);
        for (std::size_t i = 0; i < cfxl::all_schemes.size(); ++i)
        {
            const auto s = cfxl::all_schemes[i];
            const auto out = cfxl::combine(s, Ghat, est, pre, opt);
            if (cfxl::is_centralized(s))
                cmom[i].accumulate(out.V, G);
            else
                dmom[i].accumulate(out.V, G);
        }
    }

    const double pl = cfxl::prelog(200, 1);
    std::printf("M=%d N=%d K=%d, %d realizations\n", net.M, net.N, net.K, num_realizations);
    for (std::size_t i = 0; i < cfxl::all_schemes.size(); ++i)
    {
        const auto s = cfxl::all_schemes[i];
        const cfxl::rvec se = cfxl::is_centralized(s)
                                  ? cfxl::uatf_se_centralized(cmom[i], powers, sigma2, pl)
                                  : cfxl::lsfd_se(dmom[i], cfxl::lsfd_weights(dmom[i], powers, sigma2), powers,
                                                  sigma2, pl);
        std::printf("  %-12s %-5s mean SE %.3f bit/s/Hz\n", cfxl::to_string(s).c_str(),
                    cfxl::is_centralized(s) ? "UatF" : "LSFD", se.mean());
    }
    return 0;
}
