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

#ifndef CFXL_EXPERIMENT_HPP
#define CFXL_EXPERIMENT_HPP

#include "channel.hpp"
#include "combining.hpp"
#include "complexity.hpp"
#include "config.hpp"
#include "core.hpp"
#include "estimation.hpp"
#include "geometry.hpp"
#include "network.hpp"
#include "rng.hpp"
#include "se_eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace cfxl
{
    /// One CSV row. ue_index -1 holds the average over UEs.
    struct SERow
    {
        std::string scheme;
        std::string bound;
        int ue_index = 0;
        double se = 0.0;
        double stderr_ = 0.0;

        bool operator==(const SERow &o) const
        {
            auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
            return scheme == o.scheme && bound == o.bound && ue_index == o.ue_index && same(se, o.se) &&
                   same(stderr_, o.stderr_);
        }
    };

    struct SEReport
    {
        std::vector<std::pair<std::string, std::string>> meta;
        std::vector<SERow> rows;

        bool operator==(const SEReport &o) const { return meta == o.meta && rows == o.rows; }

        const SERow *find(const std::string &scheme, const std::string &bound, int ue_index) const
        {
            for (const auto &r : rows)
                if (r.scheme == scheme && r.bound == bound && r.ue_index == ue_index)
                    return &r;
            return nullptr;
        }
    };

    /// Per-location SE values: rows are location draws, columns UEs.
    struct SESamples
    {
        Scheme scheme = Scheme::lmr;
        Bound bound = Bound::lsfd;
        rmat values;
    };

    struct ExperimentResult
    {
        ScenarioConfig config;
        SEReport report;
        std::vector<SESamples> samples;
        std::vector<ComplexityEstimate> complexity;

        const SESamples &sample(Scheme s, Bound b) const
        {
            for (const auto &x : samples)
                if (x.scheme == s && x.bound == b)
                    return x;
            throw domain_error("ExperimentResult: no samples for " + to_string(s) + "/" + to_string(b));
        }
    };

    /// Bounds evaluated for a scheme: centralized schemes get UatF (plus the standard
    /// bound when enabled), distributed schemes get LSFD.
    inline std::vector<Bound> bounds_for(Scheme s, const ScenarioConfig &c)
    {
        if (is_centralized(s))
        {
            if (c.standard_bound)
                return {Bound::uatf, Bound::standard};
            return {Bound::uatf};
        }
        return {Bound::lsfd};
    }

    struct LocationResult
    {
        std::vector<rvec> se; // aligned with the (scheme, bound) slot list
    };

    namespace detail
    {
        struct Slot
        {
            Scheme scheme;
            Bound bound;
        };

        inline std::vector<Slot> slots_for(const ScenarioConfig &c)
        {
            std::vector<Slot> out;
            for (Scheme s : c.schemes)
                for (Bound b : bounds_for(s, c))
                    out.push_back({s, b});
            return out;
        }

        inline std::vector<cmat> true_channels(const ChannelRealization &real, int M, int K, int N)
        {
            return gather_estimates(real.g, M, K, N);
        }
    }

    /// Runs one location draw: statistics, N_r realizations, all schemes and bounds.
    inline LocationResult run_location(const ScenarioConfig &c, int location)
    {
        const double lambda = c.wavelength();
        const double sigma2 = c.noise_power();
        const auto loc = static_cast<std::uint64_t>(location);

        PlacementParams pp;
        pp.num_bs = c.num_bs;
        pp.num_ue = c.num_ue;
        pp.nx = c.nx;
        pp.ny = c.ny;
        pp.delta_x = c.delta_x * lambda;
        pp.delta_y = c.delta_y * lambda;
        pp.area_side = c.area_side;
        pp.bs_height = c.bs_height;
        pp.ue_height = c.ue_height;
        auto layout_rng = make_stream(c.seed, loc, 0, stream_purpose::layout);
        const Layout layout = place_scenario(pp, layout_rng);

        std::optional<CouplingParams> coupling;
        if (c.coupling)
            coupling = c.coupling_params();
        const NetworkStats net = build_network_stats(layout, lambda, PropagationParams{}, coupling);
        const PilotPlan plan = assign_pilots(c.num_ue, c.tau_p);
        const rvec powers = rvec::Constant(c.num_ue, c.power);
        const EstimationStatistics est = estimation_statistics(net, plan, powers, sigma2, c.estimator);
        const CombiningPrecompute pre =
            prepare_combining(net, est, c.has_scheme(Scheme::gsli_mmse), c.has_scheme(Scheme::si_cmmse));

        CombineOptions opt;
        opt.n_iter = c.n_iter;
        if (c.omega > 0.0)
            opt.omega = c.omega;
        opt.omega_fallback = c.omega_fallback;

        const auto slots = detail::slots_for(c);
        const int M = net.M, K = net.K, N = net.N;
        std::vector<CentralizedMoments> cmom;
        std::vector<StandardBoundAccumulator> sacc;
        std::vector<DistributedMoments> dmom;
        for (Scheme s : c.schemes)
        {
            cmom.emplace_back(K);
            sacc.emplace_back(K);
            dmom.emplace_back(is_centralized(s) ? 0 : M, is_centralized(s) ? 0 : K);
        }
        const std::vector<cmat> noise_cov = standard_noise_covariance(est);

        for (int r = 0; r < c.n_realizations; ++r)
        {
            const auto rr = static_cast<std::uint64_t>(r);
            auto fading_rng = make_stream(c.seed, loc, rr, stream_purpose::small_scale_fading);
            auto noise_rng = make_stream(c.seed, loc, rr, stream_purpose::pilot_noise);
            const ChannelRealization real = sample_channels(net, fading_rng);
            const auto noise = sample_pilot_noise(M, N, c.tau_p, sigma2, noise_rng);
            const auto ghat = estimate_channels(net, est, real, noise);
            const auto Ghat = gather_estimates(ghat, M, K, N);
            const auto G = detail::true_channels(real, M, K, N);

            for (std::size_t i = 0; i < c.schemes.size(); ++i)
            {
                const Scheme s = c.schemes[i];
                const CombinerOutput out = combine(s, Ghat, est, pre, opt);
                if (is_centralized(s))
                {
                    cmom[i].accumulate(out.V, G);
                    if (c.standard_bound)
                        sacc[i].accumulate(standard_sinr(out.V, Ghat, noise_cov, powers, c.standard_bound_form));
                }
                else
                    dmom[i].accumulate(out.V, G);
            }
        }

        const double pl = prelog(c.tau_c, c.tau_p);
        LocationResult res;
        for (const auto &slot : slots)
        {
            std::size_t i = 0;
            while (c.schemes[i] != slot.scheme)
                ++i;
            switch (slot.bound)
            {
            case Bound::uatf:
                res.se.push_back(uatf_se_centralized(cmom[i], powers, sigma2, pl));
                break;
            case Bound::standard:
                res.se.push_back(sacc[i].se(pl));
                break;
            case Bound::lsfd:
                res.se.push_back(lsfd_se(dmom[i], lsfd_weights(dmom[i], powers, sigma2), powers, sigma2, pl));
                break;
            }
        }
        return res;
    }

    namespace detail
    {
        // Mean and standard error of the mean over rows; stderr is NaN with one row.
        inline std::pair<double, double> mean_stderr(const rvec &x)
        {
            const double n = static_cast<double>(x.size());
            const double mean = x.mean();
            if (x.size() < 2)
                return {mean, std::numeric_limits<double>::quiet_NaN()};
            const double var = (x.array() - mean).square().sum() / (n - 1.0);
            return {mean, std::sqrt(var / n)};
        }
    }

    /// Mean over locations of a per-location paired difference (a - b), averaged over UEs,
    /// with its standard error.
    inline std::pair<double, double> paired_difference(const SESamples &a, const SESamples &b)
    {
        if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols())
            throw shape_error("paired_difference: sample shapes differ");
        return detail::mean_stderr((a.values - b.values).rowwise().mean());
    }

    /// Deterministic given the seed; locations run in parallel on `threads` workers but each
    /// location is computed independently and stored by index.
    inline ExperimentResult run_experiment(const ScenarioConfig &c)
    {
        c.validate();
        if (c.standard_bound)
            check_standard_bound_validity(c.estimator, c.standard_bound_any_estimator);
        if (c.omega == 0.0)
            for (Scheme s : c.schemes)
                if (s == Scheme::ins_ssor || s == Scheme::sta_ssor || s == Scheme::ins_si_ssor)
                {
                    ssor_relaxation(c.num_ue, c.antennas(), c.omega_fallback);
                    break;
                }

        std::vector<LocationResult> per_loc(static_cast<std::size_t>(c.n_locations));
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&]
        {
            for (int l = next++; l < c.n_locations; l = next++)
            {
                try
                {
                    per_loc[static_cast<std::size_t>(l)] = run_location(c, l);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next = c.n_locations;
                }
            }
        };
        const int nthreads = std::min(c.threads, c.n_locations);
        if (nthreads <= 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (int t = 0; t < nthreads; ++t)
                pool.emplace_back(worker);
            for (auto &t : pool)
                t.join();
        }
        if (failure)
            std::rethrow_exception(failure);

        ExperimentResult res;
        res.config = c;
        res.report.meta = config_to_key_values(c);
        const auto slots = detail::slots_for(c);
        for (std::size_t i = 0; i < slots.size(); ++i)
        {
            SESamples smp{slots[i].scheme, slots[i].bound, rmat(c.n_locations, c.num_ue)};
            for (int l = 0; l < c.n_locations; ++l)
                smp.values.row(l) = per_loc[static_cast<std::size_t>(l)].se[i].transpose();
            const std::string sname = to_string(smp.scheme), bname = to_string(smp.bound);
            const auto [avg, avg_err] = detail::mean_stderr(smp.values.rowwise().mean());
            res.report.rows.push_back({sname, bname, -1, avg, avg_err});
            for (int k = 0; k < c.num_ue; ++k)
            {
                const auto [m, e] = detail::mean_stderr(smp.values.col(k));
                res.report.rows.push_back({sname, bname, k, m, e});
            }
            res.samples.push_back(std::move(smp));
        }
        for (Scheme s : c.schemes)
            res.complexity.push_back(complexity_estimate(s, c.num_bs, c.antennas(), c.num_ue, c.n_realizations,
                                                         c.n_iter));
        return res;
    }

    // ---- CSV ---------------------------------------------------------------

    inline constexpr const char *csv_header = "scheme,bound,ue_index,se_bits_per_hz,stderr";

    /// First line: "#meta" followed by key=value cells; then the header and one row per entry.
    inline void write_csv(std::ostream &os, const SEReport &report)
    {
        os << "#meta";
        for (const auto &[k, v] : report.meta)
            os << ',' << k << '=' << v;
        os << '\n' << csv_header << '\n';
        for (const auto &r : report.rows)
            os << r.scheme << ',' << r.bound << ',' << r.ue_index << ',' << detail::format_double(r.se) << ','
               << detail::format_double(r.stderr_) << '\n';
    }

    inline std::string to_csv(const SEReport &report)
    {
        std::ostringstream os;
        write_csv(os, report);
        return os.str();
    }

    inline SEReport read_csv(std::istream &is)
    {
        auto split = [](const std::string &line)
        {
            std::vector<std::string> cells;
            std::string cur;
            for (char ch : line)
            {
                if (ch == ',')
                {
                    cells.push_back(cur);
                    cur.clear();
                }
                else if (ch != '\r')
                    cur.push_back(ch);
            }
            cells.push_back(cur);
            return cells;
        };
        auto number = [](const std::string &s)
        {
            char *end = nullptr;
            const double d = std::strtod(s.c_str(), &end);
            if (s.empty() || *end != '\0')
                throw config_error("read_csv: bad number '" + s + "'");
            return d;
        };

        SEReport rep;
        std::string line;
        if (!std::getline(is, line))
            throw config_error("read_csv: empty input");
        auto meta = split(line);
        if (meta.empty() || meta[0] != "#meta")
            throw config_error("read_csv: missing #meta row");
        for (std::size_t i = 1; i < meta.size(); ++i)
        {
            const auto eq = meta[i].find('=');
            if (eq == std::string::npos)
                throw config_error("read_csv: bad meta cell '" + meta[i] + "'");
            rep.meta.emplace_back(meta[i].substr(0, eq), meta[i].substr(eq + 1));
        }
        if (!std::getline(is, line))
            throw config_error("read_csv: missing column header");
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line != csv_header)
            throw config_error("read_csv: missing column header");
        while (std::getline(is, line))
        {
            if (line.empty() || line == "\r")
                continue;
            const auto cells = split(line);
            if (cells.size() != 5)
                throw config_error("read_csv: expected 5 columns in '" + line + "'");
            rep.rows.push_back({cells[0], cells[1], static_cast<int>(number(cells[2])), number(cells[3]),
                                number(cells[4])});
        }
        return rep;
    }

    inline SEReport from_csv(const std::string &text)
    {
        std::istringstream is(text);
        return read_csv(is);
    }

    /// Per-location samples for plotting: scheme,bound,location,ue_index,se_bits_per_hz.
    inline void write_samples_csv(std::ostream &os, const ExperimentResult &res)
    {
        os << "scheme,bound,location,ue_index,se_bits_per_hz\n";
        for (const auto &s : res.samples)
            for (Eigen::Index l = 0; l < s.values.rows(); ++l)
                for (Eigen::Index k = 0; k < s.values.cols(); ++k)
                    os << to_string(s.scheme) << ',' << to_string(s.bound) << ',' << l << ',' << k << ','
                       << detail::format_double(s.values(l, k)) << '\n';
    }
}

#endif
