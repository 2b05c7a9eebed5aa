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

#include <cfxl/cfxl.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace
{
    cfxl::ScenarioConfig tiny()
    {
        cfxl::ScenarioConfig c;
        c.num_bs = 2;
        c.num_ue = 3;
        c.nx = c.ny = 2;
        c.area_side = 200.0;
        c.n_realizations = 20;
        c.n_locations = 3;
        c.schemes = {cfxl::Scheme::cmmse, cfxl::Scheme::lmmse, cfxl::Scheme::lmr};
        return c;
    }
}

TEST_CASE("config defaults and validation", "[harness]")
{
    const cfxl::ScenarioConfig c;
    CHECK(c.carrier_frequency == 3e9);
    CHECK(c.tau_c == 200);
    CHECK(c.tau_p == 1);
    CHECK(c.power == 0.2);
    CHECK_THAT(c.noise_power(), Catch::Matchers::WithinRel(std::pow(10.0, -9.4) * 1e-3, 1e-12));
    CHECK(c.n_iter == 5);
    CHECK(c.n_realizations == 800);
    CHECK(c.bs_height == 12.5);
    CHECK(c.ue_height == 1.5);
    CHECK(c.load_impedance == 50.0);
    CHECK(c.euler_gamma == 0.577);
    CHECK_NOTHROW(c.validate());

    cfxl::ScenarioConfig bad;
    bad.tau_p = 200;
    bad.power = -1.0;
    bad.schemes.clear();
    try
    {
        bad.validate();
        FAIL("expected a config_error");
    }
    catch (const cfxl::config_error &e)
    {
        const std::string msg = e.what();
        CHECK(msg.find("tau_c") != std::string::npos);
        CHECK(msg.find("power") != std::string::npos);
        CHECK(msg.find("schemes") != std::string::npos);
    }

    cfxl::ScenarioConfig gls;
    gls.estimator = cfxl::EstimatorKind::gls;
    CHECK_THROWS_AS(gls.validate(), cfxl::config_error);
    gls.standard_bound_any_estimator = true;
    CHECK_NOTHROW(gls.validate());
}

TEST_CASE("config text round-trip", "[harness]")
{
    cfxl::ScenarioConfig c = tiny();
    c.delta_x = 0.125;
    c.estimator = cfxl::EstimatorKind::ew_mmse;
    c.standard_bound = false;
    c.seed = 123456789012345ULL;
    c.schemes = {cfxl::Scheme::gsli_mmse, cfxl::Scheme::ins_si_ssor};
    std::ostringstream os;
    for (const auto &[k, v] : cfxl::config_to_key_values(c))
        os << k << " = " << v << "\n";
    std::istringstream is("# comment\n" + os.str());
    cfxl::ScenarioConfig back;
    cfxl::apply_config_text(back, is);
    CHECK(cfxl::config_to_key_values(back) == cfxl::config_to_key_values(c));

    cfxl::ScenarioConfig x;
    CHECK_THROWS_AS(cfxl::set_config_value(x, "num_antennas", "4"), cfxl::config_error);
    CHECK_THROWS_AS(cfxl::set_config_value(x, "num_bs", "four"), cfxl::config_error);
    CHECK_THROWS_AS(cfxl::set_config_value(x, "schemes", "cmmse;zf"), cfxl::config_error);
    std::istringstream junk("num_bs 4\n");
    CHECK_THROWS_AS(cfxl::apply_config_text(x, junk), cfxl::config_error);
}

TEST_CASE("figure presets", "[harness]")
{
    const auto f1 = cfxl::preset("fig1");
    CHECK(f1.config.num_bs == 4);
    CHECK(f1.config.num_ue == 20);
    CHECK(f1.config.delta_x == 0.25);
    CHECK(f1.sweep_key == "nx");
    const auto f6 = cfxl::preset("fig6");
    CHECK(f6.config.num_bs == 8);
    CHECK(f6.config.num_ue == 10);
    CHECK(f6.config.delta_x == 0.125);

    const auto half = cfxl::preset("fig1", 0.5);
    CHECK(half.config.nx == f1.config.nx / 2);
    CHECK(half.config.ny == f1.config.ny / 2);
    for (std::size_t i = 0; i < f1.sweep_values.size(); ++i)
        CHECK(std::stoi(half.sweep_values[i]) == std::stoi(f1.sweep_values[i]) / 2);
    auto same = half.config;
    same.nx = f1.config.nx;
    same.ny = f1.config.ny;
    CHECK(cfxl::config_to_key_values(same) == cfxl::config_to_key_values(f1.config));

    const auto swept = cfxl::apply_sweep(f1, "8");
    CHECK(swept.nx == 8);
    CHECK(swept.ny == 8);
    const auto f4 = cfxl::apply_sweep(cfxl::preset("fig4"), "0.125");
    CHECK(f4.delta_y == 0.125);

    for (const char *name : {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"})
    {
        const auto p = cfxl::preset(name);
        for (const auto &v : p.sweep_values)
            CHECK_NOTHROW(cfxl::apply_sweep(p, v).validate());
    }
    CHECK_THROWS_AS(cfxl::preset("fig10"), cfxl::config_error);
    CHECK_THROWS_AS(cfxl::preset("fig1", 0.0), cfxl::config_error);
}

TEST_CASE("complexity model", "[harness]")
{
    using cfxl::Scheme;
    const auto g = cfxl::complexity_estimate(Scheme::gsli_mmse, 6, 64, 10, 800, 5);
    CHECK(g.combining == 6ull * 64 * 64 * 64 + 6ull * 64 * 64 * 10 * 800 + 1000 + 6ull * 64 * 100 * 800);
    CHECK(g.precompute == 216ull * 64 * 64 * 64 * 100);
    const auto c = cfxl::complexity_estimate(Scheme::cmmse, 6, 64, 10, 800, 5);
    CHECK(c.combining == 36ull * 64 * 64 * 10 * 800 + 216ull * 64 * 64 * 64 * 800);

    for (Scheme s : cfxl::all_schemes)
    {
        const auto base = cfxl::complexity_estimate(s, 3, 16, 4, 100, 5);
        for (int axis = 0; axis < 5; ++axis)
        {
            std::uint64_t p[5] = {3, 16, 4, 100, 5};
            p[axis] *= 2;
            const auto up = cfxl::complexity_estimate(s, p[0], p[1], p[2], p[3], p[4]);
            CHECK(up.total() >= base.total());
        }
    }
    for (Scheme s : {Scheme::ins_ssor, Scheme::sta_ssor})
        CHECK(cfxl::complexity_estimate(s, 6, 64, 10, 800, 0).combining == 0);
    CHECK(cfxl::complexity_estimate(Scheme::ins_si_ssor, 6, 64, 10, 800, 0).combining == 6ull * 64 * 64 * 64);

    // Every N_r-dependent term is linear in N_r.
    for (Scheme s : cfxl::all_schemes)
    {
        const auto a = cfxl::complexity_estimate(s, 4, 16, 8, 100, 3);
        const auto b = cfxl::complexity_estimate(s, 4, 16, 8, 200, 3);
        const auto z = cfxl::complexity_estimate(s, 4, 16, 8, 1, 3);
        const std::uint64_t fixed = z.combining - (a.combining - z.combining) / 99;
        CHECK(b.combining - fixed == 2 * (a.combining - fixed));
        CHECK(a.precompute == b.precompute);
    }
    CHECK_THROWS_AS(cfxl::complexity_estimate(Scheme::lmr, 0, 16, 8, 100, 3), cfxl::domain_error);
}

TEST_CASE("experiments are deterministic", "[harness]")
{
    auto c = tiny();
    const auto a = cfxl::run_experiment(c);
    const auto b = cfxl::run_experiment(c);
    CHECK(a.report == b.report);
    c.threads = 3;
    const auto t = cfxl::run_experiment(c);
    CHECK(t.report.rows == a.report.rows);

    // Adding a scheme leaves the draws, and so the other schemes, untouched.
    auto more = tiny();
    more.schemes.push_back(cfxl::Scheme::si_lmmse);
    const auto m = cfxl::run_experiment(more);
    for (const auto &row : a.report.rows)
    {
        const auto *r = m.report.find(row.scheme, row.bound, row.ue_index);
        REQUIRE(r != nullptr);
        CHECK(*r == row);
    }

    auto other = tiny();
    other.seed = 2;
    CHECK_FALSE(cfxl::run_experiment(other).report.rows == a.report.rows);
}

TEST_CASE("report layout", "[harness]")
{
    const auto res = cfxl::run_experiment(tiny());
    // 3 schemes: CMMSE with two bounds, the rest with LSFD; UE average plus K UEs each.
    CHECK(res.report.rows.size() == 4u * 4u);
    for (const auto &r : res.report.rows)
    {
        CHECK(r.se > 0.0);
        CHECK(std::isfinite(r.stderr_));
    }
    const auto &smp = res.sample(cfxl::Scheme::cmmse, cfxl::Bound::uatf);
    CHECK(smp.values.rows() == 3);
    CHECK_THAT(res.report.find("CMMSE", "uatf", -1)->se,
               Catch::Matchers::WithinRel(smp.values.mean(), 1e-12));
    const auto d = cfxl::paired_difference(smp, smp);
    CHECK(d.first == 0.0);
    CHECK(d.second == 0.0);
    CHECK_THROWS_AS(res.sample(cfxl::Scheme::gsli_mmse, cfxl::Bound::lsfd), cfxl::domain_error);
}

TEST_CASE("smoke run with one UE and one BS", "[harness]")
{
    cfxl::ScenarioConfig c;
    c.num_bs = 1;
    c.num_ue = 1;
    c.nx = c.ny = 2;
    c.schemes = {cfxl::Scheme::lmr};
    c.n_realizations = 10;
    c.n_locations = 1;
    const auto res = cfxl::run_experiment(c);
    const auto *avg = res.report.find("LMR", "lsfd", -1);
    REQUIRE(avg != nullptr);
    CHECK(avg->se > 0.0);
    CHECK(std::isnan(avg->stderr_));
}

TEST_CASE("CSV round-trip", "[harness]")
{
    const auto res = cfxl::run_experiment(tiny());
    const std::string text = cfxl::to_csv(res.report);
    CHECK(text.rfind("#meta,", 0) == 0);
    CHECK(text.find(cfxl::csv_header) != std::string::npos);
    CHECK(cfxl::from_csv(text) == res.report);

    cfxl::SEReport nan_rep;
    nan_rep.meta = {{"seed", "1"}};
    nan_rep.rows.push_back({"LMR", "lsfd", -1, 0.1 + 0.2, std::numeric_limits<double>::quiet_NaN()});
    CHECK(cfxl::from_csv(cfxl::to_csv(nan_rep)) == nan_rep);

    CHECK_THROWS_AS(cfxl::from_csv(""), cfxl::config_error);
    CHECK_THROWS_AS(cfxl::from_csv("#meta\nscheme,bound\n"), cfxl::config_error);
    CHECK_THROWS_AS(cfxl::from_csv(std::string("#meta\n") + cfxl::csv_header + "\nLMR,lsfd,0,x,1\n"),
                    cfxl::config_error);

    std::ostringstream os;
    cfxl::write_samples_csv(os, res);
    CHECK(os.str().rfind("scheme,bound,location,ue_index,se_bits_per_hz\n", 0) == 0);
}
