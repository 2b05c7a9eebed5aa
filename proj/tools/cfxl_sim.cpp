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

// Monte-Carlo spectral-efficiency simulator.
//
//   cfxl_sim --preset fig1 --scale 0.25 --locations 10 --out fig1.csv
//   cfxl_sim --config configs/desk.cfg --schemes CMMSE,LMMSE --out run.csv --emit-plot-data

#include <cfxl/cfxl.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace
{
    struct Options
    {
        std::string config_path;
        std::string preset_name;
        double scale = 1.0;
        std::string schemes;
        std::optional<std::uint64_t> seed;
        std::optional<int> locations;
        std::optional<int> realizations;
        std::optional<int> threads;
        std::vector<std::string> overrides;
        std::string sweep_value;
        std::string out;
        bool emit_plot_data = false;
        bool quiet = false;
    };

    std::string with_suffix(const std::string &path, const std::string &suffix)
    {
        const std::filesystem::path p(path);
        return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
    }

    void print_summary(const cfxl::ExperimentResult &res, std::ostream &os)
    {
        for (const auto &r : res.report.rows)
            if (r.ue_index == -1)
                os << "  " << r.scheme << " [" << r.bound << "]: " << r.se << " bit/s/Hz (stderr " << r.stderr_
                   << ")\n";
        for (const auto &c : res.complexity)
            os << "  complexity " << cfxl::to_string(c.scheme) << ": combining " << c.combining << ", precompute "
               << c.precompute << "\n";
    }

    void run_one(const cfxl::ScenarioConfig &cfg, const Options &o, const std::string &out_path)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto res = cfxl::run_experiment(cfg);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.quiet)
        {
            std::cerr << "M=" << cfg.num_bs << " K=" << cfg.num_ue << " N=" << cfg.nx << "x" << cfg.ny
                      << " locations=" << cfg.n_locations << " realizations=" << cfg.n_realizations << " (" << secs
                      << " s)\n";
            print_summary(res, std::cerr);
        }
        if (out_path.empty())
        {
            cfxl::write_csv(std::cout, res.report);
            return;
        }
        std::ofstream f(out_path);
        if (!f)
            throw cfxl::config_error("cannot write '" + out_path + "'");
        cfxl::write_csv(f, res.report);
        if (o.emit_plot_data)
        {
            std::ofstream s(with_suffix(out_path, "_samples"));
            cfxl::write_samples_csv(s, res);
        }
    }

    cfxl::ScenarioConfig apply_overrides(cfxl::ScenarioConfig c, const Options &o)
    {
        if (!o.schemes.empty())
            c.schemes = cfxl::parse_schemes(o.schemes);
        if (o.seed)
            c.seed = *o.seed;
        if (o.locations)
            c.n_locations = *o.locations;
        if (o.realizations)
            c.n_realizations = *o.realizations;
        if (o.threads)
            c.threads = *o.threads;
        for (const auto &kv : o.overrides)
        {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw cfxl::config_error("--set expects key=value, got '" + kv + "'");
            cfxl::set_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
        }
        return c;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Uplink spectral-efficiency simulator for near-field cell-free XL-MIMO"};
    Options o;
    auto *cfg_opt = app.add_option("--config", o.config_path, "key=value configuration file")->check(CLI::ExistingFile);
    app.add_option("--preset", o.preset_name, "figure preset: fig1 .. fig9")->excludes(cfg_opt);
    app.add_option("--scale", o.scale, "scale factor for the array side lengths of a preset")
        ->check(CLI::PositiveNumber);
    app.add_option("--sweep-value", o.sweep_value, "run a single value of the preset sweep");
    app.add_option("--schemes", o.schemes, "comma- or semicolon-separated combiner list");
    app.add_option("--seed", o.seed, "master seed");
    app.add_option("--locations", o.locations, "location draws (default 50)")->check(CLI::PositiveNumber);
    app.add_option("--realizations", o.realizations, "channel realizations per location")
        ->check(CLI::PositiveNumber);
    app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--set", o.overrides, "override one key, e.g. --set num_ue=10 (repeatable)");
    app.add_option("--out", o.out, "CSV output path (stdout when omitted)");
    app.add_flag("--emit-plot-data", o.emit_plot_data, "also write per-location samples next to --out");
    app.add_flag("-q,--quiet", o.quiet, "no progress on stderr");
    CLI11_PARSE(app, argc, argv);

    try
    {
        if (o.emit_plot_data && o.out.empty())
            throw cfxl::config_error("--emit-plot-data needs --out");
        if (o.preset_name.empty())
        {
            cfxl::ScenarioConfig c;
            if (!o.config_path.empty())
                c = cfxl::load_config_file(o.config_path);
            run_one(apply_overrides(c, o), o, o.out);
            return 0;
        }

        const auto p = cfxl::preset(o.preset_name, o.scale);
        std::vector<std::string> values = p.sweep_values;
        if (!o.sweep_value.empty())
            values = {o.sweep_value};
        for (const auto &v : values)
        {
            const auto c = apply_overrides(cfxl::apply_sweep(p, v), o);
            if (!o.quiet)
                std::cerr << p.name << ": " << p.sweep_key << " = " << v << "\n";
            const std::string path = o.out.empty() || values.size() == 1
                                         ? o.out
                                         : with_suffix(o.out, "_" + p.sweep_key + "-" + v);
            run_one(c, o, path);
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
