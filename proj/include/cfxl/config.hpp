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

#ifndef CFXL_CONFIG_HPP
#define CFXL_CONFIG_HPP

#include "channel.hpp"
#include "combining.hpp"
#include "core.hpp"
#include "coupling.hpp"
#include "estimation.hpp"
#include "se_eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace cfxl
{
    /// All parameters of one experiment. Spacings and dipole dimensions are
    /// in wavelengths; powers in watts, except noise_dbm.
    struct ScenarioConfig
    {
        int num_bs = 4;
        int num_ue = 20;
        int nx = 4;
        int ny = 4;
        double delta_x = 0.25;
        double delta_y = 0.25;
        double carrier_frequency = 3e9;
        double area_side = 1000.0;
        double bs_height = 12.5;
        double ue_height = 1.5;
        int tau_c = 200;
        int tau_p = 1;
        double power = 0.2;
        double noise_dbm = -94.0;

        bool coupling = true;
        double load_impedance = 50.0;
        double dipole_length = 0.1;
        double wire_radius = 1e-5;
        double eta = 120.0 * pi;
        double euler_gamma = 0.577;
        ImpedanceFormulaVariant impedance_variant = ImpedanceFormulaVariant::classical;

        EstimatorKind estimator = EstimatorKind::mmse;
        std::vector<Scheme> schemes{Scheme::cmmse, Scheme::gsli_mmse, Scheme::lmmse, Scheme::lmr};
        int n_iter = 5;
        double omega = 0.0; // 0 selects the relaxation rule
        bool omega_fallback = false;

        bool standard_bound = true;
        bool standard_bound_any_estimator = false;
        StandardBoundForm standard_bound_form = StandardBoundForm::classical;

        int n_realizations = 800;
        int n_locations = 50;
        std::uint64_t seed = 1;
        int threads = 1;

        double wavelength() const { return wavelength_from_frequency(carrier_frequency); }
        double noise_power() const { return db_to_linear(noise_dbm) * 1e-3; }
        int antennas() const { return nx * ny; }

        CouplingParams coupling_params() const
        {
            const double lambda = wavelength();
            CouplingParams p;
            p.load_impedance = {load_impedance, 0.0};
            p.dipole_length = dipole_length * lambda;
            p.wire_radius = wire_radius * lambda;
            p.eta = eta;
            p.euler_gamma = euler_gamma;
            p.variant = impedance_variant;
            return p;
        }

        bool has_scheme(Scheme s) const
        {
            for (Scheme t : schemes)
                if (t == s)
                    return true;
            return false;
        }

        void validate() const
        {
            std::vector<std::string> bad;
            auto need = [&](bool ok, const char *field, const char *rule)
            {
                if (!ok)
                    bad.push_back(std::string(field) + " " + rule);
            };
            need(num_bs >= 1, "num_bs", "must be >= 1");
            need(num_ue >= 1, "num_ue", "must be >= 1");
            need(nx >= 1, "nx", "must be >= 1");
            need(ny >= 1, "ny", "must be >= 1");
            need(delta_x > 0.0, "delta_x", "must be > 0");
            need(delta_y > 0.0, "delta_y", "must be > 0");
            need(carrier_frequency > 0.0, "carrier_frequency", "must be > 0");
            need(area_side > 0.0, "area_side", "must be > 0");
            need(tau_p >= 1, "tau_p", "must be >= 1");
            need(tau_c > tau_p, "tau_c", "must exceed tau_p");
            need(power > 0.0, "power", "must be > 0");
            need(std::isfinite(noise_dbm), "noise_dbm", "must be finite");
            need(dipole_length > 0.0, "dipole_length", "must be > 0");
            need(wire_radius > 0.0, "wire_radius", "must be > 0");
            need(eta > 0.0, "eta", "must be > 0");
            need(!schemes.empty(), "schemes", "must not be empty");
            need(n_iter >= 0, "n_iter", "must be >= 0");
            need(omega == 0.0 || (omega > 0.0 && omega < 2.0), "omega", "must be 0 (auto) or in (0, 2)");
            need(n_realizations >= 1, "n_realizations", "must be >= 1");
            need(n_locations >= 1, "n_locations", "must be >= 1");
            need(threads >= 1, "threads", "must be >= 1");
            need(estimator != EstimatorKind::custom, "estimator", "must be mmse, ew_mmse or gls");
            need(!(standard_bound && estimator != EstimatorKind::mmse && !standard_bound_any_estimator),
                 "standard_bound", "requires estimator=mmse (or standard_bound_any_estimator=true)");
            if (!bad.empty())
            {
                std::string msg = "invalid configuration:";
                for (const auto &b : bad)
                    msg += "\n  " + b;
                throw config_error(msg);
            }
        }
    };

    namespace detail
    {
        inline std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        }

        inline std::string format_double(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        inline double parse_double(const std::string &key, const std::string &v)
        {
            try
            {
                std::size_t pos = 0;
                const double d = std::stod(v, &pos);
                if (pos != v.size())
                    throw std::invalid_argument(v);
                return d;
            }
            catch (const std::exception &)
            {
                throw config_error(key + ": expected a number, got '" + v + "'");
            }
        }

        inline long long parse_int(const std::string &key, const std::string &v)
        {
            try
            {
                std::size_t pos = 0;
                const long long i = std::stoll(v, &pos);
                if (pos != v.size())
                    throw std::invalid_argument(v);
                return i;
            }
            catch (const std::exception &)
            {
                throw config_error(key + ": expected an integer, got '" + v + "'");
            }
        }

        inline bool parse_bool(const std::string &key, const std::string &v)
        {
            if (v == "true" || v == "1" || v == "on" || v == "yes")
                return true;
            if (v == "false" || v == "0" || v == "off" || v == "no")
                return false;
            throw config_error(key + ": expected a boolean, got '" + v + "'");
        }

        inline std::vector<std::string> split_list(const std::string &v)
        {
            std::vector<std::string> out;
            std::string cur;
            for (char c : v)
            {
                if (c == ',' || c == ';')
                {
                    if (!trim(cur).empty())
                        out.push_back(trim(cur));
                    cur.clear();
                }
                else
                    cur.push_back(c);
            }
            if (!trim(cur).empty())
                out.push_back(trim(cur));
            return out;
        }
    }

    inline std::vector<Scheme> parse_schemes(const std::string &list)
    {
        std::vector<Scheme> out;
        for (const auto &name : detail::split_list(list))
            out.push_back(scheme_from_string(name));
        if (out.empty())
            throw config_error("schemes: empty list");
        return out;
    }

    inline EstimatorKind estimator_from_string(const std::string &s)
    {
        for (EstimatorKind k : {EstimatorKind::mmse, EstimatorKind::ew_mmse, EstimatorKind::gls})
            if (to_string(k) == s)
                return k;
        throw config_error("estimator: unknown kind '" + s + "'");
    }

    /// Sets one field from its textual key and value; unknown keys are an error.
    inline void set_config_value(ScenarioConfig &c, const std::string &key, const std::string &value)
    {
        using namespace detail;
        const std::string v = trim(value);
        auto as_int = [&] { return static_cast<int>(parse_int(key, v)); };
        auto as_dbl = [&] { return parse_double(key, v); };
        auto as_bool = [&] { return parse_bool(key, v); };

        if (key == "num_bs")
            c.num_bs = as_int();
        else if (key == "num_ue")
            c.num_ue = as_int();
        else if (key == "nx")
            c.nx = as_int();
        else if (key == "ny")
            c.ny = as_int();
        else if (key == "delta_x")
            c.delta_x = as_dbl();
        else if (key == "delta_y")
            c.delta_y = as_dbl();
        else if (key == "carrier_frequency")
            c.carrier_frequency = as_dbl();
        else if (key == "area_side")
            c.area_side = as_dbl();
        else if (key == "bs_height")
            c.bs_height = as_dbl();
        else if (key == "ue_height")
            c.ue_height = as_dbl();
        else if (key == "tau_c")
            c.tau_c = as_int();
        else if (key == "tau_p")
            c.tau_p = as_int();
        else if (key == "power")
            c.power = as_dbl();
        else if (key == "noise_dbm")
            c.noise_dbm = as_dbl();
        else if (key == "coupling")
            c.coupling = as_bool();
        else if (key == "load_impedance")
            c.load_impedance = as_dbl();
        else if (key == "dipole_length")
            c.dipole_length = as_dbl();
        else if (key == "wire_radius")
            c.wire_radius = as_dbl();
        else if (key == "eta")
            c.eta = as_dbl();
        else if (key == "euler_gamma")
            c.euler_gamma = as_dbl();
        else if (key == "impedance_variant")
        {
            if (v == "classical")
                c.impedance_variant = ImpedanceFormulaVariant::classical;
            else if (v == "as_printed")
                c.impedance_variant = ImpedanceFormulaVariant::as_printed;
            else
                throw config_error("impedance_variant: expected classical or as_printed");
        }
        else if (key == "estimator")
            c.estimator = estimator_from_string(v);
        else if (key == "schemes")
            c.schemes = parse_schemes(v);
        else if (key == "n_iter")
            c.n_iter = as_int();
        else if (key == "omega")
            c.omega = as_dbl();
        else if (key == "omega_fallback")
            c.omega_fallback = as_bool();
        else if (key == "standard_bound")
            c.standard_bound = as_bool();
        else if (key == "standard_bound_any_estimator")
            c.standard_bound_any_estimator = as_bool();
        else if (key == "standard_bound_form")
        {
            if (v == "classical")
                c.standard_bound_form = StandardBoundForm::classical;
            else if (v == "as_printed")
                c.standard_bound_form = StandardBoundForm::as_printed;
            else
                throw config_error("standard_bound_form: expected classical or as_printed");
        }
        else if (key == "n_realizations")
            c.n_realizations = as_int();
        else if (key == "n_locations")
            c.n_locations = as_int();
        else if (key == "seed")
        {
            try
            {
                std::size_t pos = 0;
                c.seed = std::stoull(v, &pos);
                if (pos != v.size())
                    throw std::invalid_argument(v);
            }
            catch (const std::exception &)
            {
                throw config_error("seed: expected an unsigned integer, got '" + v + "'");
            }
        }
        else if (key == "threads")
            c.threads = as_int();
        else
            throw config_error("unknown configuration key '" + key + "'");
    }

    /// Complete, ordered key/value echo; feeding it back through set_config_value reproduces the config.
    inline std::vector<std::pair<std::string, std::string>> config_to_key_values(const ScenarioConfig &c)
    {
        using detail::format_double;
        std::string schemes;
        for (std::size_t i = 0; i < c.schemes.size(); ++i)
            schemes += (i ? ";" : "") + to_string(c.schemes[i]);
        auto b = [](bool x) { return std::string(x ? "true" : "false"); };
        return {
            {"num_bs", std::to_string(c.num_bs)},
            {"num_ue", std::to_string(c.num_ue)},
            {"nx", std::to_string(c.nx)},
            {"ny", std::to_string(c.ny)},
            {"delta_x", format_double(c.delta_x)},
            {"delta_y", format_double(c.delta_y)},
            {"carrier_frequency", format_double(c.carrier_frequency)},
            {"area_side", format_double(c.area_side)},
            {"bs_height", format_double(c.bs_height)},
            {"ue_height", format_double(c.ue_height)},
            {"tau_c", std::to_string(c.tau_c)},
            {"tau_p", std::to_string(c.tau_p)},
            {"power", format_double(c.power)},
            {"noise_dbm", format_double(c.noise_dbm)},
            {"coupling", b(c.coupling)},
            {"load_impedance", format_double(c.load_impedance)},
            {"dipole_length", format_double(c.dipole_length)},
            {"wire_radius", format_double(c.wire_radius)},
            {"eta", format_double(c.eta)},
            {"euler_gamma", format_double(c.euler_gamma)},
            {"impedance_variant",
             c.impedance_variant == ImpedanceFormulaVariant::classical ? "classical" : "as_printed"},
            {"estimator", to_string(c.estimator)},
            {"schemes", schemes},
            {"n_iter", std::to_string(c.n_iter)},
            {"omega", format_double(c.omega)},
            {"omega_fallback", b(c.omega_fallback)},
            {"standard_bound", b(c.standard_bound)},
            {"standard_bound_any_estimator", b(c.standard_bound_any_estimator)},
            {"standard_bound_form",
             c.standard_bound_form == StandardBoundForm::classical ? "classical" : "as_printed"},
            {"n_realizations", std::to_string(c.n_realizations)},
            {"n_locations", std::to_string(c.n_locations)},
            {"seed", std::to_string(c.seed)},
            {"threads", std::to_string(c.threads)},
        };
    }

    /// Flat key=value text; '#' starts a comment.
    inline void apply_config_text(ScenarioConfig &c, std::istream &in, const std::string &source = "<config>")
    {
        std::string line;
        int lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            line = detail::trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw config_error(source + ":" + std::to_string(lineno) + ": expected key=value");
            try
            {
                set_config_value(c, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
            }
            catch (const config_error &e)
            {
                throw config_error(source + ":" + std::to_string(lineno) + ": " + e.what());
            }
        }
    }

    inline ScenarioConfig load_config_file(const std::string &path, ScenarioConfig base = {})
    {
        std::ifstream in(path);
        if (!in)
            throw config_error("cannot open configuration file '" + path + "'");
        apply_config_text(base, in, path);
        return base;
    }

    /// A figure configuration plus the parameter it sweeps (empty key for none).
    struct Preset
    {
        std::string name;
        ScenarioConfig config;
        std::string sweep_key;
        std::vector<std::string> sweep_values;
    };

    /// Figure presets. `scale` multiplies the per-side antenna counts (and N_x sweep values),
    /// rounded and clamped at 1; every other field is untouched.
    inline Preset preset(const std::string &name, double scale = 1.0)
    {
        if (!(scale > 0.0))
            throw config_error("preset: scale must be positive");
        Preset p;
        p.name = name;
        ScenarioConfig &c = p.config;
        auto all = [] { return std::vector<Scheme>(all_schemes.begin(), all_schemes.end()); };

        if (name == "fig1")
        {
            c.num_bs = 4, c.num_ue = 20, c.delta_x = c.delta_y = 0.25, c.nx = c.ny = 16;
            c.schemes = {Scheme::cmmse, Scheme::gsli_mmse, Scheme::lmmse};
            p.sweep_key = "nx";
            p.sweep_values = {"4", "8", "12", "16"};
        }
        else if (name == "fig2")
        {
            c.num_bs = 4, c.num_ue = 20, c.delta_x = c.delta_y = 0.25, c.nx = c.ny = 16;
            c.schemes = {Scheme::cmmse, Scheme::gsli_mmse, Scheme::lmmse};
            p.sweep_key = "num_bs";
            p.sweep_values = {"2", "3", "4", "5", "6"};
        }
        else if (name == "fig3")
        {
            c.num_bs = 8, c.num_ue = 20, c.delta_x = c.delta_y = 0.25, c.nx = c.ny = 8;
            c.schemes = {Scheme::cmmse, Scheme::gsli_mmse, Scheme::lmmse};
            c.standard_bound = false;
            p.sweep_key = "estimator";
            p.sweep_values = {"mmse", "ew_mmse", "gls"};
        }
        else if (name == "fig4")
        {
            c.num_bs = 8, c.num_ue = 20, c.nx = c.ny = 8, c.delta_x = c.delta_y = 0.25;
            c.schemes = {Scheme::cmmse, Scheme::gsli_mmse, Scheme::lmmse};
            p.sweep_key = "delta_x";
            p.sweep_values = {"0.5", "0.33333333333333331", "0.25", "0.20000000000000001", "0.16666666666666666",
                              "0.14285714285714285", "0.125"};
        }
        else if (name == "fig5")
        {
            c.num_bs = 6, c.num_ue = 20, c.delta_x = c.delta_y = 0.25, c.nx = c.ny = 12;
            c.schemes = {Scheme::lmmse, Scheme::si_lmmse, Scheme::lmr};
            p.sweep_key = "nx";
            p.sweep_values = {"4", "8", "12", "16"};
        }
        else if (name == "fig6")
        {
            c.num_bs = 8, c.num_ue = 10, c.delta_x = c.delta_y = 0.125, c.nx = c.ny = 8;
            c.schemes = {Scheme::lmmse, Scheme::ins_ssor, Scheme::sta_ssor, Scheme::ins_si_ssor, Scheme::lmr};
            p.sweep_key = "nx";
            p.sweep_values = {"8", "12", "16"};
        }
        else if (name == "fig7")
        {
            c.num_bs = 8, c.num_ue = 10, c.delta_x = c.delta_y = 0.125, c.nx = c.ny = 8;
            c.schemes = {Scheme::lmmse, Scheme::ins_ssor, Scheme::sta_ssor, Scheme::ins_si_ssor};
            p.sweep_key = "n_iter";
            p.sweep_values = {"1", "2", "3", "4", "5", "6", "8", "10"};
        }
        else if (name == "fig8")
        {
            c.num_bs = 6, c.num_ue = 10, c.n_iter = 5, c.n_realizations = 800, c.nx = c.ny = 8;
            c.delta_x = c.delta_y = 0.125;
            c.schemes = all();
            p.sweep_key = "nx";
            p.sweep_values = {"4", "8", "16"};
        }
        else if (name == "fig9")
        {
            c.num_bs = 4, c.num_ue = 10, c.delta_x = c.delta_y = 0.125, c.nx = c.ny = 8;
            c.schemes = all();
            c.standard_bound = false;
            p.sweep_key = "estimator";
            p.sweep_values = {"mmse", "ew_mmse"};
        }
        else
            throw config_error("unknown preset '" + name + "' (expected fig1..fig9)");

        auto scaled = [scale](int n) { return std::max(1, static_cast<int>(std::lround(n * scale))); };
        c.nx = scaled(c.nx);
        c.ny = scaled(c.ny);
        if (p.sweep_key == "nx")
            for (auto &v : p.sweep_values)
                v = std::to_string(scaled(std::stoi(v)));
        return p;
    }

    /// Applies one sweep value; a swept "nx" also sets "ny" (square arrays).
    inline ScenarioConfig apply_sweep(const Preset &p, const std::string &value)
    {
        ScenarioConfig c = p.config;
        if (p.sweep_key.empty())
            return c;
        set_config_value(c, p.sweep_key, value);
        if (p.sweep_key == "nx")
            c.ny = c.nx;
        if (p.sweep_key == "delta_x")
            c.delta_y = c.delta_x;
        return c;
    }
}

#endif
