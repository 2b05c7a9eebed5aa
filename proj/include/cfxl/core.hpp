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

#ifndef CFXL_CORE_HPP
#define CFXL_CORE_HPP

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <iostream>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cfxl
{
    using cplx = std::complex<double>;
    using cvec = Eigen::VectorXcd;
    using cmat = Eigen::MatrixXcd;
    using rvec = Eigen::VectorXd;
    using rmat = Eigen::MatrixXd;
    using vec3 = Eigen::Vector3d;

    inline constexpr double pi = std::numbers::pi;
    inline constexpr double speed_of_light = 299792458.0;

    // Error hierarchy. Everything thrown by the library derives from cfxl::error.
    class error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class domain_error : public error
    {
    public:
        using error::error;
    };

    class index_error : public error
    {
    public:
        using error::error;
    };

    class degenerate_geometry : public error
    {
    public:
        using error::error;
    };

    class singular_configuration : public error
    {
    public:
        using error::error;
    };

    class linear_algebra_error : public error
    {
    public:
        linear_algebra_error(const std::string &what, double condition = 0.0)
            : error(what), condition_(condition) {}

        // Estimated condition number of the offending matrix, 0 if unknown.
        double condition() const noexcept { return condition_; }

    private:
        double condition_;
    };

    class shape_error : public error
    {
    public:
        using error::error;
    };

    class out_of_regime : public error
    {
    public:
        using error::error;
    };

    class validity_error : public error
    {
    public:
        using error::error;
    };

    class config_error : public error
    {
    public:
        using error::error;
    };

    // Warning sink. Defaults to stderr; tests and the CLI may replace it.
    using warning_handler = std::function<void(const std::string &)>;

    namespace detail
    {
        inline warning_handler &warning_sink()
        {
            static warning_handler handler = [](const std::string &msg)
            { std::cerr << "cfxl warning: " << msg << '\n'; };
            return handler;
        }

        inline std::mutex &warning_mutex()
        {
            static std::mutex m;
            return m;
        }
    }

    inline warning_handler set_warning_handler(warning_handler handler)
    {
        std::lock_guard lock(detail::warning_mutex());
        auto previous = std::move(detail::warning_sink());
        detail::warning_sink() = std::move(handler);
        return previous;
    }

    inline void warn(const std::string &msg)
    {
        std::lock_guard lock(detail::warning_mutex());
        if (detail::warning_sink())
            detail::warning_sink()(msg);
    }

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

    inline double wavelength_from_frequency(double f_c) { return speed_of_light / f_c; }

    inline double wavenumber(double wavelength) { return 2.0 * pi / wavelength; }

    // Hermitian part; removes rounding asymmetry from products like A B A^H.
    template <typename Derived>
    cmat hermitian_part(const Eigen::MatrixBase<Derived> &m)
    {
        return 0.5 * (m + m.adjoint());
    }

    template <typename Derived>
    bool all_finite(const Eigen::MatrixBase<Derived> &m)
    {
        return m.allFinite();
    }
}

#endif
