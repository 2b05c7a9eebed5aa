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

#ifndef CFXL_SPECIALFN_HPP
#define CFXL_SPECIALFN_HPP

#include "core.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace cfxl
{
    inline constexpr double euler_mascheroni = 0.57721566490153286060651209008240243;

    namespace detail
    {
        // Below this argument the power series is used, above it the continued fraction.
        inline constexpr double sici_switch = 4.0;

        struct sici_pair
        {
            double si;
            double ci;
        };

        // Continued fraction for E1(ix) evaluated with the modified Lentz method.
        // Valid (and fast) for x well away from zero.
        inline sici_pair sici_continued_fraction(double x)
        {
            constexpr double tiny = 1.0e-300;
            constexpr double eps = 1.0e-17;
            constexpr int max_iter = 500;

            std::complex<double> b(1.0, x);
            std::complex<double> c(1.0 / tiny, 0.0);
            std::complex<double> d = 1.0 / b;
            std::complex<double> h = d;
            for (int i = 2; i <= max_iter; ++i)
            {
                const double a = -static_cast<double>((i - 1) * (i - 1));
                b += 2.0;
                d = 1.0 / (a * d + b);
                c = b + a / c;
                const std::complex<double> del = c * d;
                h *= del;
                if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps)
                    break;
            }
            h *= std::complex<double>(std::cos(x), -std::sin(x));
            return {0.5 * pi + h.imag(), -h.real()};
        }

        inline double si_series(double x)
        {
            const double x2 = x * x;
            double term = x; // x^(2k+1) / (2k+1)!
            double sum = x;
            for (int k = 1; k < 60; ++k)
            {
                term *= -x2 / static_cast<double>((2 * k) * (2 * k + 1));
                const double contrib = term / static_cast<double>(2 * k + 1);
                sum += contrib;
                if (std::abs(contrib) < 1e-18 * std::abs(sum))
                    break;
            }
            return sum;
        }

        inline double ci_series(double x)
        {
            const double x2 = x * x;
            double term = 1.0; // x^(2k) / (2k)!
            double sum = 0.0;
            for (int k = 1; k < 60; ++k)
            {
                term *= -x2 / static_cast<double>((2 * k - 1) * (2 * k));
                const double contrib = term / static_cast<double>(2 * k);
                sum += contrib;
                if (std::abs(contrib) < 1e-18 * (std::abs(sum) + 1e-300))
                    break;
            }
            return euler_mascheroni + std::log(x) + sum;
        }
    }

    /// Sine integral Si(x) = int_0^x sin(t)/t dt.
    ///
    /// Power series up to x = 4, continued fraction beyond; absolute error
    /// stays below 1e-12 over the whole real line. Si is odd, so negative
    /// arguments are accepted. Throws domain_error for NaN or infinite input.
    inline double sine_integral(double x)
    {
        if (!std::isfinite(x))
            throw domain_error("sine_integral: argument must be finite");
        if (x < 0.0)
            return -sine_integral(-x);
        if (x == 0.0)
            return 0.0;
        if (x <= detail::sici_switch)
            return detail::si_series(x);
        return detail::sici_continued_fraction(x).si;
    }

    /// Cosine integral Ci(x) = gamma + ln(x) + int_0^x (cos(t) - 1)/t dt, x > 0.
    inline double cosine_integral(double x)
    {
        if (!std::isfinite(x) || x <= 0.0)
            throw domain_error("cosine_integral: argument must be finite and positive");
        if (x <= detail::sici_switch)
            return detail::ci_series(x);
        return detail::sici_continued_fraction(x).ci;
    }
}

#endif
