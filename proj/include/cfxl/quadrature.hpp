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

#ifndef CFXL_QUADRATURE_HPP
#define CFXL_QUADRATURE_HPP

#include "core.hpp"

#include <cmath>
#include <vector>

namespace cfxl
{
    struct GaussLegendreRule
    {
        std::vector<double> nodes;   // on [-1, 1], ascending
        std::vector<double> weights; // sum to 2
    };

    /// n-point Gauss-Legendre rule, nodes found by Newton iteration on P_n.
    inline GaussLegendreRule gauss_legendre(int n)
    {
        if (n < 1)
            throw domain_error("gauss_legendre: need at least one node");
        GaussLegendreRule rule;
        rule.nodes.resize(n);
        rule.weights.resize(n);
        const int half = (n + 1) / 2;
        for (int i = 0; i < half; ++i)
        {
            double x = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it)
            {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k)
                {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16)
                    break;
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            rule.nodes[i] = -x;
            rule.nodes[n - 1 - i] = x;
            rule.weights[i] = w;
            rule.weights[n - 1 - i] = w;
        }
        if (n % 2 == 1)
            rule.nodes[n / 2] = 0.0;
        return rule;
    }

    /// Integrate f over [a, b] with the given rule.
    template <typename F>
    double integrate(const GaussLegendreRule &rule, F &&f, double a, double b)
    {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
        return half * sum;
    }
}

#endif
