// SPDX-License-Identifier: Apache-2.0
//
// subnyq - capacity of LTI Gaussian channels under sub-Nyquist sampling
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

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "subnyq/errors.hpp"
#include "subnyq/integrate.hpp"
#include "subnyq/spectral_set.hpp"
#include "subnyq/spectrum.hpp"

namespace subnyq
{

// One parallel sub-channel seen by the water-filling solver: an SNR gain
// (dimensionless) carrying `weight` Hz of spectral width.
struct GainComponent
{
    double gain;
    double weight;
};

struct Allocation
{
    int component;        // index into the input component list
    double weight;        // Hz
    double power_density; // [nu - 1/gain]^+, PSD units
};

// Water-filling result. nu is the water level; every component with
// positive allocated power has nu > 1/gain, every idle component has
// nu <= 1/gain, and sum(weight * power_density) == P up to round-off.
struct WaterfillSolution
{
    double nu = 0.0;
    double capacity_nats_per_sec = 0.0;
    std::vector<Allocation> allocation;

    double allocated_power() const
    {
        double p = 0.0;
        for (const Allocation &a : allocation)
            p += a.weight * a.power_density;
        return p;
    }
};

// Solves sum_i w_i [nu - 1/g_i]^+ = P exactly: with breakpoints 1/g_i in
// ascending order, nu has a closed linear form on each prefix of active
// components; the prefix whose nu falls inside its bracket is the solution.
// Capacity is sum_i w_i * (1/2) [ln(nu g_i)]^+ in nats/s.
//
// Zero-gain components are legal and simply never receive power. P = 0
// yields zero capacity with nu = 1/max(g_i).
inline WaterfillSolution waterfill_weighted(const std::vector<GainComponent> &components, double P)
{
    if (!(P >= 0.0) || !std::isfinite(P))
        throw std::invalid_argument("waterfill_weighted: power must be finite and >= 0");
    for (const GainComponent &c : components)
    {
        if (!(c.gain >= 0.0) || !std::isfinite(c.gain))
            throw std::invalid_argument("waterfill_weighted: gains must be finite and >= 0");
        if (!(c.weight > 0.0) || !std::isfinite(c.weight))
            throw std::invalid_argument("waterfill_weighted: weights must be finite and > 0");
    }

    WaterfillSolution sol;
    sol.allocation.resize(components.size());
    for (std::size_t i = 0; i < components.size(); ++i)
        sol.allocation[i] = Allocation{static_cast<int>(i), components[i].weight, 0.0};

    // Indices of usable components, sorted by breakpoint 1/gain ascending;
    // ties resolved by input order for determinism.
    std::vector<int> order;
    order.reserve(components.size());
    for (std::size_t i = 0; i < components.size(); ++i)
        if (components[i].gain > 0.0)
            order.push_back(static_cast<int>(i));
    if (order.empty())
    {
        if (P > 0.0)
            throw numeric_error("waterfill_weighted: all gains are zero, cannot place power");
        return sol;
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b)
                     { return 1.0 / components[a].gain < 1.0 / components[b].gain; });

    if (P == 0.0)
    {
        sol.nu = 1.0 / components[order.front()].gain;
        return sol;
    }

    // Prefix scan: nu_k = (P + sum w_i b_i) / (sum w_i) over the first k
    // sorted components, valid when nu_k <= next breakpoint.
    double w_sum = 0.0;
    double wb_sum = 0.0;
    double nu = 0.0;
    std::size_t active = 0;
    for (std::size_t k = 0; k < order.size(); ++k)
    {
        const GainComponent &c = components[order[k]];
        w_sum += c.weight;
        wb_sum += c.weight / c.gain;
        nu = (P + wb_sum) / w_sum;
        active = k + 1;
        double next_b = (k + 1 < order.size()) ? 1.0 / components[order[k + 1]].gain
                                               : std::numeric_limits<double>::infinity();
        if (nu <= next_b)
            break;
    }
    sol.nu = nu;

    double capacity = 0.0;
    for (std::size_t k = 0; k < active; ++k)
    {
        const int idx = order[k];
        const GainComponent &c = components[idx];
        const double depth = nu - 1.0 / c.gain;
        if (depth > 0.0)
        {
            sol.allocation[idx].power_density = depth;
            capacity += c.weight * 0.5 * std::log(nu * c.gain);
        }
    }
    sol.capacity_nats_per_sec = capacity;
    return sol;
}

// Water-filling over the bins of `set` with weights equal to the bin overlap
// widths, i.e. the discrete form of
//   C = int_set (1/2)[ln(nu gamma(f))]^+ df,  int_set [nu - 1/gamma(f)]^+ df = P.
inline WaterfillSolution waterfill_spectrum(const RealSpectrum &gamma, const SpectralSet &set,
                                            double P)
{
    const FrequencyGrid &g = gamma.grid();
    const double slack = detail::range_slack(g);
    if (!set.empty() && (set.lower() < -g.f_max() - slack || set.upper() > g.f_max() + slack))
        throw std::invalid_argument("waterfill_spectrum: spectral set exceeds the grid range");

    std::vector<GainComponent> components;
    for (const Interval &iv : set.intervals())
    {
        const double df = g.delta_f();
        int first = std::max(0, static_cast<int>(std::floor((iv.lo + g.f_max()) / df)));
        int last = std::min(g.n_bins() - 1, static_cast<int>(std::floor((iv.hi + g.f_max()) / df)));
        for (int i = first; i <= last; ++i)
        {
            double w = std::min(iv.hi, g.edge(i + 1)) - std::max(iv.lo, g.edge(i));
            if (w > 0.0)
                components.push_back(GainComponent{gamma[i], w});
        }
    }
    return waterfill_weighted(components, P);
}

} // namespace subnyq
