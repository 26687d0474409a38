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
#include <stdexcept>

#include "subnyq/spectral_set.hpp"
#include "subnyq/spectrum.hpp"

namespace subnyq
{

namespace detail
{
// Relative slack for range checks, absorbing round-off in edges that were
// themselves computed from the grid.
inline double range_slack(const FrequencyGrid &g) { return 1e-9 * g.f_max(); }
} // namespace detail

// Midpoint-rule integral of a piecewise-constant-per-bin spectrum over a
// spectral set: sum over bins of value * overlap width. Partial bins are
// weighted by the overlap fraction, which makes the rule exact for spectra
// aligned with the grid and second-order accurate otherwise.
inline double integrate(const RealSpectrum &s, const SpectralSet &set)
{
    if (set.empty())
        return 0.0;
    const FrequencyGrid &g = s.grid();
    const double slack = detail::range_slack(g);
    if (set.lower() < -g.f_max() - slack || set.upper() > g.f_max() + slack)
        throw std::invalid_argument("integrate: spectral set exceeds the grid range");

    double total = 0.0;
    for (const Interval &iv : set.intervals())
    {
        const double df = g.delta_f();
        int first = std::max(0, static_cast<int>(std::floor((iv.lo + g.f_max()) / df)));
        int last = std::min(g.n_bins() - 1, static_cast<int>(std::floor((iv.hi + g.f_max()) / df)));
        for (int i = first; i <= last; ++i)
        {
            double w = std::min(iv.hi, g.edge(i + 1)) - std::max(iv.lo, g.edge(i));
            if (w > 0.0)
                total += s[i] * w;
        }
    }
    return total;
}

} // namespace subnyq
