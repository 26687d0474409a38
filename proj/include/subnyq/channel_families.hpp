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

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "subnyq/spectrum.hpp"

namespace subnyq
{

// Grid-independent channel descriptions. Keeping the analytic description
// around lets a channel be re-evaluated exactly on a different grid (the CLI
// re-grids automatically to make sampler alias lattices land on bin centers).

struct PiecewiseSegment
{
    double lo = 0.0;
    double hi = 0.0;
    double h_sq = 0.0;
    double noise = 1.0;
};

struct ChannelSpec
{
    enum class Family
    {
        flat,     // |H|^2 = gain on [band_lo, band_hi), zero outside
        triangle, // |H|^2 = gain * max(0, 1 - |f - center|/half_width)
        two_band, // two flat bands with separate gains
        gaussian, // |H|^2 = gain * exp(-f^2 / (2 sigma^2))
        piecewise // explicit (interval, |H|^2, S_eta) segments
    };

    Family family = Family::flat;

    double gain = 1.0;
    double band_lo = -0.5;
    double band_hi = 0.5;
    double center = 0.0;
    double half_width = 1.0;
    double gain2 = 1.0;
    double band2_lo = 0.0;
    double band2_hi = 0.0;
    double sigma = 1.0;
    double noise = 1.0; // constant noise PSD for the analytic families
    std::vector<PiecewiseSegment> segments;
};

inline Channel make_channel(const ChannelSpec &spec, const FrequencyGrid &grid)
{
    if (!(spec.noise > 0.0))
        throw std::invalid_argument("make_channel: noise PSD must be > 0");

    std::vector<double> h(grid.n_bins(), 0.0);
    std::vector<double> s(grid.n_bins(), spec.noise);

    auto in = [](double f, double lo, double hi) { return f >= lo && f < hi; };

    for (int i = 0; i < grid.n_bins(); ++i)
    {
        const double f = grid.center(i);
        switch (spec.family)
        {
        case ChannelSpec::Family::flat:
            h[i] = in(f, spec.band_lo, spec.band_hi) ? spec.gain : 0.0;
            break;
        case ChannelSpec::Family::triangle:
        {
            const double t = 1.0 - std::abs(f - spec.center) / spec.half_width;
            h[i] = spec.gain * std::max(0.0, t);
            break;
        }
        case ChannelSpec::Family::two_band:
            if (in(f, spec.band_lo, spec.band_hi))
                h[i] = spec.gain;
            else if (in(f, spec.band2_lo, spec.band2_hi))
                h[i] = spec.gain2;
            break;
        case ChannelSpec::Family::gaussian:
            h[i] = spec.gain * std::exp(-f * f / (2.0 * spec.sigma * spec.sigma));
            break;
        case ChannelSpec::Family::piecewise:
            for (const PiecewiseSegment &seg : spec.segments)
                if (in(f, seg.lo, seg.hi))
                {
                    h[i] = seg.h_sq;
                    if (!(seg.noise > 0.0))
                        throw std::invalid_argument("make_channel: segment noise must be > 0");
                    s[i] = seg.noise;
                }
            break;
        }
    }
    return Channel(RealSpectrum(grid, std::move(h)), RealSpectrum(grid, std::move(s)));
}

inline ChannelSpec flat_channel(double gain, double width, double noise = 1.0)
{
    ChannelSpec c;
    c.family = ChannelSpec::Family::flat;
    c.gain = gain;
    c.band_lo = -width / 2.0;
    c.band_hi = width / 2.0;
    c.noise = noise;
    return c;
}

inline ChannelSpec triangle_channel(double gain, double half_width, double noise = 1.0)
{
    ChannelSpec c;
    c.family = ChannelSpec::Family::triangle;
    c.gain = gain;
    c.half_width = half_width;
    c.noise = noise;
    return c;
}

inline ChannelSpec two_band_channel(double g1, double lo1, double hi1, double g2, double lo2,
                                    double hi2, double noise = 1.0)
{
    ChannelSpec c;
    c.family = ChannelSpec::Family::two_band;
    c.gain = g1;
    c.band_lo = lo1;
    c.band_hi = hi1;
    c.gain2 = g2;
    c.band2_lo = lo2;
    c.band2_hi = hi2;
    c.noise = noise;
    return c;
}

} // namespace subnyq
