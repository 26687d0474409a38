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
#include <numeric>
#include <stdexcept>
#include <vector>

#include "subnyq/integrate.hpp"
#include "subnyq/spectral_set.hpp"
#include "subnyq/spectrum.hpp"
#include "subnyq/waterfill.hpp"

namespace subnyq
{

// Universal upper bound on sampled capacity at rate f_s: water-filling over
// the measure-f_s spectral set with the highest SNR.
struct UpperBoundResult
{
    SpectralSet b_m;
    WaterfillSolution solution;
    double f_s = 0.0;
    double P = 0.0;
    double capacity() const { return solution.capacity_nats_per_sec; }
};

// The measure-f_s set maximizing int_B |H|^2/S_eta df, resolved greedily:
// bins sorted by descending SNR, ties broken by the leftmost frequency.
// The set is assembled from whole bins; when f_s is not a bin multiple the
// boundary bin enters fractionally, split at its left edge, so the measure
// is exactly f_s.
inline SpectralSet select_max_snr_set(const Channel &channel, double f_s)
{
    const FrequencyGrid &g = channel.grid();
    if (!(f_s > 0.0))
        throw std::invalid_argument("select_max_snr_set: f_s must be > 0");
    if (f_s > 2.0 * g.f_max() * (1.0 + 1e-12))
        throw std::invalid_argument("select_max_snr_set: f_s exceeds the grid bandwidth");
    f_s = std::min(f_s, 2.0 * g.f_max());

    const RealSpectrum gamma = snr(channel);
    std::vector<int> order(g.n_bins());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return gamma[a] > gamma[b]; });

    const double df = g.delta_f();
    int whole = static_cast<int>(std::floor(f_s / df + 1e-9));
    whole = std::min(whole, g.n_bins());
    double remainder = f_s - whole * df;
    if (remainder < 1e-12 * df)
        remainder = 0.0;

    std::vector<Interval> pieces;
    pieces.reserve(whole + 1);
    for (int k = 0; k < whole; ++k)
        pieces.push_back(Interval{g.edge(order[k]), g.edge(order[k] + 1)});
    if (remainder > 0.0 && whole < g.n_bins())
    {
        const int b = order[whole];
        pieces.push_back(Interval{g.edge(b), g.edge(b) + remainder});
    }
    return SpectralSet(std::move(pieces));
}

inline UpperBoundResult upper_bound(const Channel &channel, double f_s, double P)
{
    UpperBoundResult r;
    r.b_m = select_max_snr_set(channel, f_s);
    r.solution = waterfill_spectrum(snr(channel), r.b_m, P);
    r.f_s = f_s;
    r.P = P;
    return r;
}

struct SweepRow
{
    double f_s;
    double capacity;
};

// Rows are produced in input order; monotonicity verdicts are for the caller
// to compute on a sorted copy.
inline std::vector<SweepRow> capacity_sweep(const Channel &channel,
                                            const std::vector<double> &f_s_list, double P)
{
    std::vector<SweepRow> rows;
    rows.reserve(f_s_list.size());
    for (double f_s : f_s_list)
        rows.push_back(SweepRow{f_s, upper_bound(channel, f_s, P).capacity()});
    return rows;
}

} // namespace subnyq
