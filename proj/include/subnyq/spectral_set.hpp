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
#include <stdexcept>
#include <vector>

namespace subnyq
{

// Half-open frequency interval [lo, hi) in Hz.
struct Interval
{
    double lo;
    double hi;
    double length() const { return hi - lo; }
};

// Finite union of disjoint half-open intervals, kept sorted and maximally
// merged (hi_i < lo_{i+1} after normalization). Overlapping or touching
// inputs are merged, so normalization is idempotent.
class SpectralSet
{
  public:
    SpectralSet() = default;

    explicit SpectralSet(std::vector<Interval> intervals)
    {
        for (const Interval &iv : intervals)
            if (!(iv.lo < iv.hi))
                throw std::invalid_argument("SpectralSet: intervals need lo < hi");
        std::sort(intervals.begin(), intervals.end(),
                  [](const Interval &a, const Interval &b) { return a.lo < b.lo; });
        for (const Interval &iv : intervals)
        {
            if (!intervals_.empty() && iv.lo <= intervals_.back().hi)
                intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
            else
                intervals_.push_back(iv);
        }
    }

    static SpectralSet band(double lo, double hi) { return SpectralSet({Interval{lo, hi}}); }

    const std::vector<Interval> &intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }

    double measure() const
    {
        double m = 0.0;
        for (const Interval &iv : intervals_)
            m += iv.length();
        return m;
    }

    double lower() const { return intervals_.front().lo; }
    double upper() const { return intervals_.back().hi; }

    bool contains(double f) const
    {
        for (const Interval &iv : intervals_)
            if (f >= iv.lo && f < iv.hi)
                return true;
        return false;
    }

    // Set union; the constructor re-normalizes.
    SpectralSet unite(const SpectralSet &other) const
    {
        std::vector<Interval> all = intervals_;
        all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
        return SpectralSet(std::move(all));
    }

    // True when every interval of this set lies inside some interval of the
    // cover, with `slack` tolerance at the endpoints.
    bool subset_of(const SpectralSet &cover, double slack = 0.0) const
    {
        for (const Interval &iv : intervals_)
        {
            bool covered = false;
            for (const Interval &c : cover.intervals_)
                if (iv.lo >= c.lo - slack && iv.hi <= c.hi + slack)
                {
                    covered = true;
                    break;
                }
            if (!covered)
                return false;
        }
        return true;
    }

  private:
    std::vector<Interval> intervals_;
};

// Minimal lower Beurling density of any sampling set allowing perfect
// reconstruction of signals supported on `set`: its spectral occupancy.
inline double landau_rate(const SpectralSet &set) { return set.measure(); }

} // namespace subnyq
