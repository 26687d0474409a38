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
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace subnyq
{

namespace detail
{
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic per-index jitter in [-1, 1], independent of the
// materialization window.
inline double hashed_uniform(std::uint64_t seed, std::int64_t n)
{
    const std::uint64_t h = splitmix64(seed ^ (static_cast<std::uint64_t>(n) + 0x12345678ULL));
    return 2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0;
}
} // namespace detail

// A sampling set generator: uniform grid, periodic pattern, jittered uniform
// grid, or an explicit finite list of times.
class SamplingSet
{
  public:
    enum class Kind
    {
        uniform,
        periodic,
        jittered,
        explicit_times
    };

    static SamplingSet uniform(double rate, double phase = 0.0)
    {
        if (!(rate > 0.0))
            throw std::invalid_argument("SamplingSet::uniform: rate must be > 0");
        SamplingSet s;
        s.kind_ = Kind::uniform;
        s.rate_ = rate;
        s.phase_ = phase;
        return s;
    }

    static SamplingSet periodic(double period, std::vector<double> offsets)
    {
        if (!(period > 0.0) || offsets.empty())
            throw std::invalid_argument("SamplingSet::periodic: need period > 0 and offsets");
        for (std::size_t k = 0; k < offsets.size(); ++k)
        {
            if (!(offsets[k] >= 0.0) || !(offsets[k] < period))
                throw std::invalid_argument("SamplingSet::periodic: offsets must lie in [0, T_q)");
            if (k > 0 && !(offsets[k] > offsets[k - 1]))
                throw std::invalid_argument("SamplingSet::periodic: offsets must increase");
        }
        SamplingSet s;
        s.kind_ = Kind::periodic;
        s.period_ = period;
        s.offsets_ = std::move(offsets);
        return s;
    }

    // Uniform grid at `rate` with per-sample perturbations bounded by
    // `jitter_bound`, generated reproducibly from `seed`.
    static SamplingSet jittered(double rate, double jitter_bound, std::uint64_t seed)
    {
        if (!(rate > 0.0) || !(jitter_bound >= 0.0))
            throw std::invalid_argument("SamplingSet::jittered: invalid parameters");
        SamplingSet s;
        s.kind_ = Kind::jittered;
        s.rate_ = rate;
        s.jitter_bound_ = jitter_bound;
        s.seed_ = seed;
        return s;
    }

    static SamplingSet explicit_times(std::vector<double> times)
    {
        std::sort(times.begin(), times.end());
        for (std::size_t k = 1; k < times.size(); ++k)
            if (!(times[k] > times[k - 1]))
                throw std::invalid_argument("SamplingSet::explicit_times: times must be distinct");
        SamplingSet s;
        s.kind_ = Kind::explicit_times;
        s.times_ = std::move(times);
        return s;
    }

    Kind kind() const { return kind_; }
    double rate() const { return rate_; }
    double jitter_bound() const { return jitter_bound_; }
    std::uint64_t seed() const { return seed_; }

    double jitter_at(std::int64_t n) const
    {
        return jitter_bound_ * detail::hashed_uniform(seed_, n);
    }

    // Sorted sample times inside [lo, hi].
    std::vector<double> materialize(double lo, double hi) const
    {
        std::vector<double> out;
        switch (kind_)
        {
        case Kind::uniform:
        {
            const auto n0 = static_cast<std::int64_t>(std::ceil((lo - phase_) * rate_));
            for (std::int64_t n = n0; phase_ + n / rate_ <= hi; ++n)
                out.push_back(phase_ + n / rate_);
            break;
        }
        case Kind::periodic:
        {
            const auto n0 = static_cast<std::int64_t>(std::floor(lo / period_)) - 1;
            for (std::int64_t n = n0;; ++n)
            {
                bool past = true;
                for (double t : offsets_)
                {
                    const double tt = t + n * period_;
                    if (tt > hi)
                        continue;
                    past = false;
                    if (tt >= lo)
                        out.push_back(tt);
                }
                if (past && n > n0)
                    break;
            }
            std::sort(out.begin(), out.end());
            break;
        }
        case Kind::jittered:
        {
            // jitter below a quarter period keeps the order; sort anyway
            const auto n0 = static_cast<std::int64_t>(std::floor(lo * rate_)) - 1;
            const auto n1 = static_cast<std::int64_t>(std::ceil(hi * rate_)) + 1;
            for (std::int64_t n = n0; n <= n1; ++n)
            {
                const double t = n / rate_ + jitter_at(n);
                if (t >= lo && t <= hi)
                    out.push_back(t);
            }
            std::sort(out.begin(), out.end());
            break;
        }
        case Kind::explicit_times:
            for (double t : times_)
                if (t >= lo && t <= hi)
                    out.push_back(t);
            break;
        }
        return out;
    }

    // Asymptotic Beurling density, when the generator defines one.
    std::optional<double> exact_density() const
    {
        switch (kind_)
        {
        case Kind::uniform:
        case Kind::jittered:
            return rate_;
        case Kind::periodic:
            return static_cast<double>(offsets_.size()) / period_;
        case Kind::explicit_times:
            return std::nullopt; // finite set: no limit available
        }
        return std::nullopt;
    }

  private:
    SamplingSet() = default;

    Kind kind_ = Kind::uniform;
    double rate_ = 1.0;
    double phase_ = 0.0;
    double period_ = 1.0;
    std::vector<double> offsets_;
    double jitter_bound_ = 0.0;
    std::uint64_t seed_ = 0;
    std::vector<double> times_;
};

struct BeurlingDensityEstimate
{
    double upper = 0.0; // sup over window positions of card(set in [z, z+r]) / r
    double lower = 0.0;
    std::optional<double> exact; // analytic limit when the generator has one
};

// Finite-window estimate of the upper/lower Beurling density: counts over
// z_samples placements of a closed window of length r.
inline BeurlingDensityEstimate beurling_density(const SamplingSet &set, double r, int z_samples)
{
    if (!(r > 0.0) || z_samples < 1)
        throw std::invalid_argument("beurling_density: need r > 0 and z_samples >= 1");
    const double span = 2.0 * r;
    const std::vector<double> times = set.materialize(-span, span + r);

    BeurlingDensityEstimate est;
    est.upper = 0.0;
    est.lower = std::numeric_limits<double>::infinity();
    for (int i = 0; i < z_samples; ++i)
    {
        const double z = -span + (2.0 * span) * (z_samples == 1 ? 0.5 : i / (z_samples - 1.0));
        const auto lo = std::lower_bound(times.begin(), times.end(), z);
        const auto hi = std::upper_bound(times.begin(), times.end(), z + r);
        const double density = static_cast<double>(hi - lo) / r;
        est.upper = std::max(est.upper, density);
        est.lower = std::min(est.lower, density);
    }
    est.exact = set.exact_density();
    return est;
}

} // namespace subnyq
