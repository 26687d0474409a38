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
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "subnyq/errors.hpp"
#include "subnyq/spectral_set.hpp"
#include "subnyq/spectrum.hpp"

namespace subnyq
{

enum class SamplerKind
{
    single_branch,
    filterbank,
    modulation_chain,
    interleaved,
    custom
};

// Periodic sampling system: a period T_q, M sample phases t_1 < ... < t_M in
// [0, T_q), and one frequency response per phase on the channel grid.
//
// Responses are stored as tone responses: Q_k(f) is the value of sample k
// when the system input is exp(j 2 pi f t). Constructors fold the sample
// position into the stored response (a factor exp(j 2 pi f t_k)), which keeps
// the alias analysis and the time-domain synthesis consistent: phases across
// the alias lattice distinguish sample instants within one period, so e.g.
// two identical branches offset by T_q/2 correctly act as one uniform sampler
// at twice the rate instead of degenerating to a rank-1 system.
class PeriodicSampler
{
  public:
    PeriodicSampler(double period, std::vector<double> offsets,
                    std::vector<ComplexSpectrum> responses, SamplerKind kind)
        : period_(period), offsets_(std::move(offsets)), responses_(std::move(responses)),
          kind_(kind)
    {
        if (!(period_ > 0.0))
            throw std::invalid_argument("PeriodicSampler: period must be > 0");
        if (responses_.empty() || offsets_.size() != responses_.size())
            throw std::invalid_argument("PeriodicSampler: need one offset per response");
        for (std::size_t k = 0; k < offsets_.size(); ++k)
        {
            if (!(offsets_[k] >= 0.0) || !(offsets_[k] < period_))
                throw std::invalid_argument("PeriodicSampler: offsets must lie in [0, T_q)");
            if (k > 0 && !(offsets_[k] > offsets_[k - 1]))
                throw std::invalid_argument("PeriodicSampler: offsets must be strictly increasing");
            require_same_grid(responses_[k].grid(), responses_[0].grid(), "PeriodicSampler");
        }
    }

    double period() const { return period_; }
    double f_q() const { return 1.0 / period_; }
    int branches() const { return static_cast<int>(responses_.size()); }
    double rate() const { return branches() / period_; }
    const std::vector<double> &offsets() const { return offsets_; }
    const std::vector<ComplexSpectrum> &responses() const { return responses_; }
    const FrequencyGrid &grid() const { return responses_[0].grid(); }
    SamplerKind kind() const { return kind_; }

  private:
    double period_;
    std::vector<double> offsets_;
    std::vector<ComplexSpectrum> responses_;
    SamplerKind kind_;
};

namespace detail
{

inline ComplexSpectrum apply_position_phase(const ComplexSpectrum &response, double t)
{
    if (t == 0.0)
        return response;
    std::vector<std::complex<double>> v(response.size());
    for (int i = 0; i < response.size(); ++i)
    {
        const double f = response.grid().center(i);
        v[i] = response[i] * std::polar(1.0, 2.0 * M_PI * f * t);
    }
    return ComplexSpectrum(response.grid(), std::move(v));
}

inline ComplexSpectrum indicator_response(const FrequencyGrid &grid, const SpectralSet &set)
{
    std::vector<std::complex<double>> v(grid.n_bins());
    for (int i = 0; i < grid.n_bins(); ++i)
        v[i] = set.contains(grid.center(i)) ? 1.0 : 0.0;
    return ComplexSpectrum(grid, std::move(v));
}

} // namespace detail

// LTI filter followed by a uniform pointwise sampler at rate f_s: an M = 1
// periodic system with period 1/f_s. The rate must be a multiple of the grid
// bin width so alias sums land on bin centers.
inline PeriodicSampler from_single_branch(const ComplexSpectrum &filter, double f_s,
                                          double offset = 0.0)
{
    if (!(f_s > 0.0))
        throw std::invalid_argument("from_single_branch: f_s must be > 0");
    const double df = filter.grid().delta_f();
    const double ratio = f_s / df;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio) || std::round(ratio) < 1.0)
        throw grid_alignment_error("from_single_branch: f_s is not a multiple of the grid bin "
                                   "width; nearest valid rate is " +
                                       std::to_string(std::max(1.0, std::round(ratio)) * df),
                                   std::max(1.0, std::round(ratio)) * df);
    const double period = 1.0 / f_s;
    double t = std::fmod(offset, period);
    if (t < 0.0)
        t += period;
    return PeriodicSampler(period, {t}, {detail::apply_position_phase(filter, t)},
                           SamplerKind::single_branch);
}

inline PeriodicSampler ideal_lowpass_sampler(const FrequencyGrid &grid, double f_s,
                                             double offset = 0.0)
{
    return from_single_branch(detail::indicator_response(grid, SpectralSet::band(-f_s / 2, f_s / 2)),
                              f_s, offset);
}

inline PeriodicSampler all_pass_sampler(const FrequencyGrid &grid, double f_s, double offset = 0.0)
{
    return from_single_branch(ComplexSpectrum::constant(grid, 1.0), f_s, offset);
}

// Bank of branches sharing the period 1/f_q, one sample phase per branch.
// Branch k applies the indicator filter of sets[k]; phases default to an
// even spread over the period.
inline PeriodicSampler filterbank_sampler(const FrequencyGrid &grid,
                                          const std::vector<SpectralSet> &sets, double f_q,
                                          std::vector<double> offsets = {})
{
    if (sets.empty())
        throw std::invalid_argument("filterbank_sampler: need at least one branch");
    const double period = 1.0 / f_q;
    const int M = static_cast<int>(sets.size());
    if (offsets.empty())
    {
        offsets.resize(M);
        for (int k = 0; k < M; ++k)
            offsets[k] = k * period / M;
    }
    if (static_cast<int>(offsets.size()) != M)
        throw std::invalid_argument("filterbank_sampler: need one offset per branch");
    std::vector<ComplexSpectrum> responses;
    responses.reserve(M);
    for (int k = 0; k < M; ++k)
        responses.push_back(
            detail::apply_position_phase(detail::indicator_response(grid, sets[k]), offsets[k]));
    return PeriodicSampler(period, std::move(offsets), std::move(responses),
                           SamplerKind::filterbank);
}

// Merges branches with a common period into one periodic system carrying the
// union of the sample phases; responses pass through unchanged because each
// merged sample computes the same functional of the input as before. A
// colliding phase is resolved by delaying the later branch by
// delta = T_q * 2^-20 (repeatedly if needed), which changes no sample value.
inline PeriodicSampler interleave_multibranch(const std::vector<PeriodicSampler> &branches)
{
    if (branches.empty())
        throw std::invalid_argument("interleave_multibranch: need at least one branch");
    const double period = branches[0].period();
    for (const PeriodicSampler &b : branches)
    {
        if (std::abs(b.period() - period) > 1e-12 * period)
            throw std::invalid_argument(
                "interleave_multibranch: branches must share the period (resampling to a common "
                "period is not supported)");
        require_same_grid(b.grid(), branches[0].grid(), "interleave_multibranch");
    }
    if (branches.size() == 1)
        return branches[0];

    const double delta = period * std::pow(2.0, -20);
    std::vector<std::pair<double, const ComplexSpectrum *>> merged;
    for (const PeriodicSampler &b : branches)
    {
        double shift = 0.0;
        bool collides = true;
        while (collides)
        {
            collides = false;
            for (std::size_t k = 0; k < b.offsets().size() && !collides; ++k)
            {
                double t = std::fmod(b.offsets()[k] + shift, period);
                for (const auto &[tm, r] : merged)
                    if (t == tm)
                    {
                        collides = true;
                        break;
                    }
            }
            if (collides)
                shift += delta;
        }
        for (std::size_t k = 0; k < b.offsets().size(); ++k)
            merged.emplace_back(std::fmod(b.offsets()[k] + shift, period), &b.responses()[k]);
    }
    std::sort(merged.begin(), merged.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });

    std::vector<double> offsets;
    std::vector<ComplexSpectrum> responses;
    offsets.reserve(merged.size());
    responses.reserve(merged.size());
    for (const auto &[t, r] : merged)
    {
        offsets.push_back(t);
        responses.push_back(*r);
    }
    return PeriodicSampler(period, std::move(offsets), std::move(responses),
                           SamplerKind::interleaved);
}

// Pre-filter, periodic modulation, post-filter, uniform sampler at rate f_s.
// The modulating sequence has period N/f_s, so its transform is an impulse
// train at multiples of f_q = f_s/N with weights coeffs[l]. Sample phase k
// sits at t_k = k/f_s; the tone response is
//   Q_k(f) = P(f) * sum_l c_l S(f + l f_q) exp(j 2 pi (f + l f_q) t_k).
inline PeriodicSampler modulation_sampler(const FrequencyGrid &grid, const SpectralSet &pre,
                                          const std::map<int, std::complex<double>> &coeffs,
                                          const SpectralSet &post, double f_s, int subbands)
{
    if (subbands < 1)
        throw std::invalid_argument("modulation_sampler: subband count must be >= 1");
    const double f_q = f_s / subbands;
    const double period = 1.0 / f_q;
    std::vector<double> offsets(subbands);
    std::vector<ComplexSpectrum> responses;
    responses.reserve(subbands);
    for (int k = 0; k < subbands; ++k)
    {
        offsets[k] = k / f_s;
        std::vector<std::complex<double>> v(grid.n_bins(), 0.0);
        for (int i = 0; i < grid.n_bins(); ++i)
        {
            const double f = grid.center(i);
            if (!pre.contains(f))
                continue;
            std::complex<double> acc = 0.0;
            for (const auto &[l, c] : coeffs)
            {
                const double f_out = f + l * f_q;
                if (post.contains(f_out))
                    acc += c * std::polar(1.0, 2.0 * M_PI * f_out * offsets[k]);
            }
            v[i] = acc;
        }
        responses.push_back(ComplexSpectrum(grid, std::move(v)));
    }
    return PeriodicSampler(period, std::move(offsets), std::move(responses),
                           SamplerKind::modulation_chain);
}

} // namespace subnyq
