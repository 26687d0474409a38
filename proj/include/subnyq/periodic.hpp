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
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "subnyq/alias.hpp"
#include "subnyq/capacity.hpp"
#include "subnyq/sampler.hpp"
#include "subnyq/waterfill.hpp"

namespace subnyq
{

struct PeriodicCapacityResult
{
    WaterfillSolution solution;
    EigenProfile profile;
    double capacity() const { return solution.capacity_nats_per_sec; }
};

// Exact sampled capacity of a periodic system: per base frequency the
// eigenvalues of the whitened alias matrix act as parallel sub-channel
// gains; power is water-filled jointly across all (frequency, eigenvalue)
// pairs with weight equal to the base bin width,
//   C = int_{-f_q/2}^{f_q/2} sum_i (1/2)[ln(nu lambda_i(f))]^+ df.
inline PeriodicCapacityResult periodic_capacity(const PeriodicSampler &sampler,
                                                const Channel &channel, double P,
                                                double eps_min = kDefaultSigmaFloor)
{
    const AliasMatrices am = build_alias_matrices(sampler, channel);
    EigenProfile prof = eigen_profile(am, eps_min);

    const double df = am.base.delta_f();
    std::vector<GainComponent> components;
    components.reserve(static_cast<std::size_t>(am.n_base()) * am.M);
    for (int j = 0; j < am.n_base(); ++j)
        for (double lam : prof.lambda[j])
            components.push_back(GainComponent{lam, df});

    PeriodicCapacityResult r{waterfill_weighted(components, P), std::move(prof)};
    return r;
}

// Capacity under equal power allocation over the channel band [0, W]
// (requires |H|^2 = 0 outside):
//   C_eq = int_{-f_q/2}^{f_q/2} (1/2) ln det(I + (P/W) Whitened(f)) df.
inline double periodic_capacity_equal_power(const PeriodicSampler &sampler, const Channel &channel,
                                            double P, double W,
                                            double eps_min = kDefaultSigmaFloor)
{
    if (!(W > 0.0))
        throw std::invalid_argument("periodic_capacity_equal_power: W must be > 0");
    const FrequencyGrid &g = channel.grid();
    for (int i = 0; i < g.n_bins(); ++i)
    {
        const double f = g.center(i);
        if ((f < 0.0 || f > W) && channel.h_sq()[i] != 0.0)
            throw std::invalid_argument(
                "periodic_capacity_equal_power: |H|^2 must vanish outside [0, W]");
    }

    const AliasMatrices am = build_alias_matrices(sampler, channel);
    const EigenProfile prof = eigen_profile(am, eps_min);
    const double df = am.base.delta_f();
    double capacity = 0.0;
    for (int j = 0; j < am.n_base(); ++j)
        for (double lam : prof.lambda[j])
            capacity += df * 0.5 * std::log1p(P / W * lam);
    return capacity;
}

// Upper bound over all periodic systems with the given period and rate:
// per base frequency keep the M best aliased SNRs (the eigenvalues of
// F_h F_h^*) and water-fill jointly.
inline WaterfillSolution corollary_bound(const Channel &channel, double f_q, double f_s, double P)
{
    const double MM = f_s / f_q;
    if (std::abs(MM - std::round(MM)) > 1e-9 || std::round(MM) < 1.0)
        throw std::invalid_argument("corollary_bound: f_s/f_q must be a positive integer");
    const int M = static_cast<int>(std::round(MM));

    const FrequencyGrid &g = channel.grid();
    const AliasLayout lay = alias_layout(g, f_q);
    const int A = 2 * lay.L + 1;
    const RealSpectrum gamma = snr(channel);

    const double df = g.delta_f();
    std::vector<GainComponent> components;
    components.reserve(static_cast<std::size_t>(lay.m) * std::min(M, A));
    std::vector<double> fam(A);
    for (int j = 0; j < lay.m; ++j)
    {
        for (int a = 0; a < A; ++a)
            fam[a] = gamma[j + a * lay.m];
        std::sort(fam.begin(), fam.end(), std::greater<double>());
        for (int i = 0; i < std::min(M, A); ++i)
            components.push_back(GainComponent{fam[i], df});
    }
    return waterfill_weighted(components, P);
}

// ---------------------------------------------------------------------------
// Achievability designs
// ---------------------------------------------------------------------------

struct FilterbankBranch
{
    SpectralSet set;
    double rate; // Hz, equals measure(set)
};

// Capacity-achieving filterbank: one branch per interval of the maximizing
// set B_m, indicator filter, branch rate equal to the interval length.
struct FilterbankDesign
{
    std::vector<FilterbankBranch> branches;
    double total_rate = 0.0;
};

struct FilterbankDesignResult
{
    FilterbankDesign design;
    double capacity = 0.0; // equals the converse bound by construction
    UpperBoundResult bound;
};

inline FilterbankDesignResult design_filterbank(const Channel &channel, double f_s, double P)
{
    FilterbankDesignResult r;
    r.bound = upper_bound(channel, f_s, P);
    for (const Interval &iv : r.bound.b_m.intervals())
        r.design.branches.push_back(FilterbankBranch{SpectralSet({iv}), iv.length()});
    r.design.total_rate = r.bound.b_m.measure();
    r.capacity = r.bound.capacity();
    return r;
}

// Single branch of modulation and filtering. The selected subbands of B_m
// (width f_s/N each) are relocated to pairwise distinct slots of [0, f_s)
// by one modulation coefficient per subband; the slot map is chosen so that
// no stray image of any selected subband lands inside [0, f_s), making the
// relocation alias-free.
struct ModulationDesign
{
    SpectralSet pre_filter;
    std::map<int, std::complex<double>> mod_coeffs;
    SpectralSet post_filter;
    double f_s = 0.0;
    int subbands = 0;
    std::vector<int> selected;  // source subband indices (units of f_q)
    std::vector<int> slots;     // slot assigned to each selected subband
};

struct ModulationDesignResult
{
    ModulationDesign design;
    PeriodicSampler sampler;
    double capacity = 0.0; // computed through periodic_capacity on the chain
    double bound = 0.0;    // C_u(f_s, P)
};

namespace detail
{

// Backtracking search for an injective slot map free of cross images. A
// coefficient alpha shifts every selected subband rigidly by alpha, so the
// requirement is: whenever m_j + alpha_i lands inside [0, N), the two
// subbands share the shift (alpha_i == alpha_j), in which case the image is
// exactly subband j's own slot rather than interference.
inline bool assign_slots(const std::vector<int> &bands, std::size_t next, std::vector<int> &slot,
                         std::vector<bool> &used)
{
    const int N = static_cast<int>(bands.size());
    if (next == bands.size())
        return true;
    for (int s = 0; s < N; ++s)
    {
        if (used[s])
            continue;
        const int alpha = s - bands[next];
        bool ok = true;
        for (std::size_t j = 0; j < next && ok; ++j)
        {
            const int alpha_j = slot[j] - bands[j];
            if (alpha_j == alpha)
                continue;
            const int img = bands[j] + alpha;       // new coefficient, old band
            const int img2 = bands[next] + alpha_j; // old coefficient, new band
            if ((img >= 0 && img < N) || (img2 >= 0 && img2 < N))
                ok = false;
        }
        if (ok)
        {
            slot[next] = s;
            used[s] = true;
            if (assign_slots(bands, next + 1, slot, used))
                return true;
            used[s] = false;
            slot[next] = -1;
        }
    }
    return false;
}

} // namespace detail

inline ModulationDesignResult design_modulation(const Channel &channel, double f_s, int subbands,
                                                double P, double eps_min = kDefaultSigmaFloor)
{
    if (subbands < 1)
        throw std::invalid_argument("design_modulation: subband count must be >= 1");
    const FrequencyGrid &g = channel.grid();
    const double f_q = f_s / subbands;
    const AliasLayout lay = alias_layout(g, f_q); // also validates alignment
    const int N = subbands;

    if (f_s > g.f_max() * (1.0 + 1e-12))
        throw std::invalid_argument(
            "design_modulation: the output band [0, f_s) must fit inside the grid");

    // gamma must be constant on every width-f_q subband [r f_q, (r+1) f_q).
    const RealSpectrum gamma = snr(channel);
    for (int i = 1; i < g.n_bins(); ++i)
    {
        const auto band = [&](int k) { return std::floor(g.center(k) / f_q); };
        if (band(i) == band(i - 1) &&
            std::abs(gamma[i] - gamma[i - 1]) > 1e-9 * std::max({1.0, gamma[i], gamma[i - 1]}))
            throw std::invalid_argument(
                "design_modulation: SNR is not piecewise flat on the subband lattice");
    }

    // B_m must be a union of whole subbands.
    const SpectralSet b_m = select_max_snr_set(channel, f_s);
    std::vector<int> bands;
    for (const Interval &iv : b_m.intervals())
    {
        const double lo = iv.lo / f_q, hi = iv.hi / f_q;
        if (std::abs(lo - std::round(lo)) > 1e-6 || std::abs(hi - std::round(hi)) > 1e-6)
            throw std::invalid_argument(
                "design_modulation: the maximizing set does not align to the subband lattice");
        for (int r = static_cast<int>(std::round(lo)); r < static_cast<int>(std::round(hi)); ++r)
            bands.push_back(r);
    }
    if (static_cast<int>(bands.size()) != N)
        throw std::invalid_argument("design_modulation: expected exactly N selected subbands");

    std::vector<int> slot(N, -1);
    std::vector<bool> used(N, false);
    if (!detail::assign_slots(bands, 0, slot, used))
        throw numeric_error("design_modulation: no alias-free slot assignment exists for this "
                            "subband pattern");

    ModulationDesign design;
    design.f_s = f_s;
    design.subbands = N;
    design.selected = bands;
    design.slots = slot;
    design.pre_filter = b_m;
    design.post_filter = SpectralSet::band(0.0, f_s);
    for (int i = 0; i < N; ++i)
        design.mod_coeffs.emplace(slot[i] - bands[i], std::complex<double>(1.0, 0.0));

    PeriodicSampler chain = modulation_sampler(g, design.pre_filter, design.mod_coeffs,
                                               design.post_filter, f_s, N);
    const double achieved = periodic_capacity(chain, channel, P, eps_min).capacity();
    const double bound = upper_bound(channel, f_s, P).capacity();
    return ModulationDesignResult{std::move(design), std::move(chain), achieved, bound};
}

} // namespace subnyq
