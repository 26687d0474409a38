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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "subnyq/waterfill.hpp"

using namespace subnyq;
using Catch::Approx;

namespace
{

// Independent oracle: scalar bisection on the water level nu against
// F(nu) = sum w_i [nu - 1/g_i]^+, then capacity from the same nu. Exercises
// none of the breakpoint algebra of the solver under test.
double bisection_capacity(const std::vector<GainComponent> &comps, double P, double *nu_out = nullptr)
{
    double lo = 0.0, hi = 1.0;
    auto volume = [&](double nu)
    {
        double v = 0.0;
        for (const GainComponent &c : comps)
            if (c.gain > 0.0)
                v += c.weight * std::max(0.0, nu - 1.0 / c.gain);
        return v;
    };
    while (volume(hi) < P)
        hi *= 2.0;
    for (int it = 0; it < 200; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        (volume(mid) < P ? lo : hi) = mid;
    }
    const double nu = 0.5 * (lo + hi);
    if (nu_out)
        *nu_out = nu;
    double cap = 0.0;
    for (const GainComponent &c : comps)
        if (c.gain > 0.0 && nu * c.gain > 1.0)
            cap += c.weight * 0.5 * std::log(nu * c.gain);
    return cap;
}

} // namespace

TEST_CASE("waterfill_weighted closed forms")
{
    SECTION("flat single band: nu = 1/g + P/w")
    {
        WaterfillSolution s = waterfill_weighted({{1.0, 1.0}}, 1.0);
        CHECK(s.nu == Approx(2.0));
        CHECK(s.capacity_nats_per_sec == Approx(0.5 * std::log(2.0)));
    }
    SECTION("zero power")
    {
        WaterfillSolution s = waterfill_weighted({{3.0, 2.0}}, 0.0);
        CHECK(s.capacity_nats_per_sec == 0.0);
        CHECK(s.nu == Approx(1.0 / 3.0));
        CHECK(s.allocated_power() == 0.0);
    }
    SECTION("two gains, only the strong band active")
    {
        // breakpoints 0.25 and 1: prefix {4} gives nu = 0.75 <= 1
        double nu_oracle = 0.0;
        const double cap_oracle = bisection_capacity({{4.0, 1.0}, {1.0, 1.0}}, 0.5, &nu_oracle);
        WaterfillSolution s = waterfill_weighted({{4.0, 1.0}, {1.0, 1.0}}, 0.5);
        CHECK(s.nu == Approx(0.75));
        CHECK(s.nu == Approx(nu_oracle).margin(1e-10));
        CHECK(s.capacity_nats_per_sec == Approx(0.5 * std::log(3.0)));
        CHECK(s.capacity_nats_per_sec == Approx(cap_oracle).margin(1e-10));
        CHECK(s.allocation[0].power_density == Approx(0.5));
        CHECK(s.allocation[1].power_density == 0.0);
    }
    SECTION("errors")
    {
        CHECK_THROWS_AS(waterfill_weighted({{0.0, 1.0}}, 1.0), numeric_error);
        CHECK_THROWS_AS(waterfill_weighted({{-1.0, 1.0}}, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(waterfill_weighted({{1.0, -1.0}}, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(waterfill_weighted({{1.0, 1.0}}, -1.0), std::invalid_argument);
        CHECK_NOTHROW(waterfill_weighted({{0.0, 1.0}, {1.0, 1.0}}, 1.0));
    }
}

TEST_CASE("waterfill_weighted random instances match the bisection oracle")
{
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial)
    {
        std::vector<GainComponent> comps;
        const int n = 1 + static_cast<int>(u(rng) * 12);
        for (int i = 0; i < n; ++i)
            comps.push_back(GainComponent{u(rng) < 0.15 ? 0.0 : 0.05 + 4.0 * u(rng),
                                          0.05 + 2.0 * u(rng)});
        bool any_gain = false;
        for (const GainComponent &c : comps)
            any_gain |= c.gain > 0.0;
        if (!any_gain)
            continue;
        const double P = 3.0 * u(rng);

        WaterfillSolution s = waterfill_weighted(comps, P);
        const double cap_oracle = bisection_capacity(comps, P);
        CHECK(s.capacity_nats_per_sec == Approx(cap_oracle).margin(1e-9));

        // power conservation
        CHECK(std::abs(s.allocated_power() - P) <= 1e-9 * std::max(P, 1.0));

        // complementary slackness
        for (const Allocation &a : s.allocation)
        {
            const double g = comps[a.component].gain;
            if (a.power_density > 0.0)
                CHECK(s.nu > 1.0 / g);
            else if (g > 0.0 && P > 0.0)
                CHECK(s.nu <= 1.0 / g + 1e-12 * s.nu);
        }
    }
}

TEST_CASE("capacity is nondecreasing and concave in power")
{
    std::vector<GainComponent> comps = {{3.0, 0.5}, {1.5, 1.0}, {0.4, 0.7}, {2.2, 0.3}};
    std::vector<double> caps;
    const int grid_n = 40;
    for (int i = 0; i <= grid_n; ++i)
        caps.push_back(waterfill_weighted(comps, 5.0 * i / grid_n).capacity_nats_per_sec);
    for (int i = 0; i + 1 <= grid_n; ++i)
        CHECK(caps[i] <= caps[i + 1]);
    for (int i = 1; i + 1 <= grid_n; ++i)
        CHECK(caps[i + 1] - 2.0 * caps[i] + caps[i - 1] <= 1e-12);
}

TEST_CASE("capacity is nondecreasing under pointwise gain increase")
{
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial)
    {
        std::vector<GainComponent> lo, hi;
        const int n = 1 + static_cast<int>(u(rng) * 8);
        for (int i = 0; i < n; ++i)
        {
            const double g = 0.1 + 3.0 * u(rng);
            const double w = 0.1 + u(rng);
            lo.push_back(GainComponent{g, w});
            hi.push_back(GainComponent{g + 2.0 * u(rng), w});
        }
        const double P = 2.0 * u(rng) + 0.01;
        CHECK(waterfill_weighted(lo, P).capacity_nats_per_sec <=
              waterfill_weighted(hi, P).capacity_nats_per_sec + 1e-12);
    }
}

TEST_CASE("waterfill_spectrum")
{
    FrequencyGrid g(1.0, 2048);

    SECTION("flat gamma reduces to a single weighted gain")
    {
        RealSpectrum gamma = RealSpectrum::constant(g, 1.0);
        WaterfillSolution s = waterfill_spectrum(gamma, SpectralSet::band(-0.5, 0.5), 1.0);
        CHECK(s.nu == Approx(2.0).epsilon(1e-12));
        CHECK(s.capacity_nats_per_sec == Approx(0.5 * std::log(2.0)).epsilon(1e-12));
    }
    SECTION("flat-band closed form (B/2) ln(1 + P g / B)")
    {
        const double gain = 3.0, B = 1.5, P = 2.0;
        RealSpectrum gamma = RealSpectrum::constant(g, gain);
        WaterfillSolution s = waterfill_spectrum(gamma, SpectralSet::band(-B / 2, B / 2), P);
        CHECK(s.capacity_nats_per_sec ==
              Approx(B / 2 * std::log(1.0 + P * gain / B)).epsilon(1e-12));
    }
    SECTION("triangle profile against continuous closed form")
    {
        // gamma = 1 - |f| on [-0.5, 0.5), P = 1: the whole set stays active,
        // nu = 1 + 2 ln 2 and C = (1/2) ln(nu) + (1/2) ln 2 - 1/2.
        RealSpectrum gamma = RealSpectrum::from_function(
            g, [](double f) { return std::max(0.0, 1.0 - std::abs(f)); });
        WaterfillSolution s = waterfill_spectrum(gamma, SpectralSet::band(-0.5, 0.5), 1.0);
        const double nu_exact = 1.0 + 2.0 * std::log(2.0);
        const double c_exact = 0.5 * std::log(nu_exact) + 0.5 * std::log(2.0) - 0.5;
        const double df = g.delta_f();
        CHECK(std::abs(s.nu - nu_exact) <= 1e-8 + 10.0 * df * df);
        CHECK(std::abs(s.capacity_nats_per_sec - c_exact) <= 1e-8 + 10.0 * df * df);
    }
}
