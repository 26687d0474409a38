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

#include "subnyq/channel_families.hpp"
#include "subnyq/integrate.hpp"
#include "subnyq/spectral_set.hpp"
#include "subnyq/spectrum.hpp"

using namespace subnyq;
using Catch::Approx;

TEST_CASE("FrequencyGrid invariants")
{
    FrequencyGrid g(1.0, 8);
    CHECK(g.delta_f() == Approx(0.25));
    CHECK(g.edge(0) == -1.0);
    CHECK(g.edge(8) == 1.0);
    // centers strictly increasing and symmetric about 0
    for (int i = 0; i + 1 < g.n_bins(); ++i)
        CHECK(g.center(i) < g.center(i + 1));
    for (int i = 0; i < g.n_bins(); ++i)
        CHECK(g.center(i) == Approx(-g.center(g.n_bins() - 1 - i)).margin(1e-15));

    CHECK_THROWS_AS(FrequencyGrid(1.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(FrequencyGrid(1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(FrequencyGrid(-1.0, 8), std::invalid_argument);
}

TEST_CASE("snr pointwise division")
{
    FrequencyGrid g(1.0, 8);

    SECTION("identity case")
    {
        Channel ch(RealSpectrum::constant(g, 1.0), RealSpectrum::constant(g, 1.0));
        for (double v : snr(ch).values())
            CHECK(v == 1.0);
    }
    SECTION("pointwise division")
    {
        Channel ch(RealSpectrum::constant(g, 4.0), RealSpectrum::constant(g, 2.0));
        for (double v : snr(ch).values())
            CHECK(v == 2.0);
    }
    SECTION("zero noise rejected at construction")
    {
        std::vector<double> noise(g.n_bins(), 1.0);
        noise[3] = 0.0;
        CHECK_THROWS_AS(Channel(RealSpectrum::constant(g, 1.0), RealSpectrum(g, noise)),
                        std::invalid_argument);
    }
    SECTION("mismatched grids")
    {
        FrequencyGrid g2(1.0, 16);
        CHECK_THROWS_AS(Channel(RealSpectrum::constant(g, 1.0), RealSpectrum::constant(g2, 1.0)),
                        std::invalid_argument);
    }
}

TEST_CASE("integrate on unit rectangles and triangles")
{
    FrequencyGrid g(2.0, 512);

    SECTION("unit rectangle")
    {
        RealSpectrum one = RealSpectrum::constant(g, 1.0);
        CHECK(integrate(one, SpectralSet::band(0.0, 1.0)) == Approx(1.0).epsilon(1e-12));
    }
    SECTION("constant over symmetric band")
    {
        RealSpectrum two = RealSpectrum::constant(g, 2.0);
        CHECK(integrate(two, SpectralSet::band(-0.5, 0.5)) == Approx(2.0).epsilon(1e-12));
    }
    SECTION("triangle area vs midpoint rule")
    {
        // gamma(f) = 1 - |f| on [-1, 1]: closed-form area 1; the kink sits on
        // a bin edge, so the midpoint rule is exact per bin up to round-off,
        // and in any case within O(delta_f^2).
        RealSpectrum tri = RealSpectrum::from_function(
            g, [](double f) { return std::max(0.0, 1.0 - std::abs(f)); });
        const double df = g.delta_f();
        CHECK(std::abs(integrate(tri, SpectralSet::band(-1.0, 1.0)) - 1.0) <= df * df);
    }
    SECTION("out-of-range set")
    {
        RealSpectrum one = RealSpectrum::constant(g, 1.0);
        CHECK_THROWS_AS(integrate(one, SpectralSet::band(1.5, 2.5)), std::invalid_argument);
    }
    SECTION("partial bin weighting")
    {
        RealSpectrum one = RealSpectrum::constant(g, 1.0);
        const double df = g.delta_f();
        CHECK(integrate(one, SpectralSet::band(0.0, 0.3 * df)) == Approx(0.3 * df));
    }
}

TEST_CASE("landau rate")
{
    CHECK(landau_rate(SpectralSet::band(-0.5, 0.5)) == Approx(1.0));
    CHECK(landau_rate(SpectralSet{}) == 0.0);
    CHECK(landau_rate(SpectralSet({Interval{0.0, 0.3}, Interval{0.7, 1.0}})) == Approx(0.6));
}

TEST_CASE("SpectralSet normalization")
{
    SECTION("merges overlapping and touching intervals")
    {
        SpectralSet s({Interval{0.0, 0.5}, Interval{0.5, 1.0}, Interval{2.0, 3.0},
                       Interval{2.5, 2.75}});
        REQUIRE(s.intervals().size() == 2);
        CHECK(s.intervals()[0].lo == 0.0);
        CHECK(s.intervals()[0].hi == 1.0);
        CHECK(s.intervals()[1].lo == 2.0);
        CHECK(s.intervals()[1].hi == 3.0);
        CHECK(s.measure() == Approx(2.0));
    }
    SECTION("normalization is idempotent")
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 50; ++trial)
        {
            std::vector<Interval> ivs;
            for (int k = 0; k < 6; ++k)
            {
                double a = u(rng), b = u(rng);
                if (a == b)
                    continue;
                ivs.push_back(Interval{std::min(a, b), std::max(a, b)});
            }
            SpectralSet once(ivs);
            SpectralSet twice(once.intervals());
            REQUIRE(once.intervals().size() == twice.intervals().size());
            for (std::size_t i = 0; i < once.intervals().size(); ++i)
            {
                CHECK(once.intervals()[i].lo == twice.intervals()[i].lo);
                CHECK(once.intervals()[i].hi == twice.intervals()[i].hi);
            }
        }
    }
    SECTION("rejects empty intervals")
    {
        CHECK_THROWS_AS(SpectralSet({Interval{1.0, 1.0}}), std::invalid_argument);
        CHECK_THROWS_AS(SpectralSet({Interval{1.0, 0.5}}), std::invalid_argument);
    }
}

TEST_CASE("integrate properties")
{
    FrequencyGrid g(2.0, 256);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    RealSpectrum gamma = RealSpectrum::from_function(
        g, [&](double f) { return 0.5 + std::cos(2.0 * f) * std::cos(2.0 * f); });

    SECTION("additive over disjoint sets")
    {
        for (int trial = 0; trial < 30; ++trial)
        {
            double a = -2.0 + 2.0 * u(rng);
            double b = a + 0.1 + u(rng);
            double c = b + 0.05 + 0.2 * u(rng);
            double d = std::min(2.0, c + 0.1 + u(rng));
            if (!(c < d))
                continue;
            SpectralSet A = SpectralSet::band(a, b);
            SpectralSet B = SpectralSet::band(c, d);
            const double lhs = integrate(gamma, A.unite(B));
            const double rhs = integrate(gamma, A) + integrate(gamma, B);
            CHECK(lhs == Approx(rhs).epsilon(1e-12));
        }
    }
    SECTION("monotone in the integrand")
    {
        RealSpectrum bigger = RealSpectrum::from_function(
            g, [&](double f) { return 0.6 + std::cos(2.0 * f) * std::cos(2.0 * f); });
        for (int trial = 0; trial < 20; ++trial)
        {
            double a = -2.0 + 3.0 * u(rng);
            double b = std::min(2.0, a + 1.5 * u(rng) + 0.01);
            SpectralSet s = SpectralSet::band(a, b);
            CHECK(integrate(gamma, s) <= integrate(bigger, s));
        }
    }
}

TEST_CASE("channel families evaluate on the grid")
{
    FrequencyGrid g(2.0, 128);
    Channel flat = make_channel(flat_channel(3.0, 1.0), g);
    CHECK(integrate(snr(flat), SpectralSet::band(-0.5, 0.5)) == Approx(3.0));
    CHECK(integrate(snr(flat), SpectralSet::band(-2.0, 2.0)) == Approx(3.0));

    Channel two = make_channel(two_band_channel(4.0, 0.0, 1.0, 1.0, -1.0, 0.0), g);
    CHECK(integrate(snr(two), SpectralSet::band(0.0, 1.0)) == Approx(4.0));
    CHECK(integrate(snr(two), SpectralSet::band(-1.0, 0.0)) == Approx(1.0));

    ChannelSpec pw;
    pw.family = ChannelSpec::Family::piecewise;
    pw.segments = {PiecewiseSegment{-1.0, 0.0, 2.0, 0.5}, PiecewiseSegment{0.5, 1.5, 1.0, 1.0}};
    Channel ch = make_channel(pw, g);
    CHECK(integrate(snr(ch), SpectralSet::band(-1.0, 0.0)) == Approx(4.0));
    CHECK(integrate(snr(ch), SpectralSet::band(0.5, 1.5)) == Approx(1.0));
    CHECK(integrate(snr(ch), SpectralSet::band(0.0, 0.5)) == 0.0);
}
