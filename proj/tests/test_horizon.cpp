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

#include <algorithm>
#include <cmath>
#include <random>

#include "subnyq/channel_families.hpp"
#include "subnyq/horizon.hpp"
#include "subnyq/horizon_checks.hpp"
#include "subnyq/periodic.hpp"
#include "subnyq/sampling_set.hpp"

using namespace subnyq;
using Catch::Approx;

TEST_CASE("beurling_density")
{
    SECTION("uniform set has density f_s exactly")
    {
        BeurlingDensityEstimate d = beurling_density(SamplingSet::uniform(2.0), 50.0, 101);
        REQUIRE(d.exact.has_value());
        CHECK(*d.exact == 2.0);
        CHECK(d.upper >= 2.0 - 0.05);
        CHECK(d.upper <= 2.0 + 0.05);
        CHECK(d.lower >= 2.0 - 0.05);
    }
    SECTION("periodic set counts M per period")
    {
        BeurlingDensityEstimate d =
            beurling_density(SamplingSet::periodic(2.0, {0.0, 0.1, 1.0}), 40.0, 81);
        REQUIRE(d.exact.has_value());
        CHECK(*d.exact == Approx(1.5));
        CHECK(d.upper == Approx(1.5).margin(0.1));
        CHECK(d.lower == Approx(1.5).margin(0.1));
    }
    SECTION("explicit finite set gives estimates only")
    {
        BeurlingDensityEstimate d =
            beurling_density(SamplingSet::explicit_times({0.0, 0.5, 0.7, 2.0}), 1.0, 21);
        CHECK_FALSE(d.exact.has_value());
        CHECK(d.upper >= d.lower);
    }
    SECTION("jittered set keeps the base density")
    {
        BeurlingDensityEstimate d = beurling_density(SamplingSet::jittered(1.0, 0.2, 42), 60.0, 61);
        REQUIRE(d.exact.has_value());
        CHECK(*d.exact == 1.0);
    }
}

TEST_CASE("gram matrices: sinc orthogonality oracle")
{
    // Ideal LPF of width f_s, uniform samples at rate f_s over a flat unit
    // channel: R_q approaches f_s * I (orthogonal sinc translates). The
    // kernel window spans a full recurrence period, so diagonals are exact
    // and off-diagonal leakage shrinks with the window length.
    const double f_s = 0.5;
    FrequencyGrid g = commensurate_grid(f_s, 1.25, 5120); // delta_f = 1/2048
    Channel ch = make_channel(flat_channel(1.0, 2.0), g);
    PeriodicSampler s = ideal_lowpass_sampler(g, f_s);

    TimeKernelSet kernels(s, ch, periodic_window_samples(s, 4));
    GramPair grams = gram_matrices(kernels);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
        {
            const double expect = (a == b) ? f_s : 0.0;
            CHECK(std::abs(grams.r_q(a, b) - expect) <= 1e-6);
        }
}

TEST_CASE("gram matrices: single sample and hermiticity")
{
    const double f_s = 0.5;
    FrequencyGrid g = commensurate_grid(f_s, 1.25, 320);
    Channel ch = make_channel(flat_channel(2.0, 1.5), g);
    PeriodicSampler s = ideal_lowpass_sampler(g, f_s);

    SECTION("single sample gives the kernel energies")
    {
        TimeKernelSet kernels(s, ch, {HorizonSample{0, 0.0, 0.0}});
        GramPair grams = gram_matrices(kernels);
        CHECK(grams.r_q(0, 0).real() == Approx(f_s).epsilon(1e-9));
        // int |H|^2 |Q|^2 df over the LPF band
        CHECK(grams.r_hq(0, 0).real() == Approx(2.0 * f_s).epsilon(1e-9));
        CHECK(grams.r_q(0, 0).imag() == Approx(0.0).margin(1e-12));
    }
    SECTION("gram matrices are hermitian to 1e-12")
    {
        TimeKernelSet kernels(s, ch, periodic_window_samples(s, 16));
        GramPair grams = gram_matrices(kernels);
        CHECK((grams.r_q - grams.r_q.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((grams.r_hq - grams.r_hq.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    }
    SECTION("duplicated sample times make R_q singular")
    {
        TimeKernelSet kernels(s, ch,
                              {HorizonSample{0, 0.0, 0.0}, HorizonSample{0, 0.0, 0.0}});
        CHECK_THROWS_AS(finite_capacity(kernels, 1.0, 1.0), right_invertibility_error);
    }
}

TEST_CASE("finite_capacity basics")
{
    const double f_s = 0.5, gain = 2.0;
    FrequencyGrid g = commensurate_grid(f_s, 1.25, 448);
    Channel ch = make_channel(flat_channel(gain, 1.5), g);
    PeriodicSampler s = ideal_lowpass_sampler(g, f_s);
    const int K = 32;
    const double T = K / (2.0 * f_s);
    TimeKernelSet kernels(s, ch, periodic_window_samples(s, K));

    SECTION("zero power gives zero capacity")
    {
        CHECK(finite_capacity(kernels, T, 0.0).capacity == 0.0);
    }
    SECTION("trace bound of the whitened spectrum")
    {
        FiniteCapacityResult r = finite_capacity(kernels, T, 1.0);
        double trace = 0.0;
        for (double lam : r.lambda)
            trace += lam / (2.0 * T);
        CHECK(trace <= kernels.g_energy() * (1.0 + 1e-9));
    }
    SECTION("invariant under permutation of the sample list")
    {
        std::vector<HorizonSample> samples = periodic_window_samples(s, K);
        std::mt19937_64 rng(97);
        std::shuffle(samples.begin(), samples.end(), rng);
        TimeKernelSet shuffled(s, ch, samples);
        const double a = finite_capacity(kernels, T, 1.0).capacity;
        const double b = finite_capacity(shuffled, T, 1.0).capacity;
        CHECK(a == Approx(b).margin(1e-10));
    }
}

TEST_CASE("finite-horizon capacity converges to the periodic formula")
{
    const double P = 1.0;

    SECTION("flat channel, alias-free LPF: error within 2% at 256 samples")
    {
        const double f_s = 0.5;
        FrequencyGrid g = commensurate_grid(f_s, 1.75, 448);
        Channel ch = make_channel(flat_channel(2.0, 1.5), g);
        PeriodicSampler s = ideal_lowpass_sampler(g, f_s);
        const double asymptotic = periodic_capacity(s, ch, P).capacity();

        double prev_err = std::numeric_limits<double>::infinity();
        for (int K : {64, 128, 256})
        {
            const double T = K / (2.0 * f_s);
            TimeKernelSet kernels(s, ch, periodic_window_samples(s, K));
            const double c = finite_capacity(kernels, T, P).capacity;
            const double err = std::abs(c - asymptotic) / asymptotic;
            CHECK(err <= prev_err + 1e-3);
            prev_err = err;
        }
        CHECK(prev_err <= 0.02);
    }
    SECTION("triangle channel, alias-free LPF: nondegenerate symbol")
    {
        const double f_s = 0.5;
        FrequencyGrid g = commensurate_grid(f_s, 1.25, 320);
        Channel ch = make_channel(triangle_channel(3.0, 1.0), g);
        PeriodicSampler s = ideal_lowpass_sampler(g, f_s);
        const double asymptotic = periodic_capacity(s, ch, P).capacity();

        double prev_err = std::numeric_limits<double>::infinity();
        double final_err = 0.0;
        for (int K : {32, 64, 128, 256})
        {
            const double T = K / (2.0 * f_s);
            TimeKernelSet kernels(s, ch, periodic_window_samples(s, K));
            const double c = finite_capacity(kernels, T, P).capacity;
            final_err = std::abs(c - asymptotic) / asymptotic;
            CHECK(final_err <= prev_err + 1e-3);
            prev_err = final_err;
        }
        CHECK(final_err <= 0.01);
    }
}

TEST_CASE("interleaved and native multibranch agree at finite horizon")
{
    const double f_q = 0.5, P = 0.8;
    FrequencyGrid g = commensurate_grid(f_q, 1.25, 320);
    Channel ch = make_channel(flat_channel(1.5, 1.5), g);

    std::vector<SpectralSet> bands = {SpectralSet::band(-0.5, 0.0), SpectralSet::band(0.0, 0.5)};
    PeriodicSampler native = filterbank_sampler(g, bands, f_q);
    PeriodicSampler merged = interleave_multibranch({
        from_single_branch(detail::indicator_response(g, bands[0]), f_q, 0.0),
        from_single_branch(detail::indicator_response(g, bands[1]), f_q, 1.0),
    });

    const int K = 64;
    const double T = K / (2.0 * native.rate());
    const double a =
        finite_capacity(TimeKernelSet(native, ch, periodic_window_samples(native, K)), T, P)
            .capacity;
    const double b =
        finite_capacity(TimeKernelSet(merged, ch, periodic_window_samples(merged, K)), T, P)
            .capacity;
    CHECK(a == Approx(b).margin(1e-9));
}

TEST_CASE("truncation_comparison")
{
    // Gaussian channel: the time kernel decays fast, so truncation bites in
    // a controlled way.
    const double f_s = 0.5, P = 1.0;
    FrequencyGrid g = commensurate_grid(f_s, 1.25, 320);
    // sigma small enough that the spectrum decays to round-off inside the
    // grid; otherwise the hard spectral cutoff puts slow 1/t tails on g
    ChannelSpec spec;
    spec.family = ChannelSpec::Family::gaussian;
    spec.gain = 2.0;
    spec.sigma = 0.2;
    Channel ch = make_channel(spec, g);
    PeriodicSampler s = ideal_lowpass_sampler(g, f_s);
    const int K = 24;
    const double T = K / (2.0 * f_s);
    std::vector<HorizonSample> samples = periodic_window_samples(s, K);

    SECTION("L1 beyond the synthesized support changes nothing")
    {
        TruncationReport rep = truncation_comparison(s, ch, samples, T, 1e9);
        CHECK(rep.xi == 0.0);
        CHECK(rep.max_eigen_deviation == 0.0);
    }
    SECTION("doubling L1 tightens the deviation; trace shift obeys the bound")
    {
        double prev = std::numeric_limits<double>::infinity();
        for (double L1 : {1.0, 2.0, 4.0, 8.0})
        {
            TruncationReport rep = truncation_comparison(s, ch, samples, T, L1);
            CHECK(std::abs(rep.trace_full - rep.trace_truncated) <=
                  rep.trace_shift_bound + 1e-9);
            CHECK(rep.max_eigen_deviation <= prev + 1e-12);
            prev = rep.max_eigen_deviation;
        }
        CHECK(prev <= 1e-5); // L1 = 8 captures essentially all of a gaussian kernel
    }
    (void)P;
}

TEST_CASE("kadec_perturbation_test")
{
    const double f_hat = 0.5, P = 1.0;
    FrequencyGrid g = commensurate_grid(f_hat, 1.25, 320);
    Channel ch = make_channel(flat_channel(2.0, 1.5), g);

    SECTION("zero jitter changes nothing")
    {
        KadecReport rep = kadec_perturbation_test(ch, f_hat, 0.0, 32, P, 7);
        CHECK(rep.abs_delta == 0.0);
    }
    SECTION("jitter at 0.2 of the interval stays within 1%")
    {
        KadecReport rep = kadec_perturbation_test(ch, f_hat, 0.2 / f_hat, 128, P, 11);
        CHECK(rep.rel_delta <= 0.01);
        CHECK(rep.capacity_uniform > 0.0);
    }
    SECTION("jitter at or beyond a quarter interval is rejected")
    {
        CHECK_THROWS_AS(kadec_perturbation_test(ch, f_hat, 0.25 / f_hat, 32, P, 3),
                        std::invalid_argument);
        CHECK_THROWS_AS(kadec_perturbation_test(ch, f_hat, 0.3 / f_hat, 32, P, 3),
                        std::invalid_argument);
    }
}
