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
//
// Stability checks on the finite-horizon oracle: eigenvalue perturbation
// under truncation of the channel kernel, and capacity invariance under
// bounded jitter of an alias-free sampling grid.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "subnyq/horizon.hpp"

namespace subnyq
{

namespace detail
{

// Channel kernel g = F^{-1}(H / sqrt(S_eta)) on the tau lattice around 0,
// capped at half the recurrence period.
inline KernelSlice channel_kernel(const Channel &channel)
{
    const FrequencyGrid &g = channel.grid();
    std::vector<std::complex<double>> spec(g.n_bins());
    for (int i = 0; i < g.n_bins(); ++i)
        spec[i] = std::sqrt(channel.h_sq()[i] / channel.noise()[i]);
    const double dt = 1.0 / (2.0 * g.f_max());
    const int D = static_cast<int>(std::floor(0.5 / g.delta_f() / dt));
    // lattice tau_p = p*dt with p in [-D, D]; store start = -D
    return synthesize(spec, g, 0.0, 0.0, dt, -D, D);
}

// s(t_k, tau_p) = dt * sum_u q(t_k, u) g(u - tau_p), a lattice convolution.
inline KernelSlice convolve_with_channel(const KernelSlice &q, const KernelSlice &g_kernel,
                                         double dt)
{
    const int D_lo = g_kernel.start;
    const int D_hi = g_kernel.start + static_cast<int>(g_kernel.values.size()) - 1;
    KernelSlice s;
    s.start = q.start - D_hi;
    s.values.assign(q.values.size() + (D_hi - D_lo), 0.0);
    for (std::size_t uq = 0; uq < q.values.size(); ++uq)
    {
        const std::complex<double> qv = q.values[uq] * dt;
        if (qv == std::complex<double>(0.0, 0.0))
            continue;
        const int u = q.start + static_cast<int>(uq);
        // tau index p = u - d for d in [D_lo, D_hi]
        for (int d = D_lo; d <= D_hi; ++d)
            s.values[u - d - s.start] += qv * g_kernel.values[d - g_kernel.start];
    }
    return s;
}

} // namespace detail

struct TruncationReport
{
    std::vector<double> lambda_full;      // descending
    std::vector<double> lambda_truncated; // same route, kernel zeroed for |t| > L1
    double max_eigen_deviation = 0.0;
    double trace_full = 0.0;      // (1/2T) sum lambda_i
    double trace_truncated = 0.0;
    double xi = 0.0;  // tail energy of g beyond L1
    double c_g = 0.0; // total kernel energy int |g|^2 dt
    double trace_shift_bound = 0.0; // xi + 2 sqrt(xi c_g)
};

// Eigenvalues of the whitened finite-horizon operator computed twice, with
// the channel kernel g and with g zeroed outside [-L1, L1]. Both routes
// build the signal kernels by time-domain convolution so the truncated case
// differs from the full one only through the dropped tail.
inline TruncationReport truncation_comparison(const PeriodicSampler &sampler,
                                              const Channel &channel,
                                              const std::vector<HorizonSample> &samples, double T,
                                              double L1, double eps_min = kDefaultSigmaFloor)
{
    if (!(L1 > 0.0) || !(T > 0.0))
        throw std::invalid_argument("truncation_comparison: need L1 > 0 and T > 0");
    TimeKernelSet kernels(sampler, channel, samples);
    const double dt = kernels.dt();

    detail::KernelSlice g_full = detail::channel_kernel(channel);
    detail::KernelSlice g_trunc = g_full;
    TruncationReport rep;
    rep.c_g = detail::slice_energy(g_full, dt);
    for (std::size_t p = 0; p < g_trunc.values.size(); ++p)
    {
        const double t = (g_trunc.start + static_cast<int>(p)) * dt;
        if (std::abs(t) > L1)
        {
            rep.xi += std::norm(g_trunc.values[p]) * dt;
            g_trunc.values[p] = 0.0;
        }
    }
    rep.trace_shift_bound = rep.xi + 2.0 * std::sqrt(rep.xi * rep.c_g);

    GramPair full, trunc;
    const int K = kernels.count();
    full.r_q.resize(K, K);
    full.r_hq.resize(K, K);
    trunc.r_hq.resize(K, K);
    std::vector<detail::KernelSlice> s_full, s_trunc;
    s_full.reserve(K);
    s_trunc.reserve(K);
    for (int k = 0; k < K; ++k)
    {
        s_full.push_back(detail::convolve_with_channel(kernels.noise_kernels()[k], g_full, dt));
        s_trunc.push_back(detail::convolve_with_channel(kernels.noise_kernels()[k], g_trunc, dt));
    }
    for (int a = 0; a < K; ++a)
        for (int b = a; b < K; ++b)
        {
            full.r_q(a, b) = detail::slice_inner(kernels.noise_kernels()[a],
                                                 kernels.noise_kernels()[b], dt);
            full.r_q(b, a) = std::conj(full.r_q(a, b));
            full.r_hq(a, b) = detail::slice_inner(s_full[a], s_full[b], dt);
            full.r_hq(b, a) = std::conj(full.r_hq(a, b));
            trunc.r_hq(a, b) = detail::slice_inner(s_trunc[a], s_trunc[b], dt);
            trunc.r_hq(b, a) = std::conj(trunc.r_hq(a, b));
        }
    trunc.r_q = full.r_q;

    rep.lambda_full = whitened_gram_eigenvalues(full, eps_min).lambda;
    rep.lambda_truncated = whitened_gram_eigenvalues(trunc, eps_min).lambda;
    for (std::size_t i = 0; i < rep.lambda_full.size(); ++i)
    {
        rep.max_eigen_deviation = std::max(
            rep.max_eigen_deviation, std::abs(rep.lambda_full[i] - rep.lambda_truncated[i]));
        rep.trace_full += rep.lambda_full[i] / (2.0 * T);
        rep.trace_truncated += rep.lambda_truncated[i] / (2.0 * T);
    }
    return rep;
}

struct KadecReport
{
    double capacity_uniform = 0.0;
    double capacity_perturbed = 0.0;
    double abs_delta = 0.0;
    double rel_delta = 0.0;
    double jitter_amplitude = 0.0;
    std::uint64_t seed = 0;
};

// Jitter stability of an alias-free design: uniform sampling at f_hat behind
// an ideal lowpass of width f_hat, against the same grid perturbed by
// |delta_n| <= a. The classical quarter-interval condition a < 1/(4 f_hat)
// is a hard precondition; requests at or beyond it are rejected.
inline KadecReport kadec_perturbation_test(const Channel &channel, double f_hat,
                                           double jitter_amplitude, int count, double P,
                                           std::uint64_t seed,
                                           double eps_min = kDefaultSigmaFloor)
{
    if (!(f_hat > 0.0) || count < 2)
        throw std::invalid_argument("kadec_perturbation_test: need f_hat > 0 and count >= 2");
    if (!(jitter_amplitude >= 0.0) || jitter_amplitude >= 0.25 / f_hat)
        throw std::invalid_argument(
            "kadec_perturbation_test: jitter amplitude must satisfy a < 1/(4 f_hat)");

    const PeriodicSampler sampler = ideal_lowpass_sampler(channel.grid(), f_hat);
    const double T = count / (2.0 * f_hat);

    std::vector<HorizonSample> uniform = periodic_window_samples(sampler, count);
    std::vector<HorizonSample> perturbed = uniform;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-jitter_amplitude, jitter_amplitude);
    for (HorizonSample &s : perturbed)
    {
        const double d = (jitter_amplitude > 0.0) ? dist(rng) : 0.0;
        s.shift += d;
        s.time += d;
    }

    KadecReport rep;
    rep.jitter_amplitude = jitter_amplitude;
    rep.seed = seed;
    rep.capacity_uniform =
        finite_capacity(TimeKernelSet(sampler, channel, uniform), T, P, eps_min).capacity;
    rep.capacity_perturbed =
        finite_capacity(TimeKernelSet(sampler, channel, perturbed), T, P, eps_min).capacity;
    rep.abs_delta = std::abs(rep.capacity_perturbed - rep.capacity_uniform);
    rep.rel_delta = rep.abs_delta / std::max(rep.capacity_uniform, 1e-300);
    return rep;
}

} // namespace subnyq
