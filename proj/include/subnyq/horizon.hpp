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
// Finite-horizon time-domain oracle. The gridded spectra define a
// band-limited world; kernels are synthesized by inverse discrete transform
// at the critical step dt = 1/(2 f_max), Gram (correlation) matrices are
// assembled by trapezoid quadrature in time, and the finite-T capacity
// water-fills the eigenvalues of the whitened Gram pair with per-eigenvalue
// weight 1/(2T). For periodic samplers this converges to the alias-matrix
// capacity as the horizon grows (block-Toeplitz asymptotics), which makes
// the module an independent check on the frequency-domain formulas.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "subnyq/alias.hpp"
#include "subnyq/errors.hpp"
#include "subnyq/sampler.hpp"
#include "subnyq/sampling_set.hpp"
#include "subnyq/spectrum.hpp"
#include "subnyq/waterfill.hpp"

namespace subnyq
{

// One materialized sample of a sampling system: which branch response it
// uses, the time shift applied to that response, and the absolute time.
struct HorizonSample
{
    int branch = 0;
    double shift = 0.0;
    double time = 0.0;
};

// `count` consecutive samples of a periodic system, centered on t = 0.
inline std::vector<HorizonSample> periodic_window_samples(const PeriodicSampler &sampler,
                                                          int count)
{
    const int M = sampler.branches();
    std::vector<HorizonSample> out;
    out.reserve(count);
    const int s0 = -count / 2;
    for (int s = s0; s < s0 + count; ++s)
    {
        int k = s % M;
        if (k < 0)
            k += M;
        const auto n = static_cast<double>((s - k) / M);
        out.push_back(HorizonSample{k, n * sampler.period(),
                                    sampler.offsets()[k] + n * sampler.period()});
    }
    return out;
}

namespace detail
{

// A kernel sampled on a slice of the global tau lattice.
struct KernelSlice
{
    int start = 0; // index into the global lattice
    std::vector<std::complex<double>> values;
};

// Synthesizes sum_i c_i exp(-j 2 pi f_i (tau - shift)) * delta_f on lattice
// points p0..p1 of the lattice tau_p = tau0 + p*dt.
inline KernelSlice synthesize(const std::vector<std::complex<double>> &coeff,
                              const FrequencyGrid &grid, double shift, double tau0, double dt,
                              int p0, int p1)
{
    KernelSlice slice;
    slice.start = p0;
    slice.values.resize(p1 - p0 + 1);
    const double df = grid.delta_f();
    for (int i = 0; i < grid.n_bins(); ++i)
    {
        const std::complex<double> c = coeff[i] * df;
        if (c == std::complex<double>(0.0, 0.0))
            continue;
        const double f = grid.center(i);
        const double tau_first = tau0 + p0 * dt - shift;
        // incremental rotation across the lattice
        std::complex<double> w = std::polar(1.0, -2.0 * M_PI * f * tau_first);
        const std::complex<double> step = std::polar(1.0, -2.0 * M_PI * f * dt);
        for (std::size_t p = 0; p < slice.values.size(); ++p)
        {
            slice.values[p] += c * w;
            w *= step;
        }
    }
    return slice;
}

// Trapezoid inner product of two slices over their overlap.
inline std::complex<double> slice_inner(const KernelSlice &a, const KernelSlice &b, double dt)
{
    const int lo = std::max(a.start, b.start);
    const int hi = std::min(a.start + static_cast<int>(a.values.size()),
                            b.start + static_cast<int>(b.values.size())) -
                   1;
    if (hi < lo)
        return 0.0;
    std::complex<double> acc = 0.0;
    for (int p = lo; p <= hi; ++p)
    {
        std::complex<double> term = a.values[p - a.start] * std::conj(b.values[p - b.start]);
        if (p == lo || p == hi)
            term *= 0.5;
        acc += term;
    }
    return acc * dt;
}

inline double slice_energy(const KernelSlice &s, double dt)
{
    double acc = 0.0;
    for (std::size_t p = 0; p < s.values.size(); ++p)
    {
        double term = std::norm(s.values[p]);
        if (p == 0 || p + 1 == s.values.size())
            term *= 0.5;
        acc += term;
    }
    return acc * dt;
}

// Trims lattice bounds [p0, p1] of a kernel centered at `center` so that the
// dropped tail energy stays below tol * total (spectral total, Parseval on
// one recurrence period).
inline void trim_to_energy(const KernelSlice &full, double dt, double total, double tol, int &p0,
                           int &p1)
{
    const double budget = 0.5 * tol * total / dt;
    double acc = 0.0;
    int lo = 0;
    while (lo + 1 < static_cast<int>(full.values.size()) &&
           acc + std::norm(full.values[lo]) <= budget)
        acc += std::norm(full.values[lo++]);
    acc = 0.0;
    int hi = static_cast<int>(full.values.size()) - 1;
    while (hi > lo && acc + std::norm(full.values[hi]) <= budget)
        acc += std::norm(full.values[hi--]);
    p1 = full.start + hi;
    p0 = full.start + lo;
}

} // namespace detail

// The materialized time-domain description of (sampler, channel, samples):
// per sample, the noise-composed kernel q(t_k, .) and the signal kernel
// s(t_k, .) = g * q(t_k, .), both on a shared tau lattice with step
// dt = 1/(2 f_max). Kernel supports are capped at half the recurrence
// period of the discrete spectra and trimmed where the tail energy drops
// below tail_tol of the total; the largest relative energy loss is reported.
class TimeKernelSet
{
  public:
    TimeKernelSet(const PeriodicSampler &sampler, const Channel &channel,
                  std::vector<HorizonSample> samples, double tail_tol = 1e-10)
        : samples_(std::move(samples)), dt_(1.0 / (2.0 * channel.grid().f_max()))
    {
        require_same_grid(sampler.grid(), channel.grid(), "TimeKernelSet");
        if (samples_.empty())
            throw std::invalid_argument("TimeKernelSet: need at least one sample");
        const FrequencyGrid &g = channel.grid();

        // Per-branch spectra: noise route Q_k sqrt(S_eta), signal route
        // Q_k sqrt(|H|^2) (the whitened factors recombine in the Gram pair).
        const int M = sampler.branches();
        std::vector<std::vector<std::complex<double>>> noise_spec(M), signal_spec(M);
        std::vector<double> noise_total(M, 0.0), signal_total(M, 0.0);
        for (int k = 0; k < M; ++k)
        {
            noise_spec[k].resize(g.n_bins());
            signal_spec[k].resize(g.n_bins());
            for (int i = 0; i < g.n_bins(); ++i)
            {
                const std::complex<double> q = sampler.responses()[k][i];
                noise_spec[k][i] = q * std::sqrt(channel.noise()[i]);
                signal_spec[k][i] = q * std::sqrt(channel.h_sq()[i]);
                noise_total[k] += std::norm(noise_spec[k][i]) * g.delta_f();
                signal_total[k] += std::norm(signal_spec[k][i]) * g.delta_f();
            }
        }

        g_energy_ = 0.0;
        for (int i = 0; i < g.n_bins(); ++i)
            g_energy_ += channel.h_sq()[i] / channel.noise()[i] * g.delta_f();

        // Global lattice covering every sample's maximal support window.
        const double half = 0.5 / g.delta_f(); // half the recurrence period
        double t_min = samples_.front().time, t_max = samples_.front().time;
        for (const HorizonSample &s : samples_)
        {
            t_min = std::min(t_min, s.time);
            t_max = std::max(t_max, s.time);
        }
        tau0_ = t_min - half;
        const int n_lattice = static_cast<int>(std::ceil((t_max + half - tau0_) / dt_)) + 2;

        truncation_loss_ = 0.0;
        noise_kernels_.reserve(samples_.size());
        signal_kernels_.reserve(samples_.size());
        for (const HorizonSample &s : samples_)
        {
            // exactly one recurrence period (n_bins intervals): the trapezoid
            // rule then extracts the DC term of the periodic integrand
            // exactly, making diagonal Gram entries match Parseval energies
            const int c0 = std::max(0, lattice_index(s.time - half));
            const int c1 = std::min(n_lattice - 1, c0 + g.n_bins());
            detail::KernelSlice nk =
                detail::synthesize(noise_spec[s.branch], g, s.shift, tau0_, dt_, c0, c1);
            detail::KernelSlice sk =
                detail::synthesize(signal_spec[s.branch], g, s.shift, tau0_, dt_, c0, c1);

            if (tail_tol > 0.0)
            {
                int p0 = c0, p1 = c1;
                detail::trim_to_energy(nk, dt_, noise_total[s.branch], tail_tol, p0, p1);
                int q0 = c0, q1 = c1;
                if (signal_total[s.branch] > 0.0)
                    detail::trim_to_energy(sk, dt_, signal_total[s.branch], tail_tol, q0, q1);
                const int lo = std::min(p0, q0), hi = std::max(p1, q1);
                // trim only when it saves real work: a full window spans one
                // recurrence period exactly and keeps the quadrature exact,
                // so nibbling a few end points would only hurt
                if ((lo - c0) + (c1 - hi) > (c1 - c0) / 10)
                {
                    nk.values.erase(nk.values.begin() + (hi - c0 + 1), nk.values.end());
                    nk.values.erase(nk.values.begin(), nk.values.begin() + (lo - c0));
                    nk.start = lo;
                    sk.values.erase(sk.values.begin() + (hi - c0 + 1), sk.values.end());
                    sk.values.erase(sk.values.begin(), sk.values.begin() + (lo - c0));
                    sk.start = lo;
                }
            }
            if (noise_total[s.branch] > 0.0)
                truncation_loss_ = std::max(
                    truncation_loss_,
                    1.0 - detail::slice_energy(nk, dt_) / noise_total[s.branch]);
            noise_kernels_.push_back(std::move(nk));
            signal_kernels_.push_back(std::move(sk));
        }
    }

    int count() const { return static_cast<int>(samples_.size()); }
    double dt() const { return dt_; }
    const std::vector<HorizonSample> &samples() const { return samples_; }
    double g_energy() const { return g_energy_; } // int |g|^2 dt, computed spectrally
    double truncation_loss() const { return truncation_loss_; }
    const std::vector<detail::KernelSlice> &noise_kernels() const { return noise_kernels_; }
    const std::vector<detail::KernelSlice> &signal_kernels() const { return signal_kernels_; }

  private:
    int lattice_index(double tau) const
    {
        return static_cast<int>(std::floor((tau - tau0_) / dt_));
    }

    std::vector<HorizonSample> samples_;
    double dt_;
    double tau0_ = 0.0;
    double g_energy_ = 0.0;
    double truncation_loss_ = 0.0;
    std::vector<detail::KernelSlice> noise_kernels_;
    std::vector<detail::KernelSlice> signal_kernels_;
};

struct GramPair
{
    Eigen::MatrixXcd r_q;  // sampler-noise correlations
    Eigen::MatrixXcd r_hq; // channel-composed signal correlations
};

// (R_q)_{kl} = int q(t_k, tau) q*(t_l, tau) dtau and the analogous R_hq for
// the channel-composed responses, by trapezoid quadrature on the tau lattice.
// Both are Hermitian up to quadrature round-off and are symmetrized.
inline GramPair gram_matrices(const TimeKernelSet &kernels)
{
    const int K = kernels.count();
    GramPair g{Eigen::MatrixXcd(K, K), Eigen::MatrixXcd(K, K)};
    for (int a = 0; a < K; ++a)
        for (int b = a; b < K; ++b)
        {
            g.r_q(a, b) = detail::slice_inner(kernels.noise_kernels()[a],
                                              kernels.noise_kernels()[b], kernels.dt());
            g.r_hq(a, b) = detail::slice_inner(kernels.signal_kernels()[a],
                                               kernels.signal_kernels()[b], kernels.dt());
            g.r_q(b, a) = std::conj(g.r_q(a, b));
            g.r_hq(b, a) = std::conj(g.r_hq(a, b));
        }
    return g;
}

struct FiniteCapacityResult
{
    double capacity = 0.0;          // nats/s
    std::vector<double> lambda;     // whitened eigenvalues, descending
    WaterfillSolution solution;
    double sigma_min = 0.0;         // smallest eigenvalue of R_q
    double sigma_max = 0.0;
};

struct WhitenedEigenvalues
{
    std::vector<double> lambda; // descending, clamped at zero
    double sigma_min = 0.0;     // extreme eigenvalues of R_q
    double sigma_max = 0.0;
};

// Eigenvalues of R_q^{-1/2} R_hq R_q^{-1/2} after symmetrizing both inputs.
// R_q below the relative floor raises right_invertibility_error.
inline WhitenedEigenvalues whitened_gram_eigenvalues(const GramPair &grams,
                                                     double eps_min = kDefaultSigmaFloor)
{
    const int K = static_cast<int>(grams.r_q.rows());
    Eigen::MatrixXcd r_q = 0.5 * (grams.r_q + grams.r_q.adjoint());
    Eigen::MatrixXcd r_hq = 0.5 * (grams.r_hq + grams.r_hq.adjoint());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eq(r_q);
    WhitenedEigenvalues out;
    out.sigma_min = eq.eigenvalues().minCoeff();
    out.sigma_max = eq.eigenvalues().maxCoeff();
    if (!(out.sigma_max > 0.0) || out.sigma_min < eps_min * out.sigma_max)
        throw right_invertibility_error(
            "whitened_gram_eigenvalues: sample correlation matrix R_q is rank deficient "
            "(sigma_min = " +
                std::to_string(std::max(0.0, out.sigma_min)) + ")",
            0.0, std::max(0.0, out.sigma_min));

    Eigen::MatrixXcd inv_sqrt = eq.eigenvectors() *
                                eq.eigenvalues().array().rsqrt().matrix().asDiagonal() *
                                eq.eigenvectors().adjoint();
    Eigen::MatrixXcd w = inv_sqrt * r_hq * inv_sqrt;
    w = 0.5 * (w + w.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ew(w, Eigen::EigenvaluesOnly);

    const double scale = std::max(1.0, ew.eigenvalues().cwiseAbs().maxCoeff());
    out.lambda.resize(K);
    for (int i = 0; i < K; ++i)
    {
        double v = ew.eigenvalues()(K - 1 - i);
        if (v < -1e-8 * scale)
            throw numeric_error("whitened_gram_eigenvalues: whitened Gram matrix is not PSD "
                                "within tolerance");
        out.lambda[i] = std::max(0.0, v);
    }
    return out;
}

// Whitened eigenvalues of the Gram pair water-filled with per-eigenvalue
// weight 1/(2T):
//   C_T = (1/2T) sum_i (1/2)[ln(nu lambda_i)]^+,
//   (1/2T) sum_i [nu - 1/lambda_i]^+ = P.
inline FiniteCapacityResult finite_capacity_from_grams(const GramPair &grams, double T, double P,
                                                       double eps_min = kDefaultSigmaFloor)
{
    if (!(T > 0.0))
        throw std::invalid_argument("finite_capacity: horizon T must be > 0");
    WhitenedEigenvalues eigs = whitened_gram_eigenvalues(grams, eps_min);

    FiniteCapacityResult r;
    r.sigma_min = eigs.sigma_min;
    r.sigma_max = eigs.sigma_max;
    r.lambda = std::move(eigs.lambda);

    std::vector<GainComponent> components;
    components.reserve(r.lambda.size());
    for (double lam : r.lambda)
        components.push_back(GainComponent{lam, 1.0 / (2.0 * T)});
    r.solution = waterfill_weighted(components, P);
    r.capacity = r.solution.capacity_nats_per_sec;
    return r;
}

inline FiniteCapacityResult finite_capacity(const TimeKernelSet &kernels, double T, double P,
                                            double eps_min = kDefaultSigmaFloor)
{
    return finite_capacity_from_grams(gram_matrices(kernels), T, P, eps_min);
}

} // namespace subnyq
