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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "subnyq/errors.hpp"
#include "subnyq/sampler.hpp"
#include "subnyq/spectrum.hpp"

namespace subnyq
{

// Default relative floor for the smallest eigenvalue of F_q F_q^*; below it
// the sampling system is treated as not right-invertible. The value is a
// configuration knob, not a physical constant.
inline constexpr double kDefaultSigmaFloor = 1e-8;

// Commensurability bookkeeping: with f_q an even integer multiple m of the
// bin width, every alias f + l f_q of a bin center is again a bin center and
// the base band [-f_q/2, f_q/2) consists of the m central bins. Base bin j
// owns the alias family of channel bins {center(j) + l m : l = -L..L}; the
// order L is generous enough to reach the grid edges, and aliases that fall
// outside the grid are exactly zero.
struct AliasLayout
{
    int m = 0; // bins per alias period = f_q / delta_f (even)
    int L = 0; // one-sided alias order covering the whole grid
};

inline AliasLayout alias_layout(const FrequencyGrid &grid, double f_q)
{
    const double df = grid.delta_f();
    const double ratio = f_q / df;
    double m_rounded = std::round(ratio);
    const bool aligned = std::abs(ratio - m_rounded) <= 1e-9 * std::max(1.0, ratio);
    if (!aligned || m_rounded < 2.0 || static_cast<long long>(m_rounded) % 2 != 0 ||
        m_rounded > grid.n_bins())
    {
        double suggestion = std::round(ratio / 2.0) * 2.0;
        suggestion = std::min(std::max(2.0, suggestion), static_cast<double>(grid.n_bins()));
        throw grid_alignment_error(
            "alias_layout: f_q must be an even integer multiple of the bin width (and at most "
            "the grid bandwidth); nearest aligned f_q is " +
                std::to_string(suggestion * df),
            suggestion * df);
    }
    const int m = static_cast<int>(m_rounded);
    const int L = (grid.n_bins() + m - 1) / (2 * m); // ceil((n - m) / 2m) with margin
    return AliasLayout{m, L};
}

// Nearest grid to (f_max_hint, n_bins_hint) on which f_q is an even integer
// multiple of the bin width. The range only ever grows, so a channel
// description is never truncated by re-gridding.
inline FrequencyGrid commensurate_grid(double f_q, double f_max_hint, int n_bins_hint)
{
    if (!(f_q > 0.0) || !(f_max_hint > 0.0) || n_bins_hint < 2)
        throw std::invalid_argument("commensurate_grid: invalid hints");
    const double df_hint = 2.0 * f_max_hint / n_bins_hint;
    int m = static_cast<int>(std::round(f_q / df_hint / 2.0)) * 2;
    m = std::max(2, m);
    const double df = f_q / m;
    int half = static_cast<int>(std::ceil(f_max_hint / df - 1e-9));
    half = std::max(half, m / 2);
    return FrequencyGrid(half * df, 2 * half);
}

// Per base-frequency Fourier-series matrices of a periodic sampling system:
// F_q(f) holds the sampler responses at the aliased frequencies f + l f_q,
// F_h(f) the whitened channel gains sqrt(|H|^2/S_eta) there.
struct AliasMatrices
{
    FrequencyGrid base;         // m bins over [-f_q/2, f_q/2)
    FrequencyGrid channel_grid; // the grid everything was sampled on
    double f_q = 0.0;
    AliasLayout layout;
    int M = 0;                              // sample phases per period
    std::vector<Eigen::MatrixXcd> F_q;      // per base bin: M x (2L+1)
    std::vector<Eigen::VectorXd> F_h_diag;  // per base bin: 2L+1 entries, sqrt(gamma)

    int n_base() const { return layout.m; }
    int aliases() const { return 2 * layout.L + 1; }
    // Channel bin holding alias a (0-based) of base bin j.
    int channel_bin(int j, int a) const { return j + a * layout.m; }
};

inline AliasMatrices build_alias_matrices(const PeriodicSampler &sampler, const Channel &channel)
{
    require_same_grid(sampler.grid(), channel.grid(), "build_alias_matrices");
    const FrequencyGrid &g = channel.grid();
    const AliasLayout lay = alias_layout(g, sampler.f_q());
    const int m = lay.m;
    const int A = 2 * lay.L + 1;
    const int M = sampler.branches();

    AliasMatrices am{FrequencyGrid(sampler.f_q() / 2.0, m), g, sampler.f_q(), lay, M, {}, {}};
    am.F_q.reserve(m);
    am.F_h_diag.reserve(m);

    const RealSpectrum gamma = snr(channel);
    for (int j = 0; j < m; ++j)
    {
        Eigen::MatrixXcd Fq(M, A);
        Eigen::VectorXd Fh(A);
        for (int a = 0; a < A; ++a)
        {
            const int bin = am.channel_bin(j, a);
            Fh(a) = std::sqrt(gamma[bin]);
            for (int k = 0; k < M; ++k)
                Fq(k, a) = sampler.responses()[k][bin];
        }
        am.F_q.push_back(std::move(Fq));
        am.F_h_diag.push_back(std::move(Fh));
    }
    return am;
}

struct RightInvertibilityReport
{
    double sigma_min = 0.0;      // min over base bins of lambda_min(F_q F_q^*)
    double sigma_max = 0.0;      // max over base bins of lambda_max(F_q F_q^*)
    double at_base_frequency = 0.0;
    bool ok = false;
};

// Minimum singular value of F_q F_q^* over the base band. The system counts
// as right-invertible when the minimum stays above eps_min relative to the
// largest observed eigenvalue ("uniformly bounded away from zero"). Reports
// only; callers decide whether to raise.
inline RightInvertibilityReport right_invertibility_check(const AliasMatrices &am,
                                                          double eps_min = kDefaultSigmaFloor)
{
    RightInvertibilityReport rep;
    rep.sigma_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j < am.n_base(); ++j)
    {
        Eigen::MatrixXcd gram = am.F_q[j] * am.F_q[j].adjoint();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
        const double lo = std::max(0.0, es.eigenvalues().minCoeff());
        const double hi = es.eigenvalues().maxCoeff();
        rep.sigma_max = std::max(rep.sigma_max, hi);
        if (lo < rep.sigma_min)
        {
            rep.sigma_min = lo;
            rep.at_base_frequency = am.base.center(j);
        }
    }
    rep.ok = rep.sigma_max > 0.0 && rep.sigma_min >= eps_min * rep.sigma_max;
    return rep;
}

// Per base frequency: eigenvalues of the whitened channel matrix
//   (F_q F_q^*)^{-1/2} F_q F_h F_h^* F_q^* (F_q F_q^*)^{-1/2},
// sorted descending, plus the smallest eigenvalue of F_q F_q^*.
struct EigenProfile
{
    FrequencyGrid base;
    std::vector<std::vector<double>> lambda;
    std::vector<double> sigma_min;

    int branches() const { return lambda.empty() ? 0 : static_cast<int>(lambda[0].size()); }
};

// Whitening uses a Hermitian eigen-decomposition of F_q F_q^* with a hard
// relative floor: an eigenvalue below eps_min * (largest over the base band)
// raises right_invertibility_error instead of being regularized.
inline EigenProfile eigen_profile(const AliasMatrices &am, double eps_min = kDefaultSigmaFloor)
{
    const int M = am.M;
    EigenProfile prof{am.base, {}, {}};
    prof.lambda.resize(am.n_base());
    prof.sigma_min.resize(am.n_base());

    std::vector<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>> grams(am.n_base());
    double scale = 0.0;
    for (int j = 0; j < am.n_base(); ++j)
    {
        Eigen::MatrixXcd gram = am.F_q[j] * am.F_q[j].adjoint();
        grams[j].compute(gram);
        scale = std::max(scale, grams[j].eigenvalues().maxCoeff());
        prof.sigma_min[j] = std::max(0.0, grams[j].eigenvalues().minCoeff());
    }
    if (!(scale > 0.0))
        throw right_invertibility_error("eigen_profile: sampler response is identically zero",
                                        am.base.center(0), 0.0);

    for (int j = 0; j < am.n_base(); ++j)
    {
        const Eigen::VectorXd &a = grams[j].eigenvalues();
        if (a.minCoeff() < eps_min * scale)
            throw right_invertibility_error(
                "eigen_profile: F_q F_q^* is rank deficient at base frequency " +
                    std::to_string(am.base.center(j)) + " (sigma_min = " +
                    std::to_string(std::max(0.0, a.minCoeff())) + ")",
                am.base.center(j), std::max(0.0, a.minCoeff()));

        Eigen::MatrixXcd inv_sqrt = grams[j].eigenvectors() *
                                    a.array().rsqrt().matrix().asDiagonal() *
                                    grams[j].eigenvectors().adjoint();
        // W = (C C^*) with C = (F_q F_q^*)^{-1/2} F_q F_h keeps the product
        // Hermitian PSD by construction.
        Eigen::MatrixXcd C = inv_sqrt * am.F_q[j] * am.F_h_diag[j].asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C * C.adjoint(), Eigen::EigenvaluesOnly);

        std::vector<double> lam(M);
        for (int i = 0; i < M; ++i)
        {
            double v = es.eigenvalues()(M - 1 - i); // descending
            if (v < -1e-6 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()))
                throw numeric_error("eigen_profile: whitened matrix lost positive "
                                    "semidefiniteness beyond tolerance");
            lam[i] = std::max(0.0, v);
        }
        prof.lambda[j] = std::move(lam);
    }
    return prof;
}

} // namespace subnyq
