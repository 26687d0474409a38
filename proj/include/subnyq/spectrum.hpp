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
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subnyq/grid.hpp"

namespace subnyq
{

// One value per grid bin. T is double for power-type spectra (|H|^2, noise
// PSD, SNR) and std::complex<double> for sampler frequency responses.
template <typename T> class Spectrum
{
  public:
    Spectrum(FrequencyGrid grid, std::vector<T> values) : grid_(grid), values_(std::move(values))
    {
        if (static_cast<int>(values_.size()) != grid_.n_bins())
            throw std::invalid_argument("Spectrum: value count must equal n_bins");
        for (const T &v : values_)
            if (!is_finite(v))
                throw std::invalid_argument("Spectrum: values must be finite");
    }

    // Evaluates fn at every bin center.
    static Spectrum from_function(FrequencyGrid grid, const std::function<T(double)> &fn)
    {
        std::vector<T> v(grid.n_bins());
        for (int i = 0; i < grid.n_bins(); ++i)
            v[i] = fn(grid.center(i));
        return Spectrum(grid, std::move(v));
    }

    static Spectrum constant(FrequencyGrid grid, T value)
    {
        return Spectrum(grid, std::vector<T>(grid.n_bins(), value));
    }

    const FrequencyGrid &grid() const { return grid_; }
    const std::vector<T> &values() const { return values_; }
    T operator[](int i) const { return values_[i]; }
    int size() const { return grid_.n_bins(); }

  private:
    static bool is_finite(double x) { return std::isfinite(x); }
    static bool is_finite(std::complex<double> z)
    {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    }

    FrequencyGrid grid_;
    std::vector<T> values_;
};

using RealSpectrum = Spectrum<double>;
using ComplexSpectrum = Spectrum<std::complex<double>>;

inline void require_nonnegative(const RealSpectrum &s, const char *what)
{
    for (double v : s.values())
        if (v < 0.0)
            throw std::invalid_argument(std::string(what) + ": values must be >= 0");
}

inline void require_same_grid(const FrequencyGrid &a, const FrequencyGrid &b, const char *what)
{
    if (a != b)
        throw std::invalid_argument(std::string(what) + ": mismatched frequency grids");
}

// LTI Gaussian channel: squared magnitude response |H(f)|^2 and noise PSD
// S_eta(f) on a shared grid. The noise PSD must be strictly positive; the
// truncated grid makes the SNR integral automatically finite, but it is
// asserted anyway.
class Channel
{
  public:
    Channel(RealSpectrum h_sq, RealSpectrum noise) : h_sq_(std::move(h_sq)), noise_(std::move(noise))
    {
        require_same_grid(h_sq_.grid(), noise_.grid(), "Channel");
        require_nonnegative(h_sq_, "Channel |H|^2");
        for (double v : noise_.values())
            if (!(v > 0.0))
                throw std::invalid_argument("Channel: noise PSD must be strictly positive");
        double snr_integral = 0.0;
        for (int i = 0; i < h_sq_.size(); ++i)
            snr_integral += h_sq_[i] / noise_[i] * h_sq_.grid().delta_f();
        if (!std::isfinite(snr_integral))
            throw std::invalid_argument("Channel: integral of |H|^2/S_eta must be finite");
    }

    const FrequencyGrid &grid() const { return h_sq_.grid(); }
    const RealSpectrum &h_sq() const { return h_sq_; }
    const RealSpectrum &noise() const { return noise_; }

  private:
    RealSpectrum h_sq_;
    RealSpectrum noise_;
};

// Pointwise SNR gamma(f) = |H(f)|^2 / S_eta(f).
inline RealSpectrum snr(const Channel &channel)
{
    std::vector<double> v(channel.grid().n_bins());
    for (int i = 0; i < channel.grid().n_bins(); ++i)
        v[i] = channel.h_sq()[i] / channel.noise()[i];
    return RealSpectrum(channel.grid(), std::move(v));
}

} // namespace subnyq
