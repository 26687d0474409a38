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

#include <stdexcept>
#include <string>

namespace subnyq
{

// Uniform symmetric frequency grid over [-f_max, f_max]. Bin i covers the
// half-open interval [edge(i), edge(i+1)) and is represented by its center.
// Spectra are treated as piecewise constant per bin; energy outside the grid
// range is exactly zero.
class FrequencyGrid
{
  public:
    FrequencyGrid(double f_max, int n_bins) : f_max_(f_max), n_bins_(n_bins)
    {
        if (!(f_max > 0.0))
            throw std::invalid_argument("FrequencyGrid: f_max must be > 0");
        if (n_bins < 2 || n_bins % 2 != 0)
            throw std::invalid_argument("FrequencyGrid: n_bins must be even and >= 2");
    }

    double f_max() const { return f_max_; }
    int n_bins() const { return n_bins_; }
    double delta_f() const { return 2.0 * f_max_ / n_bins_; }

    // Edge k (k = 0..n_bins) and center of bin i. Computed multiplicatively
    // so that edge(0) == -f_max and edge(n_bins) == f_max exactly.
    double edge(int k) const { return f_max_ * (2.0 * k / n_bins_ - 1.0); }
    double center(int i) const { return f_max_ * ((2.0 * i + 1.0) / n_bins_ - 1.0); }

    bool operator==(const FrequencyGrid &o) const
    {
        return f_max_ == o.f_max_ && n_bins_ == o.n_bins_;
    }
    bool operator!=(const FrequencyGrid &o) const { return !(*this == o); }

  private:
    double f_max_;
    int n_bins_;
};

} // namespace subnyq
