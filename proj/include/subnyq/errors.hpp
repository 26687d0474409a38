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

// Domain/precondition violations (bad arguments, mismatched grids, ranges)
// are reported as std::invalid_argument with a descriptive message.

// Numerical failure during a computation (non-convergence, loss of
// positive-semidefiniteness beyond tolerance, infeasible water-filling).
class numeric_error : public std::runtime_error
{
  public:
    explicit numeric_error(const std::string &msg) : std::runtime_error(msg) {}
};

// The aliased response matrix of a sampling system is (numerically) rank
// deficient: some sample carries no innovation. Carries the base frequency
// at which the smallest singular value was observed.
class right_invertibility_error : public numeric_error
{
  public:
    right_invertibility_error(const std::string &msg, double base_frequency, double sigma_min)
        : numeric_error(msg), base_frequency(base_frequency), sigma_min(sigma_min)
    {
    }
    double base_frequency;
    double sigma_min;
};

// Raised by a sampler constructor when a requested rate does not land on the
// frequency grid. Carries the nearest rate that would.
class grid_alignment_error : public std::invalid_argument
{
  public:
    grid_alignment_error(const std::string &msg, double suggested_rate)
        : std::invalid_argument(msg), suggested_rate(suggested_rate)
    {
    }
    double suggested_rate;
};

} // namespace subnyq
