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

#include "subnyq/alias.hpp"
#include "subnyq/capacity.hpp"
#include "subnyq/channel_families.hpp"
#include "subnyq/errors.hpp"
#include "subnyq/grid.hpp"
#include "subnyq/horizon.hpp"
#include "subnyq/horizon_checks.hpp"
#include "subnyq/integrate.hpp"
#include "subnyq/periodic.hpp"
#include "subnyq/sampler.hpp"
#include "subnyq/sampling_set.hpp"
#include "subnyq/spectral_set.hpp"
#include "subnyq/spectrum.hpp"
#include "subnyq/waterfill.hpp"
