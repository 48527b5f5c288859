// SPDX-License-Identifier: Apache-2.0
//
// priorccs: prior-aware 2D convolutional compressive sensing for mmWave beam alignment
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


#ifndef PRIORCCS_PRIORCCS_HPP
#define PRIORCCS_PRIORCCS_HPP

#include "grid.hpp"
#include "array_core.hpp"
#include "rng.hpp"
#include "parallel.hpp"
#include "prior.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "mask_design.hpp"
#include "ccs.hpp"
#include "pipeline.hpp"
#include "learner.hpp"
#include "bench.hpp"
#include "config.hpp"
#include "io.hpp"

#endif
