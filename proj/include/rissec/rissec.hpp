// SPDX-License-Identifier: Apache-2.0
//
// rissec: secrecy-rate optimization for RIS-assisted multi-user downlinks
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

// Umbrella header.

#pragma once

#include "rissec/ao.hpp"
#include "rissec/beamformer.hpp"
#include "rissec/bench.hpp"
#include "rissec/channel.hpp"
#include "rissec/config.hpp"
#include "rissec/config_io.hpp"
#include "rissec/io.hpp"
#include "rissec/manifold.hpp"
#include "rissec/montecarlo.hpp"
#include "rissec/power_alloc.hpp"
#include "rissec/precoder.hpp"
#include "rissec/qam.hpp"
#include "rissec/rates.hpp"
#include "rissec/rcg.hpp"
#include "rissec/rng.hpp"
#include "rissec/state.hpp"
#include "rissec/types.hpp"
#include "rissec/validation.hpp"
