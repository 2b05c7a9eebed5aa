// SPDX-License-Identifier: Apache-2.0
//
// cfxl - uplink combining and spectral-efficiency library for near-field cell-free XL-MIMO
// Copyright (C) 2026 The cfxl contributors
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

#ifndef CFXL_CFXL_HPP
#define CFXL_CFXL_HPP

#include "channel.hpp"
#include "combining.hpp"
#include "complexity.hpp"
#include "config.hpp"
#include "core.hpp"
#include "coupling.hpp"
#include "estimation.hpp"
#include "experiment.hpp"
#include "geometry.hpp"
#include "network.hpp"
#include "oracle.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "se_eval.hpp"
#include "specialfn.hpp"
#include "ssor.hpp"

#endif
