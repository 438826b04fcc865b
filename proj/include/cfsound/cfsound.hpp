// SPDX-License-Identifier: Apache-2.0
//
// cfsound - drone virtual-array channel sounding and cell-free massive MIMO analysis
// Copyright (C) 2026 cfsound contributors
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

#include "cfsound/analysis.hpp"
#include "cfsound/channel_metrics.hpp"
#include "cfsound/combining.hpp"
#include "cfsound/config.hpp"
#include "cfsound/dataset_io.hpp"
#include "cfsound/environment.hpp"
#include "cfsound/flight.hpp"
#include "cfsound/geometry.hpp"
#include "cfsound/import.hpp"
#include "cfsound/parallel.hpp"
#include "cfsound/pipeline.hpp"
#include "cfsound/records.hpp"
#include "cfsound/rng.hpp"
#include "cfsound/stats.hpp"
