// Copyright 2026 The geoik Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header.

#pragma once

#include "geoik/bench.hpp"
#include "geoik/chain.hpp"
#include "geoik/error.hpp"
#include "geoik/geom.hpp"
#include "geoik/models_io.hpp"
#include "geoik/remodel.hpp"
#include "geoik/solver.hpp"
#include "geoik/subproblems.hpp"
