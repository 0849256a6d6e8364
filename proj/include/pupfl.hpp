// Copyright 2026 The pupfl Authors
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

// Everything in one include.

#pragma once

#include "pupfl/bench.hpp"
#include "pupfl/benders.hpp"
#include "pupfl/follower.hpp"
#include "pupfl/formulations.hpp"
#include "pupfl/instance.hpp"
#include "pupfl/io.hpp"
#include "pupfl/lp.hpp"
#include "pupfl/metrics.hpp"
#include "pupfl/milp.hpp"
#include "pupfl/oracle.hpp"
#include "pupfl/rng.hpp"
#include "pupfl/separation.hpp"
