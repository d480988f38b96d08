// Copyright 2026 The pbssp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "pbssp/core/types.hpp"
#include "pbssp/core/rng.hpp"
#include "pbssp/core/domain.hpp"
#include "pbssp/core/block_terms.hpp"
#include "pbssp/core/objective.hpp"
#include "pbssp/core/problem.hpp"
#include "pbssp/core/gap.hpp"
#include "pbssp/robust/extract.hpp"
#include "pbssp/robust/robust.hpp"
#include "pbssp/oracles/extragradient.hpp"
#include "pbssp/oracles/saa.hpp"
#include "pbssp/oracles/speg.hpp"
#include "pbssp/oracles/mogda.hpp"
#include "pbssp/problems/regularization.hpp"
#include "pbssp/problems/quadratic.hpp"
#include "pbssp/problems/mdp.hpp"
#include "pbssp/problems/matrix_game.hpp"
#include "pbssp/boosting/plan.hpp"
#include "pbssp/boosting/driver.hpp"
#include "pbssp/boosting/boost.hpp"
#include "pbssp/boosting/rde.hpp"
