// Copyright 2026 The coopsim Authors
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

#ifndef COOPSIM_COOPSIM_HPP_
#define COOPSIM_COOPSIM_HPP_

#include "coopsim/audit.hpp"
#include "coopsim/collective.hpp"
#include "coopsim/env_config.hpp"
#include "coopsim/environment.hpp"
#include "coopsim/errors.hpp"
#include "coopsim/matrix.hpp"
#include "coopsim/oracles.hpp"
#include "coopsim/payoff.hpp"
#include "coopsim/policies.hpp"
#include "coopsim/reciprocity.hpp"
#include "coopsim/rng.hpp"
#include "coopsim/rollout.hpp"
#include "coopsim/sequential.hpp"
#include "coopsim/trace_io.hpp"
#include "coopsim/trust.hpp"

#endif  // COOPSIM_COOPSIM_HPP_
