// Copyright 2026 The coalsmooth Authors
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

#ifndef COALSMOOTH_COALSMOOTH_HPP
#define COALSMOOTH_COALSMOOTH_HPP

#include "coalsmooth/chain.hpp"
#include "coalsmooth/core.hpp"
#include "coalsmooth/dynamics.hpp"
#include "coalsmooth/equilibria.hpp"
#include "coalsmooth/error.hpp"
#include "coalsmooth/games/fixtures.hpp"
#include "coalsmooth/games/spec.hpp"
#include "coalsmooth/io/json.hpp"
#include "coalsmooth/rng.hpp"
#include "coalsmooth/smoothness.hpp"
#include "coalsmooth/structure.hpp"

#endif  // COALSMOOTH_COALSMOOTH_HPP
