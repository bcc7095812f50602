// Copyright 2026 The SplitNash Authors
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

// Core library. The JSON and command-line layers (splitnash/io.hpp,
// splitnash/cli.hpp) are included separately.

#pragma once

#include "splitnash/bertrand.hpp"
#include "splitnash/error.hpp"
#include "splitnash/expr.hpp"
#include "splitnash/game.hpp"
#include "splitnash/models.hpp"
#include "splitnash/numeric.hpp"
#include "splitnash/repeated.hpp"
#include "splitnash/split.hpp"
