// Copyright 2026 The qnfl Authors
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

#pragma once

#include "qnfl/classical.hpp"
#include "qnfl/experiment.hpp"
#include "qnfl/haar.hpp"
#include "qnfl/hypothesis.hpp"
#include "qnfl/linalg.hpp"
#include "qnfl/risk.hpp"
#include "qnfl/rng.hpp"
#include "qnfl/variational.hpp"
#include "qnfl/verify.hpp"
