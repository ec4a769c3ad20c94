// Copyright 2026 The qswap Authors
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

#include "qswap/qcore.hpp"
#include "qswap/engine_model.hpp"
#include "qswap/circuit.hpp"
#include "qswap/simulator.hpp"
#include "qswap/sampling.hpp"
#include "qswap/engine_circuit.hpp"
#include "qswap/transpiler.hpp"
#include "qswap/experiment.hpp"
#include "qswap/acceptance.hpp"
