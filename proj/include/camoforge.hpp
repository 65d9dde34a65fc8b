// Copyright 2026 The camoforge Authors
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

#include "camoforge/annotation.hpp"
#include "camoforge/attack.hpp"
#include "camoforge/bench.hpp"
#include "camoforge/bits.hpp"
#include "camoforge/cnf.hpp"
#include "camoforge/device.hpp"
#include "camoforge/hybrid.hpp"
#include "camoforge/metrics.hpp"
#include "camoforge/netlist.hpp"
#include "camoforge/obfuscate.hpp"
#include "camoforge/oracle.hpp"
#include "camoforge/rng.hpp"
#include "camoforge/sat.hpp"
#include "camoforge/simulate.hpp"
