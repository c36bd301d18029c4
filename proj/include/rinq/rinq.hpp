// Copyright 2026 The rinq Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

// Convenience header: everything except the CLI and the network fetcher.

#include "rinq/analysis.hpp"
#include "rinq/annealer.hpp"
#include "rinq/centrality.hpp"
#include "rinq/error.hpp"
#include "rinq/matrix.hpp"
#include "rinq/pdb.hpp"
#include "rinq/qubo.hpp"
#include "rinq/rin.hpp"
