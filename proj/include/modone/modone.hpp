// Copyright 2026 The modone Authors
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

#include "modone/core.hpp"
#include "modone/extended_real.hpp"
#include "modone/interval_set.hpp"
#include "modone/numtheory.hpp"
#include "modone/parallel.hpp"
#include "modone/quadrature.hpp"
#include "modone/sequences.hpp"
#include "modone/statistics.hpp"
#include "modone/test_function.hpp"
#include "modone/group.hpp"
#include "modone/theta.hpp"
#include "modone/smooth.hpp"
#include "modone/approximants.hpp"
#include "modone/geometry.hpp"
#include "modone/discrepancy.hpp"
#include "modone/oppenheim.hpp"
#include "modone/report.hpp"
