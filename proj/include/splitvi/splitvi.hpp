// Copyright 2026 The splitvi Authors
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

/// splitvi: projection-based iterative solvers for variational inequalities
/// and their split variants.
///
/// Building blocks:
///  - linalg.hpp       dense vectors, linear maps, spectral-norm estimation
///  - sets.hpp         closed convex sets with exact metric projections
///  - operators.hpp    vector fields with certified constants, P_D(I - lambda h)
///  - cvip.hpp         relaxed extragradient method for the constrained VIP
///  - split.hpp        direct, product-space, and multiple-set split solvers
///  - applications.hpp split feasibility (CQ), minimum-norm SFP, common-VIP
///                     point, split minimization, split zeros
///  - problem_io.hpp   JSON problem files, dispatch, trace emission

#pragma once

#include "splitvi/applications.hpp"
#include "splitvi/cvip.hpp"
#include "splitvi/linalg.hpp"
#include "splitvi/operators.hpp"
#include "splitvi/problem_io.hpp"
#include "splitvi/report.hpp"
#include "splitvi/sets.hpp"
#include "splitvi/split.hpp"
