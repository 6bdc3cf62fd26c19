// Copyright 2026-present the linkoracle project
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

#include "linkoracle/icc/values.hpp"

namespace linkoracle::linn {
struct LinnModel;
}

namespace linkoracle::match {

// Quantitative abstract matching: exactly 0 or 1 on must verdicts, the model probability
// on may verdicts.
double qmatch(const icc::AbstractIntent& intent, const icc::AbstractFilter& filter,
              const linn::LinnModel& model);

} // namespace linkoracle::match
