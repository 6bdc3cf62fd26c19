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

#include "linkoracle/linn/model.hpp"
#include "linkoracle/match/matcher.hpp"
#include "linkoracle/match/qmatch.hpp"

namespace linkoracle::match {

double qmatch(const icc::AbstractIntent& intent, const icc::AbstractFilter& filter,
              const linn::LinnModel& model) {
    switch (abstract_match(intent, filter).tri) {
    case icc::Tri::zero: return 0.0;
    case icc::Tri::one: return 1.0;
    case icc::Tri::top: return linn::forward(model, intent, filter);
    }
    return 0.0;
}

} // namespace linkoracle::match
