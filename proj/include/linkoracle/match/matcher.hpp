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

#include <optional>
#include <utility>

#include "linkoracle/icc/values.hpp"

namespace linkoracle::match {

struct MatchVerdict {
    icc::Tri tri = icc::Tri::top;
    // A concrete pair with concrete_match = 1. Always present for tri = 1; present for
    // tri = ⊤ when the constructive search found one.
    std::optional<std::pair<icc::ConcreteIntent, icc::ConcreteFilter>> witness;
};

// Sound tri-valued matching:
//   1 ⇒ every concretization pair matches; 0 ⇒ none does; ⊤ otherwise.
// Must-1 is deliberately conservative (literal equality), which can only move links from
// must to may.
MatchVerdict abstract_match(const icc::AbstractIntent& intent, const icc::AbstractFilter& filter);

// Test oracle: enumerates all bounded concretization pairs and applies concrete_match.
icc::Tri brute_force_match(const icc::AbstractIntent& intent, const icc::AbstractFilter& filter,
                           const std::string& alphabet, std::size_t max_fill,
                           const icc::EnumBudget& budget = {});

} // namespace linkoracle::match
