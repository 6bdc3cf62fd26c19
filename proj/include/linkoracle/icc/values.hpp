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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linkoracle/icc/pattern.hpp"

namespace linkoracle::icc {

// Tri-valued verdict: definite no-link, definite link, or unknown.
enum class Tri : std::uint8_t { zero = 0, one = 1, top = 2 };

// Kleene conjunction: 0 ∧ x = 0; 1 ∧ 1 = 1; otherwise ⊤.
inline Tri kleene_and(Tri a, Tri b) {
    if (a == Tri::zero || b == Tri::zero) return Tri::zero;
    if (a == Tri::one && b == Tri::one) return Tri::one;
    return Tri::top;
}

std::string tri_to_string(Tri t);

// An intent is (action, categories); the action may be the undefined value ω, which is a
// distinct value, never the empty string. Strings are case-folded at construction.
class ConcreteIntent {
public:
    // Default rule: categories instantiated to the singleton {"default"}.
    static ConcreteIntent with_default_category(std::optional<std::string> action);
    static ConcreteIntent make(std::optional<std::string> action, std::vector<std::string> cats);

    const std::optional<std::string>& action() const { return action_; }
    const std::vector<std::string>& categories() const { return cats_; } // sorted, unique

    bool operator==(const ConcreteIntent&) const = default;

private:
    std::optional<std::string> action_; // nullopt = ω
    std::vector<std::string> cats_;
};

class ConcreteFilter {
public:
    static ConcreteFilter make(std::vector<std::string> actions, std::vector<std::string> cats);

    const std::vector<std::string>& actions() const { return actions_; }
    const std::vector<std::string>& categories() const { return cats_; }

    bool operator==(const ConcreteFilter&) const = default;

private:
    std::vector<std::string> actions_;
    std::vector<std::string> cats_;
};

// Pattern-valued intents and filters. Sets are kept sorted and duplicate-free under
// canonical form, so iteration order is deterministic everywhere downstream.
class AbstractIntent {
public:
    static AbstractIntent make(std::optional<PatternString> action,
                               std::vector<PatternString> cats);

    const std::optional<PatternString>& action() const { return action_; }
    const std::vector<PatternString>& categories() const { return cats_; }

    bool precise() const;

    bool operator==(const AbstractIntent&) const = default;

private:
    std::optional<PatternString> action_;
    std::vector<PatternString> cats_;
};

class AbstractFilter {
public:
    static AbstractFilter make(std::vector<PatternString> actions,
                               std::vector<PatternString> cats);

    const std::vector<PatternString>& actions() const { return actions_; }
    const std::vector<PatternString>& categories() const { return cats_; }

    bool precise() const;

    bool operator==(const AbstractFilter&) const = default;

private:
    std::vector<PatternString> actions_;
    std::vector<PatternString> cats_;
};

// Android intent resolution restricted to (action, categories):
//   action test:   (act = ω ∧ acts ≠ ∅)  ∨  act ∈ acts
//   category test: ι.cats ⊆ f.cats
int concrete_match(const ConcreteIntent& intent, const ConcreteFilter& filter);

// Lifts a precise abstract value to its single concretization.
ConcreteIntent to_concrete(const AbstractIntent& intent);
ConcreteFilter to_concrete(const AbstractFilter& filter);

struct EnumBudget {
    std::size_t cap = 100000; // max number of concrete values produced
};

// All concretizations whose wildcard fills have length ≤ max_fill over `alphabet`.
// Throws BudgetExceeded when the combination count would exceed the budget cap.
std::vector<std::string> enumerate_pattern(const PatternString& p, const std::string& alphabet,
                                           std::size_t max_fill, const EnumBudget& budget = {});

std::vector<ConcreteIntent> enumerate_concretizations(const AbstractIntent& intent,
                                                      const std::string& alphabet,
                                                      std::size_t max_fill,
                                                      const EnumBudget& budget = {});

std::vector<ConcreteFilter> enumerate_concretizations(const AbstractFilter& filter,
                                                      const std::string& alphabet,
                                                      std::size_t max_fill,
                                                      const EnumBudget& budget = {});

} // namespace linkoracle::icc
