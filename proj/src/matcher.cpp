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

#include <algorithm>
#include <map>

#include "linkoracle/errors.hpp"
#include "linkoracle/match/matcher.hpp"

namespace linkoracle::match {

using icc::AbstractFilter;
using icc::AbstractIntent;
using icc::ConcreteFilter;
using icc::ConcreteIntent;
using icc::PatternString;
using icc::Tri;

namespace {

Tri action_verdict(const AbstractIntent& intent, const AbstractFilter& filter) {
    if (!intent.action()) {
        // ω action: matches exactly when the filter declares any action at all.
        return filter.actions().empty() ? Tri::zero : Tri::one;
    }
    const PatternString& act = *intent.action();
    if (act.precise()) {
        for (const auto& fa : filter.actions()) {
            if (fa.precise() && fa.literal_text() == act.literal_text()) {
                return Tri::one;
            }
        }
    }
    const bool any_overlap = std::any_of(
        filter.actions().begin(), filter.actions().end(),
        [&](const PatternString& fa) { return icc::pattern_overlap(act, fa); });
    return any_overlap ? Tri::top : Tri::zero;
}

Tri category_verdict(const AbstractIntent& intent, const AbstractFilter& filter) {
    bool all_pinned = true;
    for (const auto& ic : intent.categories()) {
        bool pinned = false;
        bool any_overlap = false;
        for (const auto& fc : filter.categories()) {
            if (ic.precise() && fc.precise() && ic.literal_text() == fc.literal_text()) {
                pinned = true;
            }
            if (icc::pattern_overlap(ic, fc)) {
                any_overlap = true;
            }
        }
        if (!any_overlap) {
            return Tri::zero; // this category can never appear in the filter's set
        }
        all_pinned = all_pinned && pinned;
    }
    return all_pinned ? Tri::one : Tri::top;
}

ConcreteIntent min_concretization(const AbstractIntent& intent) {
    std::optional<std::string> act;
    if (intent.action()) {
        act = intent.action()->min_string();
    }
    std::vector<std::string> cats;
    for (const auto& p : intent.categories()) {
        cats.push_back(p.min_string());
    }
    return ConcreteIntent::make(std::move(act), std::move(cats));
}

// Greedy search for a concrete pair that matches; used to decorate ⊤ verdicts.
std::optional<std::pair<ConcreteIntent, ConcreteFilter>> positive_witness(
    const AbstractIntent& intent, const AbstractFilter& filter) {
    std::optional<std::string> act;
    // Assigned string per filter pattern (by index); unassigned patterns take min_string.
    std::map<std::size_t, std::string> filter_act_pin, filter_cat_pin;

    if (!intent.action()) {
        if (filter.actions().empty()) {
            return std::nullopt;
        }
    } else {
        bool found = false;
        for (std::size_t i = 0; i < filter.actions().size(); ++i) {
            const auto& fa = filter.actions()[i];
            if (icc::pattern_overlap(*intent.action(), fa)) {
                const std::string common = icc::overlap_witness(*intent.action(), fa);
                act = common;
                filter_act_pin[i] = common;
                found = true;
                break;
            }
        }
        if (!found) {
            return std::nullopt;
        }
    }

    std::vector<std::string> intent_cats;
    for (const auto& ic : intent.categories()) {
        bool placed = false;
        for (std::size_t i = 0; i < filter.categories().size() && !placed; ++i) {
            const auto& fc = filter.categories()[i];
            if (!icc::pattern_overlap(ic, fc)) {
                continue;
            }
            const std::string common = icc::overlap_witness(ic, fc);
            auto it = filter_cat_pin.find(i);
            if (it == filter_cat_pin.end()) {
                filter_cat_pin[i] = common;
                intent_cats.push_back(common);
                placed = true;
            } else if (it->second == common || ic.contains(it->second)) {
                intent_cats.push_back(ic.contains(it->second) ? it->second : common);
                placed = true;
            }
        }
        if (!placed) {
            return std::nullopt;
        }
    }

    std::vector<std::string> filter_acts, filter_cats;
    for (std::size_t i = 0; i < filter.actions().size(); ++i) {
        auto it = filter_act_pin.find(i);
        filter_acts.push_back(it != filter_act_pin.end() ? it->second
                                                         : filter.actions()[i].min_string());
    }
    for (std::size_t i = 0; i < filter.categories().size(); ++i) {
        auto it = filter_cat_pin.find(i);
        filter_cats.push_back(it != filter_cat_pin.end() ? it->second
                                                         : filter.categories()[i].min_string());
    }

    auto ci = ConcreteIntent::make(std::move(act), std::move(intent_cats));
    auto cf = ConcreteFilter::make(std::move(filter_acts), std::move(filter_cats));
    if (icc::concrete_match(ci, cf) != 1) {
        return std::nullopt; // greedy assignment collided; witness stays absent
    }
    return std::make_pair(std::move(ci), std::move(cf));
}

} // namespace

MatchVerdict abstract_match(const AbstractIntent& intent, const AbstractFilter& filter) {
    const Tri verdict = icc::kleene_and(action_verdict(intent, filter),
                                        category_verdict(intent, filter));
    MatchVerdict out;
    out.tri = verdict;
    if (verdict == Tri::one) {
        auto ci = min_concretization(intent);
        std::vector<std::string> acts, cats;
        for (const auto& p : filter.actions()) {
            acts.push_back(p.min_string());
        }
        for (const auto& p : filter.categories()) {
            cats.push_back(p.min_string());
        }
        out.witness = std::make_pair(std::move(ci), ConcreteFilter::make(acts, cats));
    } else if (verdict == Tri::top) {
        out.witness = positive_witness(intent, filter);
    }
    return out;
}

Tri brute_force_match(const AbstractIntent& intent, const AbstractFilter& filter,
                      const std::string& alphabet, std::size_t max_fill,
                      const icc::EnumBudget& budget) {
    const auto intents = icc::enumerate_concretizations(intent, alphabet, max_fill, budget);
    const auto filters = icc::enumerate_concretizations(filter, alphabet, max_fill, budget);
    if (intents.size() > budget.cap / std::max<std::size_t>(filters.size(), 1)) {
        throw BudgetExceeded("concretization pair count exceeds cap");
    }
    bool any_match = false, any_miss = false;
    for (const auto& ci : intents) {
        for (const auto& cf : filters) {
            if (icc::concrete_match(ci, cf) == 1) {
                any_match = true;
            } else {
                any_miss = true;
            }
            if (any_match && any_miss) {
                return Tri::top;
            }
        }
    }
    return any_match ? Tri::one : Tri::zero;
}

} // namespace linkoracle::match
