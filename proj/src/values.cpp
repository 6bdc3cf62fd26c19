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

#include "linkoracle/errors.hpp"
#include "linkoracle/icc/values.hpp"

namespace linkoracle::icc {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
    for (auto& s : v) {
        s = fold_and_check(s);
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<PatternString> sorted_unique(std::vector<PatternString> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

std::string tri_to_string(Tri t) {
    switch (t) {
    case Tri::zero: return "0";
    case Tri::one: return "1";
    case Tri::top: return "may";
    }
    return "?";
}

ConcreteIntent ConcreteIntent::with_default_category(std::optional<std::string> action) {
    return make(std::move(action), {"default"});
}

ConcreteIntent ConcreteIntent::make(std::optional<std::string> action,
                                    std::vector<std::string> cats) {
    ConcreteIntent out;
    if (action) {
        out.action_ = fold_and_check(*action);
    }
    out.cats_ = sorted_unique(std::move(cats));
    return out;
}

ConcreteFilter ConcreteFilter::make(std::vector<std::string> actions,
                                    std::vector<std::string> cats) {
    ConcreteFilter out;
    out.actions_ = sorted_unique(std::move(actions));
    out.cats_ = sorted_unique(std::move(cats));
    return out;
}

AbstractIntent AbstractIntent::make(std::optional<PatternString> action,
                                    std::vector<PatternString> cats) {
    AbstractIntent out;
    out.action_ = std::move(action);
    out.cats_ = sorted_unique(std::move(cats));
    return out;
}

bool AbstractIntent::precise() const {
    if (action_ && !action_->precise()) {
        return false;
    }
    return std::all_of(cats_.begin(), cats_.end(), [](const auto& p) { return p.precise(); });
}

AbstractFilter AbstractFilter::make(std::vector<PatternString> actions,
                                    std::vector<PatternString> cats) {
    AbstractFilter out;
    out.actions_ = sorted_unique(std::move(actions));
    out.cats_ = sorted_unique(std::move(cats));
    return out;
}

bool AbstractFilter::precise() const {
    return std::all_of(actions_.begin(), actions_.end(),
                       [](const auto& p) { return p.precise(); }) &&
           std::all_of(cats_.begin(), cats_.end(), [](const auto& p) { return p.precise(); });
}

int concrete_match(const ConcreteIntent& intent, const ConcreteFilter& filter) {
    bool action_ok;
    if (!intent.action()) {
        action_ok = !filter.actions().empty();
    } else {
        action_ok = std::binary_search(filter.actions().begin(), filter.actions().end(),
                                       *intent.action());
    }
    if (!action_ok) {
        return 0;
    }
    const auto& fc = filter.categories();
    for (const auto& c : intent.categories()) {
        if (!std::binary_search(fc.begin(), fc.end(), c)) {
            return 0;
        }
    }
    return 1;
}

ConcreteIntent to_concrete(const AbstractIntent& intent) {
    std::optional<std::string> act;
    if (intent.action()) {
        act = intent.action()->literal_text();
    }
    std::vector<std::string> cats;
    for (const auto& p : intent.categories()) {
        cats.push_back(p.literal_text());
    }
    return ConcreteIntent::make(std::move(act), std::move(cats));
}

ConcreteFilter to_concrete(const AbstractFilter& filter) {
    std::vector<std::string> acts, cats;
    for (const auto& p : filter.actions()) {
        acts.push_back(p.literal_text());
    }
    for (const auto& p : filter.categories()) {
        cats.push_back(p.literal_text());
    }
    return ConcreteFilter::make(std::move(acts), std::move(cats));
}

namespace {

// Number of fill strings per wildcard: 1 + |Σ| + … + |Σ|^max_fill.
std::size_t fills_per_wildcard(std::size_t alphabet_size, std::size_t max_fill) {
    std::size_t total = 0, layer = 1;
    for (std::size_t len = 0; len <= max_fill; ++len) {
        total += layer;
        layer *= alphabet_size;
    }
    return total;
}

std::vector<std::string> all_fills(const std::string& alphabet, std::size_t max_fill) {
    std::vector<std::string> fills{""};
    std::vector<std::string> layer{""};
    for (std::size_t len = 1; len <= max_fill; ++len) {
        std::vector<std::string> next;
        for (const auto& prefix : layer) {
            for (char c : alphabet) {
                next.push_back(prefix + c);
            }
        }
        fills.insert(fills.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return fills;
}

std::size_t checked_mul(std::size_t a, std::size_t b, const EnumBudget& budget) {
    if (b != 0 && a > budget.cap / b) {
        throw BudgetExceeded("concretization enumeration exceeds cap of " +
                             std::to_string(budget.cap));
    }
    return a * b;
}

std::size_t pattern_combo_count(const PatternString& p, std::size_t per_wildcard,
                                const EnumBudget& budget) {
    std::size_t total = 1;
    for (std::size_t w = 0; w < p.wildcard_count(); ++w) {
        total = checked_mul(total, per_wildcard, budget);
    }
    return total;
}

} // namespace

std::vector<std::string> enumerate_pattern(const PatternString& p, const std::string& alphabet,
                                           std::size_t max_fill, const EnumBudget& budget) {
    const std::size_t per = fills_per_wildcard(alphabet.size(), max_fill);
    pattern_combo_count(p, per, budget);
    const auto fills = all_fills(alphabet, max_fill);
    std::vector<std::string> out{""};
    for (const auto& seg : p.segments()) {
        if (!seg.wildcard) {
            for (auto& s : out) {
                s += seg.text;
            }
            continue;
        }
        std::vector<std::string> next;
        next.reserve(out.size() * fills.size());
        for (const auto& prefix : out) {
            for (const auto& fill : fills) {
                next.push_back(prefix + fill);
            }
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<ConcreteIntent> enumerate_concretizations(const AbstractIntent& intent,
                                                      const std::string& alphabet,
                                                      std::size_t max_fill,
                                                      const EnumBudget& budget) {
    const std::size_t per = fills_per_wildcard(alphabet.size(), max_fill);
    std::size_t total = 1;
    if (intent.action()) {
        total = checked_mul(total, pattern_combo_count(*intent.action(), per, budget), budget);
    }
    for (const auto& c : intent.categories()) {
        total = checked_mul(total, pattern_combo_count(c, per, budget), budget);
    }

    std::vector<std::optional<std::string>> actions;
    if (intent.action()) {
        for (auto& s : enumerate_pattern(*intent.action(), alphabet, max_fill, budget)) {
            actions.emplace_back(std::move(s));
        }
    } else {
        actions.emplace_back(std::nullopt);
    }
    std::vector<std::vector<std::string>> cat_lists{{}};
    for (const auto& c : intent.categories()) {
        const auto choices = enumerate_pattern(c, alphabet, max_fill, budget);
        std::vector<std::vector<std::string>> next;
        next.reserve(cat_lists.size() * choices.size());
        for (const auto& partial : cat_lists) {
            for (const auto& choice : choices) {
                auto copy = partial;
                copy.push_back(choice);
                next.push_back(std::move(copy));
            }
        }
        cat_lists = std::move(next);
    }

    std::vector<ConcreteIntent> out;
    out.reserve(actions.size() * cat_lists.size());
    for (const auto& act : actions) {
        for (const auto& cats : cat_lists) {
            out.push_back(ConcreteIntent::make(act, cats));
        }
    }
    std::sort(out.begin(), out.end(), [](const ConcreteIntent& a, const ConcreteIntent& b) {
        if (a.action() != b.action()) return a.action() < b.action();
        return a.categories() < b.categories();
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<ConcreteFilter> enumerate_concretizations(const AbstractFilter& filter,
                                                      const std::string& alphabet,
                                                      std::size_t max_fill,
                                                      const EnumBudget& budget) {
    const std::size_t per = fills_per_wildcard(alphabet.size(), max_fill);
    std::size_t total = 1;
    for (const auto& a : filter.actions()) {
        total = checked_mul(total, pattern_combo_count(a, per, budget), budget);
    }
    for (const auto& c : filter.categories()) {
        total = checked_mul(total, pattern_combo_count(c, per, budget), budget);
    }

    auto expand = [&](const std::vector<PatternString>& patterns) {
        std::vector<std::vector<std::string>> lists{{}};
        for (const auto& p : patterns) {
            const auto choices = enumerate_pattern(p, alphabet, max_fill, budget);
            std::vector<std::vector<std::string>> next;
            next.reserve(lists.size() * choices.size());
            for (const auto& partial : lists) {
                for (const auto& choice : choices) {
                    auto copy = partial;
                    copy.push_back(choice);
                    next.push_back(std::move(copy));
                }
            }
            lists = std::move(next);
        }
        return lists;
    };

    std::vector<ConcreteFilter> out;
    for (const auto& acts : expand(filter.actions())) {
        for (const auto& cats : expand(filter.categories())) {
            out.push_back(ConcreteFilter::make(acts, cats));
        }
    }
    std::sort(out.begin(), out.end(), [](const ConcreteFilter& a, const ConcreteFilter& b) {
        if (a.actions() != b.actions()) return a.actions() < b.actions();
        return a.categories() < b.categories();
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace linkoracle::icc
