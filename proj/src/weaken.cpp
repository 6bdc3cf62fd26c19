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

#include "linkoracle/corpus/weaken.hpp"

namespace linkoracle::corpus {

using icc::PatternString;

namespace {

// Carve a "(.*)" hole out of the longest literal segment. Inputs in this pipeline are
// precise, so "longest literal" is simply the whole text.
PatternString partial_hole(const PatternString& p, const ImprecisionConfig& cfg, Rng& rng) {
    std::size_t target = 0, best_len = 0;
    const auto& segs = p.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (!segs[i].wildcard && segs[i].text.size() > best_len) {
            best_len = segs[i].text.size();
            target = i;
        }
    }
    if (best_len == 0) {
        return PatternString::wildcard_only();
    }
    const std::string& text = segs[target].text;
    const std::size_t lo = std::min(cfg.hole_min, text.size());
    const std::size_t hi = std::min(cfg.hole_max, text.size());
    const std::size_t hole = lo + (hi > lo ? rng.below(hi - lo + 1) : 0);
    const std::size_t start = rng.below(text.size() - hole + 1);

    std::string rendered;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].wildcard) {
            rendered += "(.*)";
        } else if (i == target) {
            rendered += text.substr(0, start) + "(.*)" + text.substr(start + hole);
        } else {
            rendered += segs[i].text;
        }
    }
    return PatternString::parse(rendered);
}

void weaken_set(std::vector<PatternString>& out, const std::vector<PatternString>& in,
                double full_prob, double partial_prob, const ImprecisionConfig& cfg, Rng& rng) {
    for (const auto& p : in) {
        PatternString w = weaken_pattern(p, full_prob, partial_prob, cfg, rng);
        // Canonical collision with an already-kept element would collapse the set's
        // cardinality, which is unsound under pick-one-per-pattern concretization;
        // keep the original instead (originals are pairwise distinct).
        if (std::find(out.begin(), out.end(), w) != out.end()) {
            out.push_back(p);
        } else {
            out.push_back(std::move(w));
        }
    }
}

} // namespace

PatternString weaken_pattern(const PatternString& p, double full_prob, double partial_prob,
                             const ImprecisionConfig& cfg, Rng& rng) {
    const double roll = rng.uniform();
    if (roll < full_prob) {
        return PatternString::wildcard_only();
    }
    if (roll < full_prob + partial_prob) {
        return partial_hole(p, cfg, rng);
    }
    return p;
}

icc::AbstractIntent weaken(const icc::AbstractIntent& v, const ImprecisionConfig& cfg, Rng& rng) {
    std::optional<PatternString> act = v.action(); // ω stays ω: nothing weaker exists
    if (act) {
        act = weaken_pattern(*act, cfg.full_action, cfg.partial_action, cfg, rng);
    }
    std::vector<PatternString> cats;
    weaken_set(cats, v.categories(), cfg.full_intent_cat, cfg.partial_intent_cat, cfg, rng);
    return icc::AbstractIntent::make(std::move(act), std::move(cats));
}

icc::AbstractFilter weaken(const icc::AbstractFilter& v, const ImprecisionConfig& cfg, Rng& rng) {
    std::vector<PatternString> acts, cats;
    weaken_set(acts, v.actions(), cfg.full_filter_action, cfg.partial_filter_action, cfg, rng);
    weaken_set(cats, v.categories(), cfg.full_filter_cat, cfg.partial_filter_cat, cfg, rng);
    return icc::AbstractFilter::make(std::move(acts), std::move(cats));
}

} // namespace linkoracle::corpus
