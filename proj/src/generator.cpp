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

#include <fstream>
#include <sstream>

#include "linkoracle/corpus/generator.hpp"
#include "linkoracle/corpus/weaken.hpp"
#include "linkoracle/errors.hpp"
#include "linkoracle/rng.hpp"

namespace linkoracle::corpus {

namespace {

// Word prefixes stay distinct in the first three characters so that even the
// small-kernel features identify the action word.
const std::vector<std::string> kWords = {
    "view_media",    "send_message",  "edit_document", "main_entry",   "pick_contact",
    "dial_number",   "query_search",  "get_content",   "feed_starting", "insert_row",
    "sync_account",  "attach_data",   "create_chooser", "web_search",  "open_document",
    "battery_low",   "reboot_request", "package_added", "launch_home", "headset_plug",
    "zoom_controls", "unlock_screen", "tts_speak",      "grant_access",
};

const std::vector<std::string> kVendors = {
    "andromo", "apptitude", "mobiworks", "zenlab", "appybuilder", "droidify",
};

const std::vector<std::string> kCategories = {
    "default", "browsable", "launcher", "app_browser", "alternative", "info",
};

std::string make_action(const std::string& word, const GeneratorConfig& cfg, Rng& rng) {
    if (rng.chance(cfg.vendor_template_prob)) {
        const std::string& vendor = rng.pick(kVendors);
        const std::uint64_t dev = 1000000 + rng.below(9000000);
        const std::uint64_t app = 1000000 + rng.below(9000000);
        return "com." + vendor + ".dev" + std::to_string(dev) + ".app" + std::to_string(app) +
               ".intent.action." + word;
    }
    return "android.intent.action." + word;
}

std::vector<std::string> make_categories(const GeneratorConfig& cfg, Rng& rng) {
    if (rng.chance(cfg.empty_category_prob)) {
        return {};
    }
    std::vector<std::string> cats{"default"};
    if (rng.chance(cfg.extra_category_prob)) {
        cats.push_back(kCategories[1 + rng.below(kCategories.size() - 1)]);
    }
    return cats;
}

} // namespace

Corpus generate_corpus(const GeneratorConfig& cfg) {
    if (cfg.intent_count < 1 || cfg.filter_count < 1 || cfg.action_pool < 1) {
        throw Error("generator counts must be >= 1");
    }
    Rng rng(derive_seed(cfg.seed, 0x636f7270)); // "corp"

    // Cycle a shuffled word list so pool entries mostly carry distinct action words;
    // same-word pairs with different vendor prefixes exist but stay rare.
    std::vector<std::string> words(kWords.begin(),
                                   kWords.begin() + std::min(cfg.word_pool, kWords.size()));
    rng.shuffle(words);
    std::vector<std::string> pool;
    pool.reserve(cfg.action_pool);
    while (pool.size() < cfg.action_pool) {
        const std::string& word = words[pool.size() % words.size()];
        std::string a = make_action(word, cfg, rng);
        if (std::find(pool.begin(), pool.end(), a) == pool.end()) {
            pool.push_back(std::move(a));
        }
    }

    Corpus corpus;
    corpus.intents.reserve(cfg.intent_count);
    for (std::size_t i = 0; i < cfg.intent_count; ++i) {
        std::optional<icc::PatternString> act;
        if (!rng.chance(cfg.omega_action_prob)) {
            act = icc::PatternString::literal(rng.pick(pool));
        }
        std::vector<icc::PatternString> cats;
        for (const auto& c : make_categories(cfg, rng)) {
            cats.push_back(icc::PatternString::literal(c));
        }
        corpus.intents.push_back(icc::AbstractIntent::make(std::move(act), std::move(cats)));
    }

    corpus.filters.reserve(cfg.filter_count);
    for (std::size_t i = 0; i < cfg.filter_count; ++i) {
        const std::size_t n_actions = 1 + rng.below(cfg.filter_max_actions);
        std::vector<icc::PatternString> acts;
        for (std::size_t k = 0; k < n_actions; ++k) {
            acts.push_back(icc::PatternString::literal(rng.pick(pool)));
        }
        std::vector<icc::PatternString> cats;
        // Filters usually accept "default" plus some extras.
        if (!rng.chance(0.08)) {
            cats.push_back(icc::PatternString::literal("default"));
        }
        if (rng.chance(0.45)) {
            cats.push_back(
                icc::PatternString::literal(kCategories[1 + rng.below(kCategories.size() - 1)]));
        }
        corpus.filters.push_back(icc::AbstractFilter::make(std::move(acts), std::move(cats)));
    }
    return corpus;
}

void apply_config_file(const std::string& path, GeneratorConfig& gen, ImprecisionConfig& imp) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config file: " + path);
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected key=value", lineno);
        }
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        auto as_u = [&] { return static_cast<std::size_t>(std::stoull(value)); };
        auto as_d = [&] { return std::stod(value); };
        if (key == "intent_count") gen.intent_count = as_u();
        else if (key == "filter_count") gen.filter_count = as_u();
        else if (key == "action_pool") gen.action_pool = as_u();
        else if (key == "word_pool") gen.word_pool = as_u();
        else if (key == "vendor_template_prob") gen.vendor_template_prob = as_d();
        else if (key == "omega_action_prob") gen.omega_action_prob = as_d();
        else if (key == "extra_category_prob") gen.extra_category_prob = as_d();
        else if (key == "empty_category_prob") gen.empty_category_prob = as_d();
        else if (key == "filter_max_actions") gen.filter_max_actions = as_u();
        else if (key == "seed") gen.seed = std::stoull(value);
        else if (key == "full_action") imp.full_action = as_d();
        else if (key == "partial_action") imp.partial_action = as_d();
        else if (key == "full_intent_cat") imp.full_intent_cat = as_d();
        else if (key == "partial_intent_cat") imp.partial_intent_cat = as_d();
        else if (key == "full_filter_action") imp.full_filter_action = as_d();
        else if (key == "partial_filter_action") imp.partial_filter_action = as_d();
        else if (key == "full_filter_cat") imp.full_filter_cat = as_d();
        else if (key == "partial_filter_cat") imp.partial_filter_cat = as_d();
        else if (key == "hole_min") imp.hole_min = as_u();
        else if (key == "hole_max") imp.hole_max = as_u();
        else throw ParseError("unknown config key: " + key, lineno);
    }
}

} // namespace linkoracle::corpus
