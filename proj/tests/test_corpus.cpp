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

#include <doctest.h>

#include <regex>
#include <set>

#include "linkoracle/corpus/dataset.hpp"
#include "linkoracle/corpus/vocab.hpp"
#include "linkoracle/errors.hpp"

using namespace linkoracle;
using corpus::GeneratorConfig;
using corpus::ImprecisionConfig;
using icc::PatternString;

TEST_CASE("generate_corpus: counts, precision, determinism") {
    GeneratorConfig cfg;
    cfg.intent_count = 10;
    cfg.filter_count = 20;
    cfg.seed = 5;
    const auto a = corpus::generate_corpus(cfg);
    CHECK(a.intents.size() == 10);
    CHECK(a.filters.size() == 20);
    for (const auto& v : a.intents) {
        CHECK(v.precise());
    }
    for (const auto& v : a.filters) {
        CHECK(v.precise());
    }
    const auto b = corpus::generate_corpus(cfg);
    CHECK(a.intents == b.intents);
    CHECK(a.filters == b.filters);
}

TEST_CASE("generate_corpus: action strings follow the two template families") {
    GeneratorConfig cfg;
    cfg.intent_count = 60;
    cfg.filter_count = 10;
    cfg.seed = 9;
    const auto c = corpus::generate_corpus(cfg);
    const std::regex android("android\\.intent\\.action\\.[a-z_]+");
    const std::regex vendor("com\\.[a-z]+\\.dev[0-9]+\\.app[0-9]+\\.intent\\.action\\.[a-z_]+");
    bool saw_vendor = false;
    for (const auto& v : c.intents) {
        if (!v.action()) {
            continue;
        }
        const std::string s = v.action()->render();
        const bool ok = std::regex_match(s, android) || std::regex_match(s, vendor);
        CHECK(ok);
        saw_vendor = saw_vendor || std::regex_match(s, vendor);
    }
    CHECK(saw_vendor);
}

TEST_CASE("weaken: probability zero is the identity") {
    ImprecisionConfig imp;
    imp.full_action = imp.partial_action = 0.0;
    imp.full_intent_cat = imp.partial_intent_cat = 0.0;
    Rng rng(3);
    const auto v = icc::AbstractIntent::make(PatternString::parse("android.intent.action.view"),
                                             {PatternString::parse("default")});
    CHECK(corpus::weaken(v, imp, rng) == v);
}

TEST_CASE("weaken: shapes of full and partial imprecision") {
    ImprecisionConfig imp;
    Rng rng(17);
    const auto p = PatternString::parse("android.intent.action.view");
    bool saw_full = false, saw_partial = false;
    for (int t = 0; t < 300; ++t) {
        const auto w = corpus::weaken_pattern(p, 0.3, 0.5, imp, rng);
        if (w.render() == "(.*)") {
            saw_full = true;
        } else if (w.has_wildcard()) {
            saw_partial = true;
            CHECK(w.wildcard_count() == 1);
        }
    }
    CHECK(saw_full);
    CHECK(saw_partial);
}

TEST_CASE("weaken: language supersets at the enumeration bound") {
    ImprecisionConfig imp;
    imp.hole_min = 1;
    Rng rng(23);
    for (int t = 0; t < 200; ++t) {
        std::string text;
        const std::size_t len = 1 + rng.below(4);
        for (std::size_t i = 0; i < len; ++i) {
            text += rng.chance(0.5) ? 'a' : 'b';
        }
        const auto p = PatternString::parse(text);
        const auto w = corpus::weaken_pattern(p, 0.3, 0.6, imp, rng);
        CHECK(w.contains(text)); // the original string stays in the weakened language
    }
}

TEST_CASE("weaken: set cardinality is preserved") {
    ImprecisionConfig imp;
    Rng rng(29);
    const auto f = icc::AbstractFilter::make(
        {PatternString::parse("aa"), PatternString::parse("ab"), PatternString::parse("b")},
        {PatternString::parse("default")});
    for (int t = 0; t < 200; ++t) {
        const auto w = corpus::weaken(f, imp, rng);
        CHECK(w.actions().size() == 3);
    }
}

TEST_CASE("build_dataset: soundness, sizes, balance, determinism") {
    GeneratorConfig gen;
    gen.intent_count = 100;
    gen.filter_count = 200;
    gen.seed = 11;
    const auto c = corpus::generate_corpus(gen);
    ImprecisionConfig imp;
    corpus::SampleConfig sample;
    sample.train_size = 400;
    sample.test_size = 100;

    const auto ds = corpus::build_dataset(c, imp, sample, 11);
    CHECK(ds.train.size() == 400);
    CHECK(ds.test.size() == 100);

    std::size_t pos = 0;
    for (const auto& link : ds.train) {
        REQUIRE(link.observed != icc::Tri::top);
        // Matcher soundness carried into the dataset labels.
        CHECK((link.observed == icc::Tri::one ? 1 : 0) == link.truth);
        pos += link.observed == icc::Tri::one ? 1 : 0;
    }
    const double frac = static_cast<double>(pos) / static_cast<double>(ds.train.size());
    CHECK(frac > 0.35);
    CHECK(frac < 0.65);
    for (const auto& link : ds.test) {
        CHECK(link.observed == icc::Tri::top);
    }

    const auto ds2 = corpus::build_dataset(c, imp, sample, 11);
    for (std::size_t i = 0; i < ds.train.size(); ++i) {
        CHECK(corpus::serialize_record(ds.train[i]) == corpus::serialize_record(ds2.train[i]));
    }
}

TEST_CASE("build_dataset: no imprecision means no may links") {
    GeneratorConfig gen;
    gen.intent_count = 20;
    gen.filter_count = 20;
    gen.seed = 3;
    const auto c = corpus::generate_corpus(gen);
    ImprecisionConfig imp;
    imp.full_action = imp.partial_action = 0.0;
    imp.full_intent_cat = imp.partial_intent_cat = 0.0;
    imp.full_filter_action = imp.partial_filter_action = 0.0;
    imp.full_filter_cat = imp.partial_filter_cat = 0.0;
    corpus::SampleConfig sample;
    sample.train_size = 50;
    sample.test_size = 10;
    CHECK_THROWS_AS(corpus::build_dataset(c, imp, sample, 3), InsufficientMayLinks);
}

TEST_CASE("serialize/parse: round-trip and schema") {
    corpus::LabeledLink link;
    link.intent = icc::AbstractIntent::make(std::nullopt, {PatternString::parse("default")});
    link.filter = icc::AbstractFilter::make({PatternString::parse("(.*)send")},
                                            {PatternString::parse("default")});
    link.observed = icc::Tri::top;
    link.truth = 1;
    const std::string line = corpus::serialize_record(link);
    CHECK(line.find("\"action\":null") != std::string::npos);
    CHECK(line.find("\"observed\":\"may\"") != std::string::npos);
    CHECK(line.find("(.*)send") != std::string::npos);

    const auto back = corpus::parse_record(line, 1);
    CHECK(back.intent == link.intent);
    CHECK(back.filter == link.filter);
    CHECK(back.observed == link.observed);
    CHECK(back.truth == link.truth);
}

TEST_CASE("serialize: the default-category example carries its singleton set") {
    corpus::LabeledLink link;
    link.intent = icc::AbstractIntent::make(PatternString::parse("send"),
                                            {PatternString::parse("default")});
    link.filter = icc::AbstractFilter::make({PatternString::parse("send")},
                                            {PatternString::parse("default")});
    link.observed = icc::Tri::one;
    link.truth = 1;
    CHECK(corpus::serialize_record(link).find("\"categories\":[\"default\"]") !=
          std::string::npos);
}

TEST_CASE("parse_record: reports the line number") {
    try {
        corpus::parse_record("{not json", 42);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_number == 42);
    }
}

TEST_CASE("render_as_tokens: flat form, wildcard and omega ids, padding") {
    const auto v = icc::AbstractIntent::make(PatternString::parse("SEND"),
                                             {PatternString::parse("DEFAULT")});
    const auto ids = corpus::render_as_tokens(v);
    REQUIRE(ids.size() == corpus::kMaxLen);
    // "a=send;c=default"
    std::vector<int> expected{
        corpus::char_token('a'), corpus::char_token('='), corpus::char_token('s'),
        corpus::char_token('e'), corpus::char_token('n'), corpus::char_token('d'),
        corpus::kFieldSep,       corpus::char_token('c'), corpus::char_token('='),
        corpus::char_token('d'), corpus::char_token('e'), corpus::char_token('f'),
        corpus::char_token('a'), corpus::char_token('u'), corpus::char_token('l'),
        corpus::char_token('t')};
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(ids[i] == expected[i]);
    }
    CHECK(corpus::true_length(ids) == expected.size());
    CHECK(ids[expected.size()] == corpus::kPad);

    const auto w = icc::AbstractIntent::make(PatternString::parse("(.*)SEND"),
                                             std::vector<PatternString>{});
    const auto wids = corpus::render_as_tokens(w);
    CHECK(wids[2] == corpus::kWildcard);
    CHECK(wids[3] == corpus::char_token('s'));

    const auto om = icc::AbstractIntent::make(std::nullopt, {PatternString::parse("default")});
    const auto oids = corpus::render_as_tokens(om);
    CHECK(oids[2] == corpus::kNull);
    CHECK(oids[3] == corpus::kFieldSep);
}

TEST_CASE("render_as_tokens: injective on distinct canonical values") {
    GeneratorConfig gen;
    gen.intent_count = 80;
    gen.filter_count = 10;
    gen.seed = 31;
    const auto c = corpus::generate_corpus(gen);
    std::set<std::vector<int>> seen;
    std::set<std::string> rendered;
    for (const auto& v : c.intents) {
        seen.insert(corpus::render_as_tokens(v));
        rendered.insert(corpus::render_flat(v));
    }
    CHECK(seen.size() == rendered.size());
}

TEST_CASE("vocabulary: id layout") {
    CHECK(corpus::char_token('a') == 6);
    CHECK(corpus::char_token('z') == 31);
    CHECK(corpus::char_token('0') == 32);
    CHECK(corpus::char_token('9') == 41);
    CHECK(corpus::char_token('=') == 47);
    CHECK(corpus::char_token('{') == corpus::kOov);
    CHECK(corpus::kVocabSize == 64);
}
