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
#include <cstdlib>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "linkoracle/corpus/dataset.hpp"
#include "linkoracle/errors.hpp"
#include "linkoracle/match/matcher.hpp"
#include "linkoracle/rng.hpp"

namespace linkoracle::corpus {

namespace {

using ordered_json = nlohmann::ordered_json;

std::size_t worker_count() {
    if (const char* env = std::getenv("LINKORACLE_THREADS")) {
        const long n = std::atol(env);
        if (n >= 1) {
            return static_cast<std::size_t>(n);
        }
    }
    return 1;
}

struct PairLabel {
    icc::Tri observed;
    std::uint8_t truth;
};

// Per-key bounded reservoir (Algorithm R).
struct Reservoir {
    std::vector<std::uint32_t> items;
    std::size_t seen = 0;

    void offer(std::uint32_t item, std::size_t cap, Rng& rng) {
        ++seen;
        if (items.size() < cap) {
            items.push_back(item);
            return;
        }
        const std::uint64_t slot = rng.below(seen);
        if (slot < cap) {
            items[slot] = item;
        }
    }
};

ordered_json intent_to_json(const icc::AbstractIntent& v) {
    ordered_json j;
    if (v.action()) {
        j["action"] = v.action()->render();
    } else {
        j["action"] = nullptr;
    }
    ordered_json cats = ordered_json::array();
    for (const auto& c : v.categories()) {
        cats.push_back(c.render());
    }
    j["categories"] = std::move(cats);
    return j;
}

ordered_json filter_to_json(const icc::AbstractFilter& v) {
    ordered_json j;
    ordered_json acts = ordered_json::array();
    for (const auto& a : v.actions()) {
        acts.push_back(a.render());
    }
    j["actions"] = std::move(acts);
    ordered_json cats = ordered_json::array();
    for (const auto& c : v.categories()) {
        cats.push_back(c.render());
    }
    j["categories"] = std::move(cats);
    return j;
}

} // namespace

Dataset build_dataset(const Corpus& corpus, const ImprecisionConfig& imp,
                      const SampleConfig& sample, std::uint64_t seed) {
    if (corpus.intents.empty() || corpus.filters.empty()) {
        throw Error("build_dataset: empty corpus");
    }
    const std::size_t ni = corpus.intents.size(), nf = corpus.filters.size();

    // One weakened version per corpus value, each from its own derived stream so that
    // worker partitioning cannot change the result.
    std::vector<icc::AbstractIntent> wintents;
    wintents.reserve(ni);
    for (std::size_t i = 0; i < ni; ++i) {
        Rng r(derive_seed(seed, 0x10000000ull + i));
        wintents.push_back(weaken(corpus.intents[i], imp, r));
    }
    std::vector<icc::AbstractFilter> wfilters;
    wfilters.reserve(nf);
    for (std::size_t j = 0; j < nf; ++j) {
        Rng r(derive_seed(seed, 0x20000000ull + j));
        wfilters.push_back(weaken(corpus.filters[j], imp, r));
    }

    std::vector<icc::ConcreteIntent> cintents;
    cintents.reserve(ni);
    for (const auto& v : corpus.intents) {
        cintents.push_back(icc::to_concrete(v));
    }
    std::vector<icc::ConcreteFilter> cfilters;
    cfilters.reserve(nf);
    for (const auto& v : corpus.filters) {
        cfilters.push_back(icc::to_concrete(v));
    }

    // Label all pairs; workers take contiguous ranges of the row-major pair index.
    const std::size_t total = ni * nf;
    std::vector<PairLabel> labels(total);
    auto label_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const std::size_t i = idx / nf, j = idx % nf;
            const auto verdict = match::abstract_match(wintents[i], wfilters[j]);
            labels[idx].observed = verdict.tri;
            labels[idx].truth =
                static_cast<std::uint8_t>(icc::concrete_match(cintents[i], cfilters[j]));
        }
    };
    const std::size_t workers = std::min(worker_count(), total);
    if (workers <= 1) {
        label_range(0, total);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (total + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(total, begin + chunk);
            if (begin < end) {
                pool.emplace_back(label_range, begin, end);
            }
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    // Stratified reservoirs over the merged, index-ordered stream.
    const std::size_t train_half = sample.train_size / 2;
    const std::size_t cap_train = std::max<std::size_t>(
        1, static_cast<std::size_t>(sample.cap_slack * static_cast<double>(train_half) /
                                    static_cast<double>(ni)) +
               1);
    const std::size_t cap_test = std::max<std::size_t>(
        1, static_cast<std::size_t>(sample.cap_slack * static_cast<double>(sample.test_size) /
                                    static_cast<double>(ni)) +
               1);

    Rng rng(derive_seed(seed, 0x73616d70)); // "samp"
    std::vector<Reservoir> pos(ni), neg(ni), may(ni);
    // Under pick-one concretization semantics a wildcard that overlaps the other side is
    // label-exclusive in the must classes: it rules out must-0 (overlap) yet coexists
    // with must-1 pinning, and vice versa on the intent side. Training on such links
    // teaches wildcard-presence shortcuts whose sign inverts on may links, collapsing the
    // ranking. Train therefore draws from fully precise must pairs (ω is fine); may
    // links keep every shape.
    std::vector<char> intent_precise(ni), filter_precise(nf);
    for (std::size_t i = 0; i < ni; ++i) {
        intent_precise[i] = wintents[i].precise() ? 1 : 0;
    }
    for (std::size_t j = 0; j < nf; ++j) {
        filter_precise[j] = wfilters[j].precise() ? 1 : 0;
    }
    for (std::size_t idx = 0; idx < total; ++idx) {
        const std::size_t i = idx / nf;
        const bool trainable = intent_precise[i] && filter_precise[idx % nf];
        switch (labels[idx].observed) {
        case icc::Tri::one:
            if (trainable) {
                pos[i].offer(static_cast<std::uint32_t>(idx), cap_train, rng);
            }
            break;
        case icc::Tri::zero:
            if (trainable) {
                neg[i].offer(static_cast<std::uint32_t>(idx), cap_train, rng);
            }
            break;
        case icc::Tri::top: may[i].offer(static_cast<std::uint32_t>(idx), cap_test, rng); break;
        }
    }

    // Flatten the per-intent reservoirs, then enforce the filter-side quota: without it a
    // single weakened filter (a catch-all "(.*)" entry overlaps every intent) would
    // dominate the sample.
    auto flatten = [&](std::vector<Reservoir>& rs, std::size_t filter_cap) {
        std::vector<std::uint32_t> out;
        for (auto& r : rs) {
            out.insert(out.end(), r.items.begin(), r.items.end());
        }
        rng.shuffle(out);
        std::vector<std::uint32_t> kept;
        std::vector<std::uint32_t> filter_seen(nf, 0);
        kept.reserve(out.size());
        for (auto idx : out) {
            if (filter_seen[idx % nf]++ < filter_cap) {
                kept.push_back(idx);
            }
        }
        return kept;
    };
    const std::size_t fcap_train = std::max<std::size_t>(
        1, static_cast<std::size_t>(sample.cap_slack * static_cast<double>(train_half) /
                                    static_cast<double>(nf)) +
               1);
    const std::size_t fcap_test = std::max<std::size_t>(
        1, static_cast<std::size_t>(sample.cap_slack * static_cast<double>(sample.test_size) /
                                    static_cast<double>(nf)) +
               1);
    auto pos_pool = flatten(pos, fcap_train);
    auto neg_pool = flatten(neg, fcap_train);
    auto may_pool = flatten(may, fcap_test);

    if (may_pool.size() < sample.test_size) {
        throw InsufficientMayLinks("weakening produced " + std::to_string(may_pool.size()) +
                                   " may links, need " + std::to_string(sample.test_size));
    }
    const std::size_t want_pos = std::min(train_half, pos_pool.size());
    const std::size_t want_neg_base = sample.train_size - want_pos;
    const std::size_t want_neg = std::min(want_neg_base, neg_pool.size());
    // Top up from positives if negatives ran short.
    const std::size_t want_pos_final =
        std::min(pos_pool.size(), want_pos + (want_neg_base - want_neg));
    if (want_pos_final + want_neg < sample.train_size) {
        throw InsufficientMustLinks("only " + std::to_string(want_pos_final + want_neg) +
                                    " must links available, need " +
                                    std::to_string(sample.train_size));
    }

    std::vector<std::uint32_t> train_idx(pos_pool.begin(), pos_pool.begin() + want_pos_final);
    train_idx.insert(train_idx.end(), neg_pool.begin(), neg_pool.begin() + want_neg);
    rng.shuffle(train_idx);
    std::vector<std::uint32_t> test_idx(may_pool.begin(), may_pool.begin() + sample.test_size);

    auto make_link = [&](std::uint32_t idx) {
        LabeledLink link;
        link.intent = wintents[idx / nf];
        link.filter = wfilters[idx % nf];
        link.observed = labels[idx].observed;
        link.truth = labels[idx].truth;
        return link;
    };
    Dataset ds;
    ds.train.reserve(train_idx.size());
    for (auto idx : train_idx) {
        ds.train.push_back(make_link(idx));
    }
    ds.test.reserve(test_idx.size());
    for (auto idx : test_idx) {
        ds.test.push_back(make_link(idx));
    }
    return ds;
}

std::string serialize_record(const LabeledLink& link) {
    ordered_json j;
    j["intent"] = intent_to_json(link.intent);
    j["filter"] = filter_to_json(link.filter);
    j["observed"] = icc::tri_to_string(link.observed);
    j["truth"] = link.truth;
    return j.dump();
}

LabeledLink parse_record(const std::string& line, std::size_t line_number) {
    try {
        const auto j = nlohmann::json::parse(line);
        LabeledLink link;

        const auto& ji = j.at("intent");
        std::optional<icc::PatternString> act;
        if (!ji.at("action").is_null()) {
            act = icc::PatternString::parse(ji.at("action").get<std::string>());
        }
        std::vector<icc::PatternString> icats;
        for (const auto& c : ji.at("categories")) {
            icats.push_back(icc::PatternString::parse(c.get<std::string>()));
        }
        link.intent = icc::AbstractIntent::make(std::move(act), std::move(icats));

        const auto& jf = j.at("filter");
        std::vector<icc::PatternString> facts, fcats;
        for (const auto& a : jf.at("actions")) {
            facts.push_back(icc::PatternString::parse(a.get<std::string>()));
        }
        for (const auto& c : jf.at("categories")) {
            fcats.push_back(icc::PatternString::parse(c.get<std::string>()));
        }
        link.filter = icc::AbstractFilter::make(std::move(facts), std::move(fcats));

        const std::string obs = j.at("observed").get<std::string>();
        if (obs == "0") {
            link.observed = icc::Tri::zero;
        } else if (obs == "1") {
            link.observed = icc::Tri::one;
        } else if (obs == "may") {
            link.observed = icc::Tri::top;
        } else {
            throw Error("bad observed value: " + obs);
        }
        link.truth = j.at("truth").get<int>();
        if (link.truth != 0 && link.truth != 1) {
            throw Error("bad truth value");
        }
        return link;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(e.what(), line_number);
    }
}

void save_jsonl(const std::vector<LabeledLink>& links, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path);
    }
    for (const auto& link : links) {
        out << serialize_record(link) << '\n';
    }
}

std::vector<LabeledLink> load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read " + path);
    }
    std::vector<LabeledLink> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        out.push_back(parse_record(line, lineno));
    }
    return out;
}

} // namespace linkoracle::corpus
