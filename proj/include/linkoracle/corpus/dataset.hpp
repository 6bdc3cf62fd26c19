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
#include <iosfwd>
#include <string>
#include <vector>

#include "linkoracle/corpus/generator.hpp"
#include "linkoracle/corpus/weaken.hpp"
#include "linkoracle/icc/values.hpp"

namespace linkoracle::corpus {

struct LabeledLink {
    icc::AbstractIntent intent;
    icc::AbstractFilter filter;
    icc::Tri observed = icc::Tri::top; // matcher verdict on the weakened pair
    int truth = 0;                     // ground truth from the underlying precise pair
};

struct SampleConfig {
    std::size_t train_size = 2000;
    std::size_t test_size = 500;
    double cap_slack = 4.0; // per-key reservoir cap multiplier over the even-split quota
};

struct Dataset {
    std::vector<LabeledLink> train; // must links, balanced by (intent, label)
    std::vector<LabeledLink> test;  // may links only, spread over intents
};

// Weakens each corpus value once, labels all intent x filter pairs (fan-out across
// LINKORACLE_THREADS workers by index range, merged in index order), then samples via
// per-(intent,label) stratified reservoirs. Deterministic for a fixed (corpus, cfg, seed).
Dataset build_dataset(const Corpus& corpus, const ImprecisionConfig& imp,
                      const SampleConfig& sample, std::uint64_t seed);

// One JSON object per link:
// {"intent":{"action":<string|null>,"categories":[...]},
//  "filter":{"actions":[...],"categories":[...]},"observed":"0|1|may","truth":0|1}
std::string serialize_record(const LabeledLink& link);
LabeledLink parse_record(const std::string& line, std::size_t line_number = 0);

void save_jsonl(const std::vector<LabeledLink>& links, const std::string& path);
std::vector<LabeledLink> load_jsonl(const std::string& path);

} // namespace linkoracle::corpus
