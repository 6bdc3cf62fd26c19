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
#include <vector>

#include "linkoracle/icc/values.hpp"

namespace linkoracle::corpus {

// Synthetic stand-in for a statically analyzed app corpus. Intents and filters draw
// their action strings from one shared pool built from two template families:
//   android.intent.action.<WORD>
//   com.<vendor>.dev<d>.app<d>.intent.action.<WORD>
struct GeneratorConfig {
    std::size_t intent_count = 200;
    std::size_t filter_count = 400;
    std::size_t action_pool = 24;   // distinct concrete action strings
    std::size_t word_pool = 20;     // distinct <WORD> suffixes feeding the pool
    double vendor_template_prob = 0.4;
    double omega_action_prob = 0.04;  // intent action = ω
    double extra_category_prob = 0.3; // a second category beside "default"
    double empty_category_prob = 0.03;
    std::size_t filter_max_actions = 4;
    std::uint64_t seed = 1;
};

struct Corpus {
    std::vector<icc::AbstractIntent> intents;  // all precise
    std::vector<icc::AbstractFilter> filters;  // all precise
};

Corpus generate_corpus(const GeneratorConfig& cfg);

// Parses "key=value" lines ('#' comments, blank lines ignored) over the GeneratorConfig
// and ImprecisionConfig keys; unknown keys raise Error.
struct ImprecisionConfig;
void apply_config_file(const std::string& path, GeneratorConfig& gen, ImprecisionConfig& imp);

} // namespace linkoracle::corpus
