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

#include "linkoracle/icc/values.hpp"
#include "linkoracle/rng.hpp"

namespace linkoracle::corpus {

// Imprecision simulation: each weakened value denotes a fieldwise language superset of
// its input. Full imprecision replaces a string by "(.*)"; partial imprecision replaces
// a contiguous substring by "(.*)".
struct ImprecisionConfig {
    double full_action = 0.03;
    double partial_action = 0.25;
    double full_intent_cat = 0.01;
    double partial_intent_cat = 0.05;
    double full_filter_action = 0.02;
    double partial_filter_action = 0.25;
    double full_filter_cat = 0.01;
    double partial_filter_cat = 0.05;
    std::size_t hole_min = 2;  // partial-hole length bounds (clipped to string length)
    std::size_t hole_max = 6;
};

icc::PatternString weaken_pattern(const icc::PatternString& p, double full_prob,
                                  double partial_prob, const ImprecisionConfig& cfg, Rng& rng);

icc::AbstractIntent weaken(const icc::AbstractIntent& v, const ImprecisionConfig& cfg, Rng& rng);
icc::AbstractFilter weaken(const icc::AbstractFilter& v, const ImprecisionConfig& cfg, Rng& rng);

} // namespace linkoracle::corpus
