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

#include <string>
#include <vector>

#include "linkoracle/linn/model.hpp"

namespace linkoracle::interpret {

// Masking explanation of one prediction: delete mask_len tokens at every position of the
// intent rendering (filter held constant), re-pad, and record Δp̂ = p̂_orig − p̂_masked.
struct MaskExplanation {
    std::string intent_rendering; // flat display form
    std::size_t mask_len = 5;
    double p_orig = 0.0;
    std::vector<std::pair<std::size_t, double>> deltas; // (token position, Δp̂)
};

// str-* models only (typed-* models have no single string to perturb).
MaskExplanation explain_by_masking(const linn::LinnModel& model,
                                   const corpus::LabeledLink& link, std::size_t mask_len = 5);

struct KernelStimulus {
    std::size_t kernel_size = 0;
    std::size_t kernel_index = 0; // within its size group
    std::string segment;          // display text of the window tokens
    double activation = 0.0;      // pre-pooling post-relu response
};

// For every intent-side CNN kernel, the k highest-activation windows over the given
// intents' renderings; ties broken by first occurrence. str-cnn models only.
std::vector<std::vector<KernelStimulus>> top_kernel_activations(
    const linn::LinnModel& model, const std::vector<icc::AbstractIntent>& intents,
    std::size_t k);

struct EncodingRow {
    std::string rendering;
    std::size_t multiplicity = 0;
    std::vector<double> vec;
};

// One row per distinct intent (first-seen order), multiplicities summed.
std::vector<EncodingRow> export_encodings(const linn::LinnModel& model,
                                          const std::vector<icc::AbstractIntent>& intents);

// CSV with a header row; vector components at full precision.
void write_encodings_csv(const std::vector<EncodingRow>& rows, std::ostream& out);

// ANSI terminal heat line for an explanation (one glyph per token, reds scale with |Δ|).
std::string ansi_preview(const MaskExplanation& e, const std::vector<int>& intent_tokens);

} // namespace linkoracle::interpret
