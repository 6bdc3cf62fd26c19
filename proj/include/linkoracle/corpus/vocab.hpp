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
#include <span>
#include <string>
#include <vector>

#include "linkoracle/icc/values.hpp"

namespace linkoracle::corpus {

// Exactly 64 token ids; the two per-side 64x16 embedding tables hang off this count.
inline constexpr std::size_t kVocabSize = 64;
inline constexpr std::size_t kMaxLen = 128;

enum TokenId : int {
    kPad = 0,
    kOov = 1,
    kWildcard = 2, // one token for the whole "(.*)" marker
    kNull = 3,     // ω
    kFieldSep = 4, // ';' between the action and category fields
    kItemSep = 5,  // ',' between set elements
    // 6..31  'a'..'z'
    // 32..41 '0'..'9'
    // 42..47 '.' '_' '-' '/' ':' '='
    // 48..63 reserved
};

int char_token(char c);

// Token ids of one pattern: literal characters plus kWildcard per wildcard. Unpadded.
std::vector<int> pattern_tokens(const icc::PatternString& p);

// Canonical flat rendering `a=<act>;c=<cat1>,<cat2>` (set members sorted), then
// per-character mapping, kWildcard for "(.*)", kNull for ω; right-truncated/padded
// to kMaxLen.
std::vector<int> render_as_tokens(const icc::AbstractIntent& v);
std::vector<int> render_as_tokens(const icc::AbstractFilter& v);

// Human-readable flat forms matching the token renderings above.
std::string render_flat(const icc::AbstractIntent& v);
std::string render_flat(const icc::AbstractFilter& v);

// Display text of a token (wildcard -> "(.*)", ω -> "null", PAD -> "·", OOV -> "?").
std::string token_text(int id);
std::string tokens_to_text(std::span<const int> ids);

// Count of tokens before the trailing PAD run.
std::size_t true_length(std::span<const int> ids);

// Hash pinning the vocabulary layout; stored in checkpoints and verified on load.
std::uint64_t vocabulary_hash();

} // namespace linkoracle::corpus
