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

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace linkoracle::icc {

// The abstract string class: literal segments interleaved with wildcards, where the
// wildcard matches any (possibly empty) string. Surface syntax uses "(.*)" as the sole
// wildcard marker. Canonical form: no empty literals, no two adjacent wildcards.
class PatternString {
public:
    struct Segment {
        bool wildcard = false;
        std::string text; // empty iff wildcard

        bool operator==(const Segment&) const = default;
    };

    PatternString() = default;

    // Throws InvalidCharacter (with byte offset) on symbols outside the surface alphabet.
    // Uppercase input is folded to lowercase.
    static PatternString parse(const std::string& text);

    // A pattern whose language is the singleton {text} (text is case-folded and validated).
    static PatternString literal(const std::string& text);

    static PatternString wildcard_only(); // "(.*)"

    const std::vector<Segment>& segments() const { return segments_; }

    std::string render() const;

    bool precise() const; // zero wildcards
    bool has_wildcard() const { return !precise(); }

    // Singleton text of a precise pattern (only valid when precise()).
    const std::string& literal_text() const;

    // Shortest member of the language (wildcards filled with the empty string).
    std::string min_string() const;

    // s ∈ language(this)?
    bool contains(const std::string& s) const;

    std::size_t wildcard_count() const;

    bool operator==(const PatternString& other) const { return segments_ == other.segments_; }
    std::strong_ordering operator<=>(const PatternString& other) const;

private:
    static PatternString from_segments(std::vector<Segment> segs);

    std::vector<Segment> segments_;
};

// language(p) ∩ language(q) ≠ ∅, decided by reachability over token positions.
bool pattern_overlap(const PatternString& p, const PatternString& q);

// A witness string in the intersection, or empty optional-like flag via bool return.
// Only valid to call when pattern_overlap(p, q) is true.
std::string overlap_witness(const PatternString& p, const PatternString& q);

// The 58-symbol surface alphabet (lowercase after folding). '(' , '*' and ')' are not in
// the alphabet, so the "(.*)" marker can never collide with literal text.
bool surface_char(char c);

// Folds A-Z to a-z; other characters pass through.
char fold_char(char c);
std::string fold(const std::string& s);

// Validates s against the surface alphabet (after folding); throws InvalidCharacter.
std::string fold_and_check(const std::string& s);

} // namespace linkoracle::icc
