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
#include <string_view>

#include "linkoracle/errors.hpp"
#include "linkoracle/icc/pattern.hpp"

namespace linkoracle::icc {

namespace {

constexpr std::string_view kWildcardMarker = "(.*)";

// Token view of a pattern: one entry per literal character, or kStar for a wildcard.
constexpr char kStar = '\x01';

std::string tokens_of(const PatternString& p) {
    std::string toks;
    for (const auto& seg : p.segments()) {
        if (seg.wildcard) {
            toks.push_back(kStar);
        } else {
            toks += seg.text;
        }
    }
    return toks;
}

} // namespace

bool surface_char(char c) {
    if (c >= 'a' && c <= 'z') return true;
    if (c >= '0' && c <= '9') return true;
    switch (c) {
    case '.':
    case '_':
    case '-':
    case '/':
    case ':':
    case ' ':
    case '"':
    case ',':
    case '{':
    case '}':
    case '[':
    case ']':
    case '=':
        return true;
    default:
        return false;
    }
}

char fold_char(char c) {
    if (c >= 'A' && c <= 'Z') {
        return static_cast<char>(c - 'A' + 'a');
    }
    return c;
}

std::string fold(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        out.push_back(fold_char(c));
    }
    return out;
}

std::string fold_and_check(const std::string& s) {
    std::string out = fold(s);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!surface_char(out[i])) {
            throw InvalidCharacter(
                std::string("invalid character '") + out[i] + "' outside surface alphabet", i);
        }
    }
    return out;
}

PatternString PatternString::from_segments(std::vector<Segment> segs) {
    // Canonicalize: drop empty literals, merge adjacent literals, collapse adjacent wildcards.
    std::vector<Segment> canon;
    for (auto& seg : segs) {
        if (!seg.wildcard && seg.text.empty()) {
            continue;
        }
        if (!canon.empty()) {
            if (seg.wildcard && canon.back().wildcard) {
                continue;
            }
            if (!seg.wildcard && !canon.back().wildcard) {
                canon.back().text += seg.text;
                continue;
            }
        }
        canon.push_back(std::move(seg));
    }
    PatternString p;
    p.segments_ = std::move(canon);
    return p;
}

PatternString PatternString::parse(const std::string& text) {
    std::vector<Segment> segs;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, kWildcardMarker.size(), kWildcardMarker) == 0) {
            if (!current.empty()) {
                segs.push_back({false, current});
                current.clear();
            }
            segs.push_back({true, {}});
            i += kWildcardMarker.size();
            continue;
        }
        const char c = fold_char(text[i]);
        if (!surface_char(c)) {
            throw InvalidCharacter(
                std::string("invalid character '") + text[i] + "' outside surface alphabet", i);
        }
        current.push_back(c);
        ++i;
    }
    if (!current.empty()) {
        segs.push_back({false, current});
    }
    return from_segments(std::move(segs));
}

PatternString PatternString::literal(const std::string& text) {
    PatternString p;
    const std::string folded = fold_and_check(text);
    if (!folded.empty()) {
        p.segments_.push_back({false, folded});
    }
    return p;
}

PatternString PatternString::wildcard_only() {
    PatternString p;
    p.segments_.push_back({true, {}});
    return p;
}

std::string PatternString::render() const {
    std::string out;
    for (const auto& seg : segments_) {
        if (seg.wildcard) {
            out += kWildcardMarker;
        } else {
            out += seg.text;
        }
    }
    return out;
}

bool PatternString::precise() const {
    return std::none_of(segments_.begin(), segments_.end(),
                        [](const Segment& s) { return s.wildcard; });
}

const std::string& PatternString::literal_text() const {
    static const std::string empty;
    if (segments_.empty()) {
        return empty;
    }
    return segments_.front().text;
}

std::string PatternString::min_string() const {
    std::string out;
    for (const auto& seg : segments_) {
        if (!seg.wildcard) {
            out += seg.text;
        }
    }
    return out;
}

std::size_t PatternString::wildcard_count() const {
    return static_cast<std::size_t>(std::count_if(
        segments_.begin(), segments_.end(), [](const Segment& s) { return s.wildcard; }));
}

std::strong_ordering PatternString::operator<=>(const PatternString& other) const {
    return render() <=> other.render();
}

bool PatternString::contains(const std::string& s) const {
    const std::string pat = tokens_of(*this);
    const std::size_t np = pat.size(), ns = s.size();
    // dp[j] = pat[0..i) can match s[0..j)
    std::vector<char> dp(ns + 1, 0), next(ns + 1, 0);
    dp[0] = 1;
    for (std::size_t i = 0; i < np; ++i) {
        std::fill(next.begin(), next.end(), 0);
        if (pat[i] == kStar) {
            // Wildcard absorbs any prefix extension: next[j] = dp[0..j] any set.
            char seen = 0;
            for (std::size_t j = 0; j <= ns; ++j) {
                seen |= dp[j];
                next[j] = seen;
            }
        } else {
            for (std::size_t j = 1; j <= ns; ++j) {
                next[j] = dp[j - 1] && s[j - 1] == pat[i];
            }
        }
        dp.swap(next);
    }
    return dp[ns] != 0;
}

bool pattern_overlap(const PatternString& p, const PatternString& q) {
    const std::string a = tokens_of(p), b = tokens_of(q);
    const std::size_t na = a.size(), nb = b.size();
    // reach[i][j]: some common string consumes a[0..i) and b[0..j).
    std::vector<char> reach((na + 1) * (nb + 1), 0);
    auto at = [&](std::size_t i, std::size_t j) -> char& { return reach[i * (nb + 1) + j]; };
    at(0, 0) = 1;
    for (std::size_t i = 0; i <= na; ++i) {
        for (std::size_t j = 0; j <= nb; ++j) {
            if (!at(i, j)) {
                continue;
            }
            const bool a_star = i < na && a[i] == kStar;
            const bool b_star = j < nb && b[j] == kStar;
            if (a_star) {
                at(i + 1, j) = 1; // star matches ε
                if (j < nb) {
                    at(i, j + 1) = 1; // star absorbs whatever b produces next
                }
            }
            if (b_star) {
                at(i, j + 1) = 1;
                if (i < na) {
                    at(i + 1, j) = 1;
                }
            }
            if (i < na && j < nb && !a_star && !b_star && a[i] == b[j]) {
                at(i + 1, j + 1) = 1;
            }
        }
    }
    return at(na, nb) != 0;
}

std::string overlap_witness(const PatternString& p, const PatternString& q) {
    const std::string a = tokens_of(p), b = tokens_of(q);
    const std::size_t na = a.size(), nb = b.size();
    // ok[i][j]: (i,j) can reach (na,nb). Transitions only grow (i,j), so one reverse sweep.
    std::vector<char> grid((na + 1) * (nb + 1), 0);
    auto ok = [&](std::size_t i, std::size_t j) -> char& { return grid[i * (nb + 1) + j]; };
    ok(na, nb) = 1;
    for (std::size_t ii = na + 1; ii-- > 0;) {
        for (std::size_t jj = nb + 1; jj-- > 0;) {
            const std::size_t i = ii, j = jj;
            if (ok(i, j)) {
                continue;
            }
            const bool a_star = i < na && a[i] == kStar;
            const bool b_star = j < nb && b[j] == kStar;
            char r = 0;
            if (a_star) {
                r |= ok(i + 1, j);
                if (j < nb) {
                    r |= ok(i, j + 1);
                }
            }
            if (b_star) {
                r |= ok(i, j + 1);
                if (i < na) {
                    r |= ok(i + 1, j);
                }
            }
            if (i < na && j < nb && !a_star && !b_star && a[i] == b[j]) {
                r |= ok(i + 1, j + 1);
            }
            ok(i, j) = r;
        }
    }
    std::string witness;
    if (!ok(0, 0)) {
        return witness;
    }
    // Walk forward, preferring ε-skips of stars so the witness stays minimal.
    std::size_t i = 0, j = 0;
    while (i < na || j < nb) {
        const bool a_star = i < na && a[i] == kStar;
        const bool b_star = j < nb && b[j] == kStar;
        if (a_star && ok(i + 1, j)) {
            ++i;
            continue;
        }
        if (b_star && ok(i, j + 1)) {
            ++j;
            continue;
        }
        if (i < na && j < nb && !a_star && !b_star && a[i] == b[j] && ok(i + 1, j + 1)) {
            witness.push_back(a[i]);
            ++i;
            ++j;
            continue;
        }
        if (a_star && j < nb && !b_star && ok(i, j + 1)) {
            // a's star absorbs the character b requires next.
            witness.push_back(b[j]);
            ++j;
            continue;
        }
        if (b_star && i < na && !a_star && ok(i + 1, j)) {
            witness.push_back(a[i]);
            ++i;
            continue;
        }
        break; // not reachable when ok(0,0) held
    }
    return witness;
}

} // namespace linkoracle::icc
