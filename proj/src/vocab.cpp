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

#include "linkoracle/corpus/vocab.hpp"

namespace linkoracle::corpus {

int char_token(char c) {
    if (c >= 'a' && c <= 'z') {
        return 6 + (c - 'a');
    }
    if (c >= '0' && c <= '9') {
        return 32 + (c - '0');
    }
    switch (c) {
    case '.': return 42;
    case '_': return 43;
    case '-': return 44;
    case '/': return 45;
    case ':': return 46;
    case '=': return 47;
    case ';': return kFieldSep;
    case ',': return kItemSep;
    default: return kOov;
    }
}

std::vector<int> pattern_tokens(const icc::PatternString& p) {
    std::vector<int> out;
    for (const auto& seg : p.segments()) {
        if (seg.wildcard) {
            out.push_back(kWildcard);
        } else {
            for (char c : seg.text) {
                out.push_back(char_token(c));
            }
        }
    }
    return out;
}

namespace {

void pad_to_max(std::vector<int>& ids) {
    if (ids.size() > kMaxLen) {
        ids.resize(kMaxLen);
    } else {
        ids.resize(kMaxLen, kPad);
    }
}

void append_pattern(std::vector<int>& ids, const icc::PatternString& p) {
    const auto toks = pattern_tokens(p);
    ids.insert(ids.end(), toks.begin(), toks.end());
}

void append_set(std::vector<int>& ids, const std::vector<icc::PatternString>& set) {
    bool first = true;
    for (const auto& p : set) { // already sorted by canonical rendering
        if (!first) {
            ids.push_back(kItemSep);
        }
        first = false;
        append_pattern(ids, p);
    }
}

std::string join_set(const std::vector<icc::PatternString>& set) {
    std::string out;
    bool first = true;
    for (const auto& p : set) {
        if (!first) {
            out += ',';
        }
        first = false;
        out += p.render();
    }
    return out;
}

} // namespace

std::vector<int> render_as_tokens(const icc::AbstractIntent& v) {
    std::vector<int> ids{char_token('a'), char_token('=')};
    if (v.action()) {
        append_pattern(ids, *v.action());
    } else {
        ids.push_back(kNull);
    }
    ids.push_back(kFieldSep);
    ids.push_back(char_token('c'));
    ids.push_back(char_token('='));
    append_set(ids, v.categories());
    pad_to_max(ids);
    return ids;
}

std::vector<int> render_as_tokens(const icc::AbstractFilter& v) {
    std::vector<int> ids{char_token('a'), char_token('=')};
    append_set(ids, v.actions());
    ids.push_back(kFieldSep);
    ids.push_back(char_token('c'));
    ids.push_back(char_token('='));
    append_set(ids, v.categories());
    pad_to_max(ids);
    return ids;
}

std::string render_flat(const icc::AbstractIntent& v) {
    return "a=" + (v.action() ? v.action()->render() : std::string("null")) +
           ";c=" + join_set(v.categories());
}

std::string render_flat(const icc::AbstractFilter& v) {
    return "a=" + join_set(v.actions()) + ";c=" + join_set(v.categories());
}

std::string token_text(int id) {
    if (id >= 6 && id <= 31) {
        return std::string(1, static_cast<char>('a' + (id - 6)));
    }
    if (id >= 32 && id <= 41) {
        return std::string(1, static_cast<char>('0' + (id - 32)));
    }
    switch (id) {
    case kPad: return "\xc2\xb7"; // '·'
    case kOov: return "?";
    case kWildcard: return "(.*)";
    case kNull: return "null";
    case kFieldSep: return ";";
    case kItemSep: return ",";
    case 42: return ".";
    case 43: return "_";
    case 44: return "-";
    case 45: return "/";
    case 46: return ":";
    case 47: return "=";
    default: return "?";
    }
}

std::string tokens_to_text(std::span<const int> ids) {
    std::string out;
    for (int id : ids) {
        out += token_text(id);
    }
    return out;
}

std::size_t true_length(std::span<const int> ids) {
    std::size_t n = ids.size();
    while (n > 0 && ids[n - 1] == kPad) {
        --n;
    }
    return n;
}

std::uint64_t vocabulary_hash() {
    static const char* kLayout =
        "linkoracle-vocab-v1:pad,oov,wildcard,null,fieldsep,itemsep,a-z,0-9,._-/:=,reserved16;"
        "size=64;maxlen=128";
    std::uint64_t h = 0xcbf29ce484222325ull; // FNV-1a
    for (const char* p = kLayout; *p; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace linkoracle::corpus
