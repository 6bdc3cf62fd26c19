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
#include <cmath>
#include <cstdio>
#include <ostream>

#include "linkoracle/corpus/vocab.hpp"
#include "linkoracle/errors.hpp"
#include "linkoracle/interpret/interpret.hpp"

namespace linkoracle::interpret {

MaskExplanation explain_by_masking(const linn::LinnModel& model, const corpus::LabeledLink& link,
                                   std::size_t mask_len) {
    if (!tde::is_str(model.spec.inst)) {
        throw UnsupportedInstantiation("explain_by_masking requires a str-* model");
    }
    const auto intent_tokens = corpus::render_as_tokens(link.intent);
    const auto filter_tokens = corpus::render_as_tokens(link.filter);
    if (intent_tokens.size() <= mask_len) {
        throw Error("intent rendering shorter than the mask");
    }

    MaskExplanation out;
    out.intent_rendering = corpus::render_flat(link.intent);
    out.mask_len = mask_len;
    out.p_orig = linn::forward_str_tokens(model, intent_tokens, filter_tokens);

    const std::size_t max_len = model.spec.hyper.max_len;
    out.deltas.reserve(intent_tokens.size() - mask_len + 1);
    for (std::size_t pos = 0; pos + mask_len <= intent_tokens.size(); ++pos) {
        std::vector<int> masked;
        masked.reserve(max_len);
        masked.insert(masked.end(), intent_tokens.begin(), intent_tokens.begin() + pos);
        masked.insert(masked.end(), intent_tokens.begin() + pos + mask_len,
                      intent_tokens.end());
        masked.resize(max_len, corpus::kPad);
        const double p = linn::forward_str_tokens(model, masked, filter_tokens);
        out.deltas.emplace_back(pos, out.p_orig - p);
    }
    return out;
}

std::vector<std::vector<KernelStimulus>> top_kernel_activations(
    const linn::LinnModel& model, const std::vector<icc::AbstractIntent>& intents,
    std::size_t k) {
    if (model.spec.inst != tde::Instantiation::str_cnn) {
        throw UnsupportedInstantiation("kernel mining requires a str-cnn model");
    }
    const auto& hyper = model.spec.hyper;
    const auto& embed = model.store.value("intent.embed");
    const std::size_t n = hyper.embed_dim;

    std::size_t total_kernels = 0;
    for (auto c : hyper.kernel_counts) {
        total_kernels += c;
    }
    std::vector<std::vector<KernelStimulus>> top(total_kernels);

    auto offer = [&](std::size_t slot, const KernelStimulus& s) {
        auto& list = top[slot];
        // Strictly-greater keeps the first occurrence ahead on ties.
        auto it = std::find_if(list.begin(), list.end(), [&](const KernelStimulus& t) {
            return s.activation > t.activation;
        });
        list.insert(it, s);
        if (list.size() > k) {
            list.pop_back();
        }
    };

    for (const auto& intent : intents) {
        auto toks = corpus::render_as_tokens(intent);
        std::size_t tl = corpus::true_length(toks);
        tl = std::min(tl, hyper.max_len);
        toks.resize(tl);
        const auto geom = tde::conv_geometry(tl, hyper);
        toks.resize(geom.l_eff, corpus::kPad);

        // x[r][pos] = embed[r][tok[pos]]
        std::vector<double> x(n * geom.l_eff);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t pos = 0; pos < geom.l_eff; ++pos) {
                x[r * geom.l_eff + pos] = embed.at(r, static_cast<std::size_t>(toks[pos]));
            }
        }

        std::size_t slot_base = 0;
        for (std::size_t g = 0; g < hyper.kernel_sizes.size(); ++g) {
            const std::size_t size = hyper.kernel_sizes[g], count = hyper.kernel_counts[g];
            const std::string base = "intent.conv.s" + std::to_string(size);
            const auto& w = model.store.value(base + ".w");
            const auto& b = model.store.value(base + ".b");
            const std::size_t n_pos = geom.n_pos(size, tl);
            for (std::size_t kid = 0; kid < count; ++kid) {
                for (std::size_t pos = 0; pos < n_pos; ++pos) {
                    double z = b.at(kid);
                    for (std::size_t u = 0; u < size; ++u) {
                        for (std::size_t r = 0; r < n; ++r) {
                            z += w.at(kid, u * n + r) * x[r * geom.l_eff + pos + u];
                        }
                    }
                    const double act = z > 0.0 ? z : 0.0;
                    KernelStimulus s;
                    s.kernel_size = size;
                    s.kernel_index = kid;
                    s.segment = corpus::tokens_to_text(
                        std::span<const int>(toks.data() + pos, size));
                    s.activation = act;
                    offer(slot_base + kid, s);
                }
            }
            slot_base += count;
        }
    }
    return top;
}

std::vector<EncodingRow> export_encodings(const linn::LinnModel& model,
                                          const std::vector<icc::AbstractIntent>& intents) {
    std::vector<EncodingRow> rows;
    for (const auto& intent : intents) {
        const std::string rendering = corpus::render_flat(intent);
        auto it = std::find_if(rows.begin(), rows.end(),
                               [&](const EncodingRow& r) { return r.rendering == rendering; });
        if (it != rows.end()) {
            ++it->multiplicity;
            continue;
        }
        EncodingRow row;
        row.rendering = rendering;
        row.multiplicity = 1;
        row.vec = linn::intent_encoding(model, intent);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_encodings_csv(const std::vector<EncodingRow>& rows, std::ostream& out) {
    const std::size_t dim = rows.empty() ? 0 : rows[0].vec.size();
    out << "rendering,multiplicity";
    for (std::size_t i = 0; i < dim; ++i) {
        out << ",e" << i;
    }
    out << '\n';
    char buf[40];
    for (const auto& row : rows) {
        out << '"' << row.rendering << '"' << ',' << row.multiplicity;
        for (double v : row.vec) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
}

std::string ansi_preview(const MaskExplanation& e, const std::vector<int>& intent_tokens) {
    // Per-token heat: max |Δ| over the windows covering the token.
    std::vector<double> heat(intent_tokens.size(), 0.0);
    for (const auto& [pos, delta] : e.deltas) {
        for (std::size_t t = pos; t < std::min(intent_tokens.size(), pos + e.mask_len); ++t) {
            heat[t] = std::max(heat[t], std::fabs(delta));
        }
    }
    double peak = 0.0;
    for (double h : heat) {
        peak = std::max(peak, h);
    }
    std::string out;
    const std::size_t shown = corpus::true_length(intent_tokens);
    for (std::size_t t = 0; t < shown; ++t) {
        const double frac = peak > 0.0 ? heat[t] / peak : 0.0;
        const int level = static_cast<int>(frac * 5.0);
        static const char* kColors[] = {"\033[0m",     "\033[38;5;224m", "\033[38;5;217m",
                                        "\033[38;5;210m", "\033[38;5;203m", "\033[38;5;196m"};
        out += kColors[std::min(level, 5)];
        out += corpus::token_text(intent_tokens[t]);
    }
    out += "\033[0m";
    return out;
}

} // namespace linkoracle::interpret
