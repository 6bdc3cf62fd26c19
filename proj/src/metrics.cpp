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
#include <sstream>

#include <json.hpp>

#include "linkoracle/errors.hpp"
#include "linkoracle/linn/metrics.hpp"

namespace linkoracle::linn {

namespace {

void check_lengths(const std::vector<double>& preds, const std::vector<int>& truths) {
    if (preds.size() != truths.size()) {
        throw LengthMismatch("preds/truths length mismatch");
    }
    if (preds.empty()) {
        throw LengthMismatch("empty prediction list");
    }
}

void check_both_classes(const std::vector<int>& truths) {
    const bool has_pos = std::find(truths.begin(), truths.end(), 1) != truths.end();
    const bool has_neg = std::find(truths.begin(), truths.end(), 0) != truths.end();
    if (!has_pos || !has_neg) {
        throw SingleClass("need both classes present");
    }
}

} // namespace

double f1_score(const std::vector<double>& preds, const std::vector<int>& truths,
                double threshold) {
    check_lengths(preds, truths);
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const bool pos = preds[i] >= threshold;
        if (pos && truths[i] == 1) ++tp;
        if (pos && truths[i] == 0) ++fp;
        if (!pos && truths[i] == 1) ++fn;
    }
    const double denom = 2.0 * static_cast<double>(tp) + static_cast<double>(fp + fn);
    if (denom == 0.0) {
        return 0.0;
    }
    return 2.0 * static_cast<double>(tp) / denom;
}

double roc_auc(const std::vector<double>& preds, const std::vector<int>& truths) {
    check_lengths(preds, truths);
    check_both_classes(truths);
    // Rank statistic with midranks for ties: AUC = (R_pos - P(P+1)/2) / (P*N).
    std::vector<std::size_t> order(preds.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return preds[a] < preds[b]; });
    std::vector<double> rank(preds.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && preds[order[j + 1]] == preds[order[i]]) {
            ++j;
        }
        const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            rank[order[k]] = mid;
        }
        i = j + 1;
    }
    double rpos = 0.0;
    std::size_t npos = 0, nneg = 0;
    for (std::size_t k = 0; k < preds.size(); ++k) {
        if (truths[k] == 1) {
            rpos += rank[k];
            ++npos;
        } else {
            ++nneg;
        }
    }
    const double p = static_cast<double>(npos);
    return (rpos - p * (p + 1.0) / 2.0) / (p * static_cast<double>(nneg));
}

double kruskal_gamma(const std::vector<double>& preds, const std::vector<int>& truths) {
    check_lengths(preds, truths);
    check_both_classes(truths);
    std::vector<double> pos, neg;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        (truths[i] == 1 ? pos : neg).push_back(preds[i]);
    }
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());
    // For each negative score, count positives above / below via binary search.
    double concordant = 0.0, discordant = 0.0;
    for (double n : neg) {
        const auto lo = std::lower_bound(pos.begin(), pos.end(), n);
        const auto hi = std::upper_bound(pos.begin(), pos.end(), n);
        concordant += static_cast<double>(pos.end() - hi);
        discordant += static_cast<double>(lo - pos.begin());
    }
    if (concordant + discordant == 0.0) {
        throw AllTied("all cross-class pairs tied in predictions");
    }
    return (concordant - discordant) / (concordant + discordant);
}

ScoreStats score_distribution_stats(const std::vector<double>& preds,
                                    const std::vector<int>& truths) {
    check_lengths(preds, truths);
    constexpr std::size_t kBins = 32;
    std::vector<std::size_t> hist(kBins, 0);
    std::size_t high = 0, high_true = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const auto bin = std::min<std::size_t>(
            kBins - 1, static_cast<std::size_t>(preds[i] * static_cast<double>(kBins)));
        ++hist[bin];
        if (preds[i] > 0.95) {
            ++high;
            if (truths[i] == 1) {
                ++high_true;
            }
        }
    }
    ScoreStats stats;
    const double n = static_cast<double>(preds.size());
    for (std::size_t b = 0; b < kBins; ++b) {
        if (hist[b] == 0) {
            continue;
        }
        const double p = static_cast<double>(hist[b]) / n;
        stats.entropy_bits -= p * std::log2(p);
    }
    stats.p_high = static_cast<double>(high) / n;
    stats.high_set_empty = high == 0;
    stats.p_true_given_high =
        high == 0 ? 1.0 : static_cast<double>(high_true) / static_cast<double>(high);
    return stats;
}

Metrics compute_metrics(const std::vector<double>& preds, const std::vector<int>& truths,
                        double threshold) {
    Metrics m;
    m.f1 = f1_score(preds, truths, threshold);
    m.auc = roc_auc(preds, truths);
    m.gamma = kruskal_gamma(preds, truths);
    const auto stats = score_distribution_stats(preds, truths);
    m.entropy_bits = stats.entropy_bits;
    m.p_true_given_high = stats.p_true_given_high;
    m.p_high = stats.p_high;
    m.high_set_empty = stats.high_set_empty;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const bool pos = preds[i] >= threshold;
        if (pos && truths[i] == 1) ++m.tp;
        else if (pos && truths[i] == 0) ++m.fp;
        else if (!pos && truths[i] == 0) ++m.tn;
        else ++m.fn;
    }
    return m;
}

Metrics evaluate(const LinnModel& model, const std::vector<corpus::LabeledLink>& test) {
    std::vector<double> preds;
    std::vector<int> truths;
    preds.reserve(test.size());
    truths.reserve(test.size());
    for (const auto& link : test) {
        preds.push_back(forward(model, link.intent, link.filter));
        truths.push_back(link.truth);
    }
    return compute_metrics(preds, truths);
}

std::string metrics_to_json(const Metrics& m) {
    nlohmann::ordered_json j;
    j["f1"] = m.f1;
    j["auc"] = m.auc;
    j["gamma"] = m.gamma;
    j["entropy_bits"] = m.entropy_bits;
    j["p_true_given_high"] = m.p_true_given_high;
    j["p_high"] = m.p_high;
    j["high_set_empty"] = m.high_set_empty;
    j["confusion"] = {{"tp", m.tp}, {"fp", m.fp}, {"tn", m.tn}, {"fn", m.fn}};
    return j.dump(2);
}

std::string metrics_table(const std::string& instantiation, std::size_t parameter_count,
                          const Metrics& m, double inference_us_per_link) {
    std::ostringstream out;
    auto row = [&out](const std::string& a, const std::string& b) {
        out << a;
        for (std::size_t i = a.size(); i < 26; ++i) {
            out << ' ';
        }
        out << b << '\n';
    };
    auto num = [](double v) {
        std::ostringstream s;
        s.precision(3);
        s << std::fixed << v;
        return s.str();
    };
    row("Instantiation", instantiation);
    row("# Parameters", std::to_string(parameter_count));
    row("Inference time (us/link)", num(inference_us_per_link));
    row("Testing gamma", num(m.gamma));
    row("Testing F1", num(m.f1));
    row("AUC", num(m.auc));
    row("Entropy of y-hat", num(m.entropy_bits));
    row("Pr(y=1 | y-hat > 0.95)", num(m.p_true_given_high) + (m.high_set_empty ? " (empty)" : ""));
    row("Pr(y-hat > 0.95)", num(m.p_high));
    return out.str();
}

} // namespace linkoracle::linn
