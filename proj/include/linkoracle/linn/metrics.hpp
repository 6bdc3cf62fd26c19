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

namespace linkoracle::linn {

struct ScoreStats {
    double entropy_bits = 0.0;       // Shannon entropy of preds over 32 equal-width bins
    double p_true_given_high = 1.0;  // precision within p̂ > 0.95; 1.0 (flagged) when empty
    double p_high = 0.0;             // fraction with p̂ > 0.95
    bool high_set_empty = true;
};

struct Metrics {
    double f1 = 0.0;
    double auc = 0.0;
    double gamma = 0.0;
    double entropy_bits = 0.0;
    double p_true_given_high = 1.0;
    double p_high = 0.0;
    bool high_set_empty = true;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// Predicted positive iff pred >= threshold ("rounded" outputs at the default 0.5).
double f1_score(const std::vector<double>& preds, const std::vector<int>& truths,
                double threshold = 0.5);

// Rank-statistic AUC; ties between classes contribute half credit.
double roc_auc(const std::vector<double>& preds, const std::vector<int>& truths);

// (C − D) / (C + D) over cross-class pairs; pairs tied in preds are excluded.
double kruskal_gamma(const std::vector<double>& preds, const std::vector<int>& truths);

ScoreStats score_distribution_stats(const std::vector<double>& preds,
                                    const std::vector<int>& truths);

Metrics compute_metrics(const std::vector<double>& preds, const std::vector<int>& truths,
                        double threshold = 0.5);

// Forward over the test links (hidden truths as labels), then compute_metrics.
Metrics evaluate(const LinnModel& model, const std::vector<corpus::LabeledLink>& test);

std::string metrics_to_json(const Metrics& m);

// Aligned one-row table with the evaluation-summary columns.
std::string metrics_table(const std::string& instantiation, std::size_t parameter_count,
                          const Metrics& m, double inference_us_per_link);

} // namespace linkoracle::linn
