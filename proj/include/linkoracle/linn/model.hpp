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
#include <string>
#include <vector>

#include "linkoracle/corpus/dataset.hpp"
#include "linkoracle/nn/graph.hpp"
#include "linkoracle/tde/encoder.hpp"

namespace linkoracle::linn {

// Complete structural description: the two encoders, the classification layers, and the
// ordered parameter list (order fixes initialization and the checkpoint layout).
struct ModelSpec {
    tde::Instantiation inst = tde::Instantiation::str_cnn;
    tde::Hyperparams hyper;
    tde::EncoderSpec intent_enc;
    tde::EncoderSpec filter_enc;
    tde::ParamRegistry registry;
    std::size_t intent_dim = 0;
    std::size_t filter_dim = 0;
};

ModelSpec make_model_spec(tde::Instantiation inst, const tde::Hyperparams& hyper = {});

// Exact count of trainable scalars.
std::size_t param_count(const ModelSpec& spec);
std::size_t param_count(tde::Instantiation inst, const tde::Hyperparams& hyper = {});

struct LinnModel {
    ModelSpec spec;
    nn::ParamStore store;
    std::uint64_t vocab_hash = 0;
};

// Builds and initializes a model (Glorot matrices, uniform(-0.05, 0.05) embeddings,
// zero biases), seeded.
LinnModel build_model(tde::Instantiation inst, std::uint64_t seed,
                      const tde::Hyperparams& hyper = {});

// Emits the full forward graph for one link; returns the probability node.
nn::Graph::VarId forward_graph(nn::Graph& g, const LinnModel& model,
                               const icc::AbstractIntent& intent,
                               const icc::AbstractFilter& filter);

// p̂ ∈ (0,1). Pure; safe for concurrent use on a finalized model.
double forward(const LinnModel& model, const icc::AbstractIntent& intent,
               const icc::AbstractFilter& filter);

// str-* only: forward on raw token renderings (used by the masking explainer).
double forward_str_tokens(const LinnModel& model, const std::vector<int>& intent_tokens,
                          const std::vector<int>& filter_tokens);

// Intent-side encoding of one value (the vector export_encodings writes out).
std::vector<double> intent_encoding(const LinnModel& model, const icc::AbstractIntent& intent);

struct TrainConfig {
    std::size_t epochs = 10;
    std::size_t batch = 32;
    std::uint64_t seed = 1;
    nn::RmspropConfig opt;
    bool shuffle = true;
};

// Epochs x batches of forward/backward/RMSprop over must-labeled links; returns the mean
// loss per epoch. Deterministic per (seed, data, config).
std::vector<double> train(LinnModel& model, const std::vector<corpus::LabeledLink>& links,
                          const TrainConfig& cfg);

} // namespace linkoracle::linn
