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

#include <numeric>

#include "linkoracle/corpus/vocab.hpp"
#include "linkoracle/errors.hpp"
#include "linkoracle/linn/model.hpp"
#include "linkoracle/tde/type.hpp"

namespace linkoracle::linn {

using tde::Instantiation;

namespace {

void register_classifier(ModelSpec& spec) {
    const std::size_t in_dim = spec.intent_dim + spec.filter_dim;
    std::size_t prev = in_dim;
    for (std::size_t i = 0; i < spec.hyper.mlp_dims.size(); ++i) {
        const std::size_t dim = spec.hyper.mlp_dims[i];
        const std::string base = "clf.l" + std::to_string(i);
        spec.registry.add({base + ".w", {prev, dim}, tde::InitKind::glorot, prev, dim});
        spec.registry.add({base + ".b", {dim}, tde::InitKind::zeros, 0, 0});
        prev = dim;
    }
    if (prev != 1) {
        throw Error("classifier must end in a single sigmoid unit");
    }
}

nn::Graph::VarId classifier(nn::Graph& g, const ModelSpec& spec, nn::Graph::VarId features) {
    nn::Graph::VarId h = features;
    for (std::size_t i = 0; i < spec.hyper.mlp_dims.size(); ++i) {
        const std::string base = "clf.l" + std::to_string(i);
        const bool last = i + 1 == spec.hyper.mlp_dims.size();
        h = g.dense(h, g.param(base + ".w"), g.param(base + ".b"),
                    last ? nn::Activation::sigmoid : nn::Activation::relu);
    }
    return h;
}

tde::EncodeValue side_value(const LinnModel& model, const icc::AbstractIntent& intent) {
    if (tde::is_str(model.spec.inst)) {
        return tde::EncodeValue::from_tokens(corpus::render_as_tokens(intent));
    }
    return tde::typed_value(intent, model.spec.hyper.max_len);
}

tde::EncodeValue side_value(const LinnModel& model, const icc::AbstractFilter& filter) {
    if (tde::is_str(model.spec.inst)) {
        return tde::EncodeValue::from_tokens(corpus::render_as_tokens(filter));
    }
    return tde::typed_value(filter, model.spec.hyper.max_len);
}

} // namespace

ModelSpec make_model_spec(Instantiation inst, const tde::Hyperparams& hyper) {
    ModelSpec spec;
    spec.inst = inst;
    spec.hyper = hyper;
    const auto str_type = tde::TypeDescriptor::list(
        tde::TypeDescriptor::categorical(corpus::kVocabSize));
    if (tde::is_str(inst)) {
        spec.intent_enc = tde::build_encoder(str_type, inst, hyper, "intent", spec.registry);
        spec.filter_enc = tde::build_encoder(str_type, inst, hyper, "filter", spec.registry);
    } else {
        spec.intent_enc =
            tde::build_encoder(tde::intent_type(), inst, hyper, "intent", spec.registry);
        spec.filter_enc =
            tde::build_encoder(tde::filter_type(), inst, hyper, "filter", spec.registry);
    }
    spec.intent_dim = spec.intent_enc.dim;
    spec.filter_dim = spec.filter_enc.dim;
    register_classifier(spec);
    return spec;
}

std::size_t param_count(const ModelSpec& spec) {
    std::size_t total = 0;
    for (const auto& def : spec.registry.defs()) {
        total += std::accumulate(def.shape.begin(), def.shape.end(), std::size_t{1},
                                 std::multiplies<>());
    }
    return total;
}

std::size_t param_count(Instantiation inst, const tde::Hyperparams& hyper) {
    return param_count(make_model_spec(inst, hyper));
}

LinnModel build_model(Instantiation inst, std::uint64_t seed, const tde::Hyperparams& hyper) {
    LinnModel model;
    model.spec = make_model_spec(inst, hyper);
    model.vocab_hash = corpus::vocabulary_hash();
    Rng rng(derive_seed(seed, 0x696e6974)); // "init"
    for (const auto& def : model.spec.registry.defs()) {
        nn::Tensor t = nn::Tensor::zeros(def.shape);
        switch (def.init) {
        case tde::InitKind::glorot: nn::fill_glorot(t, def.fan_in, def.fan_out, rng); break;
        case tde::InitKind::embedding: nn::fill_embedding(t, rng); break;
        case tde::InitKind::zeros: break;
        }
        model.store.create(def.name, std::move(t));
    }
    return model;
}

nn::Graph::VarId forward_graph(nn::Graph& g, const LinnModel& model,
                               const icc::AbstractIntent& intent,
                               const icc::AbstractFilter& filter) {
    const auto iv = side_value(model, intent);
    const auto fv = side_value(model, filter);
    const auto ie = tde::encode(g, model.spec.intent_enc, iv, model.spec.hyper);
    const auto fe = tde::encode(g, model.spec.filter_enc, fv, model.spec.hyper);
    return classifier(g, model.spec, g.concat({ie, fe}));
}

double forward(const LinnModel& model, const icc::AbstractIntent& intent,
               const icc::AbstractFilter& filter) {
    nn::Graph g(const_cast<nn::ParamStore*>(&model.store));
    return g.value(forward_graph(g, model, intent, filter)).at(0);
}

double forward_str_tokens(const LinnModel& model, const std::vector<int>& intent_tokens,
                          const std::vector<int>& filter_tokens) {
    if (!tde::is_str(model.spec.inst)) {
        throw UnsupportedInstantiation("token-level forward requires a str-* model");
    }
    nn::Graph g(const_cast<nn::ParamStore*>(&model.store));
    const auto ie = tde::encode(g, model.spec.intent_enc,
                                tde::EncodeValue::from_tokens(intent_tokens), model.spec.hyper);
    const auto fe = tde::encode(g, model.spec.filter_enc,
                                tde::EncodeValue::from_tokens(filter_tokens), model.spec.hyper);
    return g.value(classifier(g, model.spec, g.concat({ie, fe}))).at(0);
}

std::vector<double> intent_encoding(const LinnModel& model, const icc::AbstractIntent& intent) {
    nn::Graph g(const_cast<nn::ParamStore*>(&model.store));
    const auto ie =
        tde::encode(g, model.spec.intent_enc, side_value(model, intent), model.spec.hyper);
    return g.value(ie).data;
}

std::vector<double> train(LinnModel& model, const std::vector<corpus::LabeledLink>& links,
                          const TrainConfig& cfg) {
    if (cfg.epochs < 1) {
        throw Error("train: epochs must be >= 1");
    }
    if (cfg.batch < 1) {
        throw Error("train: batch must be >= 1");
    }
    if (links.empty()) {
        throw Error("train: empty training set");
    }
    for (const auto& link : links) {
        if (link.observed == icc::Tri::top) {
            throw Error("train: training set must contain must-labeled links only");
        }
    }

    Rng rng(derive_seed(cfg.seed, 0x747261696e)); // "train"
    std::vector<std::size_t> order(links.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> history;
    history.reserve(cfg.epochs);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (cfg.shuffle) {
            rng.shuffle(order);
        }
        double epoch_loss = 0.0;
        std::size_t seen = 0;
        for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch) {
            const std::size_t end = std::min(order.size(), begin + cfg.batch);
            nn::Graph g(&model.store);
            std::vector<nn::Graph::VarId> losses;
            losses.reserve(end - begin);
            for (std::size_t k = begin; k < end; ++k) {
                const auto& link = links[order[k]];
                const auto p = forward_graph(g, model, link.intent, link.filter);
                losses.push_back(g.cross_entropy_loss(link.observed == icc::Tri::one ? 1 : 0, p));
            }
            const auto loss = g.mean_all(losses);
            try {
                g.backward(loss);
            } catch (const NonFiniteGradient& e) {
                throw NonFiniteGradient(std::string(e.what()) + " in batch " +
                                        std::to_string(begin / cfg.batch));
            }
            std::map<std::string, nn::Tensor> grads;
            for (const auto& [name, vid] : g.touched_params()) {
                grads.emplace(name, g.grad(vid));
            }
            nn::rmsprop_step(model.store, grads, cfg.opt);
            epoch_loss += g.value(loss).at(0) * static_cast<double>(end - begin);
            seen += end - begin;
        }
        history.push_back(epoch_loss / static_cast<double>(seen));
    }
    return history;
}

} // namespace linkoracle::linn
