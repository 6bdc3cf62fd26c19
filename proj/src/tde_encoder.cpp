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

#include "linkoracle/corpus/vocab.hpp"
#include "linkoracle/errors.hpp"
#include "linkoracle/tde/encoder.hpp"

namespace linkoracle::tde {

std::string instantiation_name(Instantiation inst) {
    switch (inst) {
    case Instantiation::str_rnn: return "str-rnn";
    case Instantiation::str_cnn: return "str-cnn";
    case Instantiation::typed_simple: return "typed-simple";
    case Instantiation::typed_tree: return "typed-tree";
    }
    return "?";
}

std::optional<Instantiation> parse_instantiation(const std::string& name) {
    if (name == "str-rnn") return Instantiation::str_rnn;
    if (name == "str-cnn") return Instantiation::str_cnn;
    if (name == "typed-simple") return Instantiation::typed_simple;
    if (name == "typed-tree") return Instantiation::typed_tree;
    return std::nullopt;
}

void ParamRegistry::add(ParamDef def) {
    if (!contains(def.name)) {
        defs_.push_back(std::move(def));
    }
}

bool ParamRegistry::contains(const std::string& name) const {
    return std::any_of(defs_.begin(), defs_.end(),
                       [&](const ParamDef& d) { return d.name == name; });
}

ConvGeometry conv_geometry(std::size_t true_len, const Hyperparams& hyper) {
    const std::size_t max_k = *std::max_element(hyper.kernel_sizes.begin(),
                                                hyper.kernel_sizes.end());
    return {std::max(std::max<std::size_t>(true_len, 1), max_k)};
}

namespace {

bool is_string_type(const TypeDescriptor& t) {
    return t.kind == TypeDescriptor::Kind::list && t.children.size() == 1 &&
           t.children[0].kind == TypeDescriptor::Kind::categorical &&
           t.children[0].cardinality == corpus::kVocabSize;
}

void register_string_encoder(const std::string& side, Instantiation inst,
                             const Hyperparams& hyper, ParamRegistry& reg) {
    reg.add({side + ".embed", {hyper.embed_dim, corpus::kVocabSize}, InitKind::embedding, 0, 0});
    if (inst == Instantiation::str_rnn) {
        const std::size_t m = hyper.embed_dim, h = hyper.lstm_hidden;
        for (const char* gate : {"i", "f", "o", "u"}) {
            reg.add({side + ".lstm.w" + gate, {m, h}, InitKind::glorot, m, h});
            reg.add({side + ".lstm.u" + gate, {h, h}, InitKind::glorot, h, h});
            reg.add({side + ".lstm.b" + gate, {h}, InitKind::zeros, 0, 0});
        }
        return;
    }
    for (std::size_t k = 0; k < hyper.kernel_sizes.size(); ++k) {
        const std::size_t size = hyper.kernel_sizes[k], count = hyper.kernel_counts[k];
        const std::string base = side + ".conv.s" + std::to_string(size);
        reg.add({base + ".w", {count, size * hyper.embed_dim}, InitKind::glorot,
                 size * hyper.embed_dim, count});
        reg.add({base + ".b", {count}, InitKind::zeros, 0, 0});
    }
}

void register_treelstm_unit(const std::string& prefix, const std::vector<const char*>& mats,
                            std::size_t d, ParamRegistry& reg) {
    for (const char* m : mats) {
        reg.add({prefix + "." + m, {d, d}, InitKind::glorot, d, d});
    }
    for (const char* b : {"bi", "bf", "bo", "bu"}) {
        reg.add({prefix + "." + b, {d}, InitKind::zeros, 0, 0});
    }
}

std::size_t string_dim(Instantiation inst, const Hyperparams& hyper) {
    return inst == Instantiation::str_rnn ? hyper.lstm_hidden : hyper.conv_out_dim();
}

EncoderSpec build_rec(const TypeDescriptor& type, Instantiation inst, const Hyperparams& hyper,
                      const std::string& side, const std::string& path, ParamRegistry& reg) {
    EncoderSpec spec;
    spec.side = side;
    spec.prefix = path;
    switch (type.kind) {
    case TypeDescriptor::Kind::real:
        spec.kind = EncoderSpec::Kind::real_identity;
        spec.dim = 1;
        return spec;
    case TypeDescriptor::Kind::list: {
        if (!is_string_type(type)) {
            throw UnsupportedType("only L(Σ) lists are encodable");
        }
        register_string_encoder(side, inst, hyper, reg);
        spec.kind = inst == Instantiation::str_rnn ? EncoderSpec::Kind::string_lstm
                                                   : EncoderSpec::Kind::string_cnn;
        spec.dim = string_dim(inst, hyper);
        return spec;
    }
    case TypeDescriptor::Kind::unit_omega: {
        spec.kind = EncoderSpec::Kind::omega_vec;
        spec.dim = string_dim(inst, hyper);
        reg.add({side + ".omega", {spec.dim}, InitKind::embedding, 0, 0});
        return spec;
    }
    case TypeDescriptor::Kind::set: {
        auto elem = build_rec(type.children[0], inst, hyper, side, path + ".elem", reg);
        spec.dim = elem.dim;
        if (inst == Instantiation::typed_simple) {
            spec.kind = EncoderSpec::Kind::set_sum;
        } else {
            spec.kind = EncoderSpec::Kind::set_childsum;
            register_treelstm_unit(path + ".aggr", {"ui", "uf", "uo", "uu"}, spec.dim, reg);
        }
        spec.children.push_back(std::move(elem));
        return spec;
    }
    case TypeDescriptor::Kind::prod: {
        auto left = build_rec(type.children[0], inst, hyper, side, path + ".left", reg);
        auto right = build_rec(type.children[1], inst, hyper, side, path + ".right", reg);
        if (inst == Instantiation::typed_simple) {
            spec.kind = EncoderSpec::Kind::prod_dense;
            spec.dim = hyper.comb_dense_dim;
            reg.add({path + ".comb.w", {left.dim + right.dim, spec.dim}, InitKind::glorot,
                     left.dim + right.dim, spec.dim});
            reg.add({path + ".comb.b", {spec.dim}, InitKind::zeros, 0, 0});
        } else {
            if (left.dim != right.dim) {
                throw UnsupportedType("binary Tree-LSTM comb needs equal child dims");
            }
            spec.kind = EncoderSpec::Kind::prod_bintree;
            spec.dim = left.dim;
            register_treelstm_unit(
                path + ".comb",
                {"uil", "uir", "ufll", "uflr", "ufrl", "ufrr", "uol", "uor", "uul", "uur"},
                spec.dim, reg);
        }
        spec.children.push_back(std::move(left));
        spec.children.push_back(std::move(right));
        return spec;
    }
    case TypeDescriptor::Kind::sum: {
        auto left = build_rec(type.children[0], inst, hyper, side, path + ".left", reg);
        auto right = build_rec(type.children[1], inst, hyper, side, path + ".right", reg);
        if (left.dim != right.dim) {
            throw UnsupportedType("sum branches must map to the same dimension");
        }
        spec.kind = EncoderSpec::Kind::sum_dispatch;
        spec.dim = left.dim;
        spec.children.push_back(std::move(left));
        spec.children.push_back(std::move(right));
        return spec;
    }
    case TypeDescriptor::Kind::categorical:
        throw UnsupportedType("bare categorical values only occur inside lists here");
    }
    throw UnsupportedType("unhandled type kind");
}

} // namespace

EncoderSpec build_encoder(const TypeDescriptor& type, Instantiation inst,
                          const Hyperparams& hyper, const std::string& side,
                          ParamRegistry& registry) {
    if (is_str(inst) && !is_string_type(type)) {
        throw UnsupportedType("str-* instantiations require pre-serialized L(Σ) input");
    }
    return build_rec(type, inst, hyper, side, side, registry);
}

EncodeValue typed_value(const icc::AbstractIntent& v, std::size_t max_len) {
    EncodeValue action;
    if (v.action()) {
        auto toks = corpus::pattern_tokens(*v.action());
        if (toks.size() > max_len) {
            toks.resize(max_len);
        }
        action = EncodeValue::from_tokens(std::move(toks));
    } else {
        action = EncodeValue::omega();
    }
    std::vector<EncodeValue> cats;
    for (const auto& c : v.categories()) {
        auto toks = corpus::pattern_tokens(c);
        if (toks.size() > max_len) {
            toks.resize(max_len);
        }
        cats.push_back(EncodeValue::from_tokens(std::move(toks)));
    }
    return EncodeValue::pair(std::move(action), EncodeValue::set(std::move(cats)));
}

EncodeValue typed_value(const icc::AbstractFilter& v, std::size_t max_len) {
    auto to_set = [&](const std::vector<icc::PatternString>& patterns) {
        std::vector<EncodeValue> elems;
        for (const auto& p : patterns) {
            auto toks = corpus::pattern_tokens(p);
            if (toks.size() > max_len) {
                toks.resize(max_len);
            }
            elems.push_back(EncodeValue::from_tokens(std::move(toks)));
        }
        return EncodeValue::set(std::move(elems));
    };
    return EncodeValue::pair(to_set(v.actions()), to_set(v.categories()));
}

namespace {

nn::Graph::VarId encode_string_cnn(nn::Graph& g, const EncoderSpec& spec,
                                   const std::vector<int>& raw, const Hyperparams& hyper) {
    std::vector<int> toks(raw.begin(), raw.end());
    std::size_t tl = corpus::true_length(toks);
    tl = std::min(tl, hyper.max_len);
    toks.resize(tl);
    const ConvGeometry geom = conv_geometry(tl, hyper);
    toks.resize(geom.l_eff, corpus::kPad);

    const auto x = g.embedding_lookup(g.param(spec.side + ".embed"), toks);
    std::vector<nn::Graph::VarId> outs;
    for (std::size_t k = 0; k < hyper.kernel_sizes.size(); ++k) {
        const std::size_t size = hyper.kernel_sizes[k];
        const std::string base = spec.side + ".conv.s" + std::to_string(size);
        outs.push_back(g.conv1d_max(x, g.param(base + ".w"), g.param(base + ".b"), size,
                                    geom.n_pos(size, tl)));
    }
    return g.concat(outs);
}

nn::Graph::VarId encode_string_lstm(nn::Graph& g, const EncoderSpec& spec,
                                    const std::vector<int>& raw, const Hyperparams& hyper) {
    std::vector<int> toks(raw.begin(), raw.end());
    std::size_t tl = corpus::true_length(toks);
    tl = std::min(tl, hyper.max_len);
    toks.resize(std::max<std::size_t>(tl, 1), corpus::kPad);

    const auto x = g.embedding_lookup(g.param(spec.side + ".embed"), toks);
    const std::string base = spec.side + ".lstm.";
    nn::Graph::LstmVars p{
        g.param(base + "wi"), g.param(base + "ui"), g.param(base + "bi"),
        g.param(base + "wf"), g.param(base + "uf"), g.param(base + "bf"),
        g.param(base + "wo"), g.param(base + "uo"), g.param(base + "bo"),
        g.param(base + "wu"), g.param(base + "uu"), g.param(base + "bu"),
    };
    return g.lstm_final(x, p, hyper.lstm_hidden);
}

} // namespace

nn::Graph::VarId encode(nn::Graph& g, const EncoderSpec& spec, const EncodeValue& value,
                        const Hyperparams& hyper) {
    nn::Graph::VarId out;
    switch (spec.kind) {
    case EncoderSpec::Kind::real_identity:
        out = g.constant(nn::Tensor::scalar(value.real));
        break;
    case EncoderSpec::Kind::string_cnn:
        if (value.kind != EncodeValue::Kind::tokens) {
            throw UnsupportedType("string encoder fed a non-string value");
        }
        out = encode_string_cnn(g, spec, value.tokens, hyper);
        break;
    case EncoderSpec::Kind::string_lstm:
        if (value.kind != EncodeValue::Kind::tokens) {
            throw UnsupportedType("string encoder fed a non-string value");
        }
        out = encode_string_lstm(g, spec, value.tokens, hyper);
        break;
    case EncoderSpec::Kind::omega_vec:
        out = g.param(spec.side + ".omega");
        break;
    case EncoderSpec::Kind::set_sum: {
        std::vector<nn::Graph::VarId> elems;
        for (const auto& e : value.children) {
            elems.push_back(encode(g, spec.children[0], e, hyper));
        }
        out = g.sum_all(elems, spec.dim);
        break;
    }
    case EncoderSpec::Kind::set_childsum: {
        std::vector<nn::Graph::HC> kids;
        for (const auto& e : value.children) {
            kids.push_back({encode(g, spec.children[0], e, hyper), g.zeros(spec.dim)});
        }
        const std::string base = spec.prefix + ".aggr.";
        nn::Graph::ChildSumVars p;
        p.ui = g.param(base + "ui");
        p.uf = g.param(base + "uf");
        p.uo = g.param(base + "uo");
        p.uu = g.param(base + "uu");
        p.bi = g.param(base + "bi");
        p.bf = g.param(base + "bf");
        p.bo = g.param(base + "bo");
        p.bu = g.param(base + "bu");
        out = g.childsum_treelstm(kids, std::nullopt, p, spec.dim).h;
        break;
    }
    case EncoderSpec::Kind::prod_dense: {
        const auto l = encode(g, spec.children[0], value.children[0], hyper);
        const auto r = encode(g, spec.children[1], value.children[1], hyper);
        out = g.dense(g.concat({l, r}), g.param(spec.prefix + ".comb.w"),
                      g.param(spec.prefix + ".comb.b"), nn::Activation::relu);
        break;
    }
    case EncoderSpec::Kind::prod_bintree: {
        const auto l = encode(g, spec.children[0], value.children[0], hyper);
        const auto r = encode(g, spec.children[1], value.children[1], hyper);
        const std::string base = spec.prefix + ".comb.";
        nn::Graph::BinaryTreeVars p;
        p.uil = g.param(base + "uil");
        p.uir = g.param(base + "uir");
        p.ufll = g.param(base + "ufll");
        p.uflr = g.param(base + "uflr");
        p.ufrl = g.param(base + "ufrl");
        p.ufrr = g.param(base + "ufrr");
        p.uol = g.param(base + "uol");
        p.uor = g.param(base + "uor");
        p.uul = g.param(base + "uul");
        p.uur = g.param(base + "uur");
        p.bi = g.param(base + "bi");
        p.bf = g.param(base + "bf");
        p.bo = g.param(base + "bo");
        p.bu = g.param(base + "bu");
        out = g.binary_treelstm({l, g.zeros(spec.dim)}, {r, g.zeros(spec.dim)}, std::nullopt, p,
                                spec.dim)
                  .h;
        break;
    }
    case EncoderSpec::Kind::sum_dispatch:
        if (value.kind == EncodeValue::Kind::omega) {
            out = encode(g, spec.children[1], value, hyper);
        } else {
            out = encode(g, spec.children[0], value, hyper);
        }
        break;
    default:
        throw UnsupportedType("unhandled encoder kind");
    }
    if (g.value(out).numel() != spec.dim) {
        throw ShapeMismatch("encoder node produced " + std::to_string(g.value(out).numel()) +
                            " values, declared dim " + std::to_string(spec.dim));
    }
    return out;
}

} // namespace linkoracle::tde
