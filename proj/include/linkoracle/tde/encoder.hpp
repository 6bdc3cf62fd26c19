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

#include <optional>
#include <string>
#include <vector>

#include "linkoracle/icc/values.hpp"
#include "linkoracle/nn/graph.hpp"
#include "linkoracle/tde/type.hpp"

namespace linkoracle::tde {

enum class Instantiation { str_rnn, str_cnn, typed_simple, typed_tree };

std::string instantiation_name(Instantiation inst);
std::optional<Instantiation> parse_instantiation(const std::string& name);
inline bool is_str(Instantiation inst) {
    return inst == Instantiation::str_rnn || inst == Instantiation::str_cnn;
}

struct Hyperparams {
    std::size_t embed_dim = 16;
    std::vector<std::size_t> kernel_sizes = {1, 3, 5, 7};
    std::vector<std::size_t> kernel_counts = {8, 16, 32, 64};
    std::size_t lstm_hidden = 128;
    std::size_t comb_dense_dim = 64;          // typed-simple single-layer perceptron
    std::vector<std::size_t> mlp_dims = {16, 1}; // classification layers
    std::size_t max_len = 128;

    std::size_t conv_out_dim() const {
        std::size_t n = 0;
        for (auto c : kernel_counts) {
            n += c;
        }
        return n;
    }
};

enum class InitKind { glorot, embedding, zeros };

struct ParamDef {
    std::string name;
    std::vector<std::size_t> shape;
    InitKind init = InitKind::glorot;
    std::size_t fan_in = 0, fan_out = 0; // glorot only
};

// Ordered parameter registry; registration order fixes the init RNG stream.
class ParamRegistry {
public:
    void add(ParamDef def);
    bool contains(const std::string& name) const;
    const std::vector<ParamDef>& defs() const { return defs_; }

private:
    std::vector<ParamDef> defs_;
};

// One node per type constructor; the differentiable choice at each node follows the
// instantiation (Table-3 style: lookup tables at the leaves, CNN/LSTM for lists, sum or
// Child-Sum Tree-LSTM for sets, a dense layer or binary Tree-LSTM for products).
struct EncoderSpec {
    enum class Kind {
        real_identity,
        string_cnn,  // lookup + conv bank (shared per side)
        string_lstm, // lookup + LSTM (shared per side)
        omega_vec,   // trainable vector for ω
        set_sum,
        set_childsum,
        prod_dense,
        prod_bintree,
        sum_dispatch,
    };

    Kind kind = Kind::real_identity;
    std::size_t dim = 0;
    std::string prefix; // parameter name prefix owned by this node
    std::string side;   // "intent" / "filter": selects the shared string encoder
    std::vector<EncoderSpec> children;
};

// Builds an encoder for τ under the given instantiation. str-* instantiations accept only
// L(Σ); typed-* accept the full intent/filter grammar. Registers this encoder's parameters
// (shared string-encoder parameters are registered once per side).
EncoderSpec build_encoder(const TypeDescriptor& type, Instantiation inst,
                          const Hyperparams& hyper, const std::string& side,
                          ParamRegistry& registry);

// Runtime value shaped like a TypeDescriptor.
struct EncodeValue {
    enum class Kind { tokens, omega, set, pair, real };

    Kind kind = Kind::tokens;
    std::vector<int> tokens;
    std::vector<EncodeValue> children;
    double real = 0.0;

    static EncodeValue from_tokens(std::vector<int> t) {
        EncodeValue v;
        v.kind = Kind::tokens;
        v.tokens = std::move(t);
        return v;
    }
    static EncodeValue omega() {
        EncodeValue v;
        v.kind = Kind::omega;
        return v;
    }
    static EncodeValue set(std::vector<EncodeValue> elems) {
        EncodeValue v;
        v.kind = Kind::set;
        v.children = std::move(elems);
        return v;
    }
    static EncodeValue pair(EncodeValue l, EncodeValue r) {
        EncodeValue v;
        v.kind = Kind::pair;
        v.children.push_back(std::move(l));
        v.children.push_back(std::move(r));
        return v;
    }
};

// Typed-form values (per-field token sequences, ω as the sum's right branch).
EncodeValue typed_value(const icc::AbstractIntent& v, std::size_t max_len);
EncodeValue typed_value(const icc::AbstractFilter& v, std::size_t max_len);

// Emits graph nodes computing the encoding; returns the encoding VarId. Checks the
// dimension discipline at every node.
nn::Graph::VarId encode(nn::Graph& g, const EncoderSpec& spec, const EncodeValue& value,
                        const Hyperparams& hyper);

// Effective conv geometry for a token sequence: PAD-extend to at least the largest
// kernel, pool only over positions starting inside the unpadded prefix.
struct ConvGeometry {
    std::size_t l_eff;
    std::size_t n_pos(std::size_t ksize, std::size_t true_len) const {
        const std::size_t by_len = l_eff >= ksize ? l_eff - ksize + 1 : 0;
        return std::max<std::size_t>(1, std::min(by_len, std::max<std::size_t>(true_len, 1)));
    }
};
ConvGeometry conv_geometry(std::size_t true_len, const Hyperparams& hyper);

} // namespace linkoracle::tde
