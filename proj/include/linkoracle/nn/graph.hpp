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

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linkoracle/nn/params.hpp"
#include "linkoracle/nn/tensor.hpp"

namespace linkoracle::nn {

enum class Activation { identity, relu, sigmoid, tanh };

double apply_activation(Activation a, double x);
double stable_sigmoid(double x);

// Reverse-mode tape. Nodes are created in topological order by the op builders below;
// backward() replays them in reverse. One Graph per forward/backward episode; not
// shareable across threads.
class Graph {
public:
    using VarId = std::uint32_t;

    struct HC { // (hidden, cell) pair of a Tree-LSTM node
        VarId h;
        VarId c;
    };

    // Named parameter bundles for the recurrent/recursive units.
    struct LstmVars {
        VarId wi, ui, bi;
        VarId wf, uf, bf;
        VarId wo, uo, bo;
        VarId wu, uu, bu;
    };
    struct ChildSumVars {
        std::optional<VarId> wi, wf, wo, wu; // absent when the unit takes no input x
        VarId ui, uf, uo, uu;
        VarId bi, bf, bo, bu;
    };
    struct BinaryTreeVars {
        std::optional<VarId> wi, wf, wo, wu;
        VarId uil, uir;             // input gate, per child
        VarId ufll, uflr, ufrl, ufrr; // forget gates: (gate child) x (source child)
        VarId uol, uor;
        VarId uul, uur;
        VarId bi, bf, bo, bu;
    };

    explicit Graph(ParamStore* store = nullptr) : store_(store) {}

    VarId constant(Tensor v);
    VarId zeros(std::size_t n) { return constant(Tensor::zeros({n})); }

    // Leaf bound to a store entry; one node per name per graph.
    VarId param(const std::string& name);

    const Tensor& value(VarId id) const { return nodes_[id].value; }
    const Tensor& grad(VarId id) const { return nodes_[id].grad; }

    // out[:, j] = table[:, ids[j]]; gradient accumulates into the selected columns only.
    VarId embedding_lookup(VarId table, std::vector<int> ids);

    // Valid-mode correlation + bias + relu, then global max over positions [0, n_pos).
    // x: [n, l], w: [count, ksize*n], b: [count]  ->  [count].
    VarId conv1d_max(VarId x, VarId w, VarId b, std::size_t ksize, std::size_t n_pos);

    // y = a(wᵀx + b); x: [m], w: [m, n], b: [n] -> [n].
    VarId dense(VarId x, VarId w, VarId b, Activation act);

    // Final hidden state of a standard LSTM over xs: [m, l], l >= 1 -> [hidden].
    VarId lstm_final(VarId xs, const LstmVars& p, std::size_t hidden);

    // Child-Sum Tree-LSTM unit; children enter as (h, c) pairs. Returns (h, c).
    HC childsum_treelstm(const std::vector<HC>& children, std::optional<VarId> x,
                         const ChildSumVars& p, std::size_t dim);

    // Binary Tree-LSTM unit with dedicated per-child weights.
    HC binary_treelstm(const HC& left, const HC& right, std::optional<VarId> x,
                       const BinaryTreeVars& p, std::size_t dim);

    VarId concat(const std::vector<VarId>& xs);

    // Elementwise sum (in list order); empty -> zeros(dim) with no gradient.
    VarId sum_all(const std::vector<VarId>& xs, std::size_t dim);

    // −[y·ln p̂ + (1−y)·ln(1−p̂)] with p̂ clamped to [ε, 1−ε], ε = 1e−7.
    VarId cross_entropy_loss(int label, VarId p);

    VarId mean_all(const std::vector<VarId>& xs);

    // Seeds d(root) = 1 and replays the tape in reverse. Throws NonFiniteGradient if any
    // parameter gradient ends up NaN/Inf.
    void backward(VarId root);

    // Parameter name -> node, for the nodes touched by this graph.
    const std::map<std::string, VarId>& touched_params() const { return param_nodes_; }

    std::size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        Tensor value;
        Tensor grad;
        std::function<void(Graph&)> back; // null for leaves
    };

    VarId push(Tensor value, std::function<void(Graph&)> back);
    Tensor& grad_mut(VarId id) { return nodes_[id].grad; }

    std::vector<Node> nodes_;
    std::map<std::string, VarId> param_nodes_;
    ParamStore* store_;
};

// Max possible |Δθ| per RMSprop step is η/√ε; exposed for the documentation test.
inline double rmsprop_step_bound(const RmspropConfig& cfg) {
    return cfg.eta / std::sqrt(cfg.eps);
}

} // namespace linkoracle::nn
