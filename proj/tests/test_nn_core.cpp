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

#include <doctest.h>

#include <cmath>

#include "gradcheck.hpp"
#include "linkoracle/nn/graph.hpp"
#include "linkoracle/rng.hpp"

using namespace linkoracle;
using nn::Activation;
using nn::Graph;
using nn::ParamStore;
using nn::Tensor;

namespace {

double sigma(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Tensor rand_tensor(std::vector<std::size_t> shape, Rng& rng, double scale = 0.8) {
    Tensor t = Tensor::zeros(std::move(shape));
    for (auto& v : t.data) {
        v = rng.uniform(-scale, scale);
    }
    return t;
}

// Scalar loss via a fixed random projection so every output coordinate matters.
Graph::VarId project(Graph& g, Graph::VarId x, Rng& rng) {
    const std::size_t n = g.value(x).numel();
    const auto w = g.constant(rand_tensor({n, 1}, rng));
    const auto b = g.constant(Tensor::zeros({1}));
    return g.dense(x, w, b, Activation::tanh);
}

} // namespace

// ---------------------------------------------------------------------------
// Hand-computed forward examples
// ---------------------------------------------------------------------------

TEST_CASE("embedding_lookup: hand example and empty ids") {
    ParamStore store;
    Tensor table = Tensor::zeros({2, 3});
    table.data = {1, 2, 3, 4, 5, 6};
    store.create("t", table);
    Graph g(&store);
    const auto out = g.embedding_lookup(g.param("t"), {2, 0});
    CHECK(g.value(out).shape == std::vector<std::size_t>{2, 2});
    CHECK(g.value(out).data == std::vector<double>{3, 1, 6, 4});

    const auto empty = g.embedding_lookup(g.param("t"), {});
    CHECK(g.value(empty).shape == std::vector<std::size_t>{2, 0});
    CHECK(g.value(empty).numel() == 0);

    CHECK_THROWS_AS(g.embedding_lookup(g.param("t"), {3}), IdOutOfRange);
}

TEST_CASE("embedding_lookup: one-hot table reproduces one-hot encoding") {
    ParamStore store;
    Tensor table = Tensor::zeros({3, 3});
    for (std::size_t i = 0; i < 3; ++i) {
        table.at(i, i) = 1.0;
    }
    store.create("t", table);
    Graph g(&store);
    const auto out = g.embedding_lookup(g.param("t"), {1});
    CHECK(g.value(out).data == std::vector<double>{0, 1, 0});
}

TEST_CASE("conv1d_max: hand example") {
    ParamStore store;
    Tensor w = Tensor::vector({2.0});
    w.shape = {1, 1};
    store.create("w", w);
    store.create("b", Tensor::vector({0.0}));
    Tensor x = Tensor::zeros({1, 3});
    x.data = {1.0, -1.0, 3.0};
    store.create("x", x);
    Graph g(&store);
    const auto out = g.conv1d_max(g.param("x"), g.param("w"), g.param("b"), 1, 3);
    CHECK(g.value(out).data == std::vector<double>{6.0});
}

TEST_CASE("conv1d_max: all-zero parameters give the zero vector") {
    ParamStore store;
    store.create("w", Tensor::zeros({4, 3 * 2}));
    store.create("b", Tensor::zeros({4}));
    Rng rng(3);
    store.create("x", rand_tensor({2, 9}, rng));
    Graph g(&store);
    const auto out = g.conv1d_max(g.param("x"), g.param("w"), g.param("b"), 3, 7);
    for (double v : g.value(out).data) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("conv1d_max: InputTooShort") {
    ParamStore store;
    store.create("w", Tensor::zeros({1, 5}));
    store.create("b", Tensor::zeros({1}));
    store.create("x", Tensor::zeros({1, 3}));
    Graph g(&store);
    CHECK_THROWS_AS(g.conv1d_max(g.param("x"), g.param("w"), g.param("b"), 5, 1), InputTooShort);
}

TEST_CASE("conv1d_max: pooled max is invariant under content-preserving shifts") {
    Rng rng(5);
    ParamStore store;
    store.create("w", rand_tensor({3, 3 * 2}, rng));
    store.create("b", rand_tensor({3}, rng));
    Tensor x1 = Tensor::zeros({2, 10});
    Tensor x2 = Tensor::zeros({2, 10});
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t j = 0; j < 4; ++j) {
            const double v = rng.uniform(-1.0, 1.0);
            x1.at(r, 2 + j) = v;
            x2.at(r, 3 + j) = v;
        }
    }
    store.create("x1", x1);
    store.create("x2", x2);
    Graph g(&store);
    const auto o1 = g.conv1d_max(g.param("x1"), g.param("w"), g.param("b"), 3, 8);
    const auto o2 = g.conv1d_max(g.param("x2"), g.param("w"), g.param("b"), 3, 8);
    CHECK(g.value(o1).data == g.value(o2).data);
}

TEST_CASE("dense: hand examples") {
    ParamStore store;
    store.create("w", Tensor::zeros({3, 2}));
    store.create("b", Tensor::zeros({2}));
    store.create("x", Tensor::vector({1.0, -2.0, 0.5}));
    Graph g(&store);
    const auto zero = g.dense(g.param("x"), g.param("w"), g.param("b"), Activation::relu);
    CHECK(g.value(zero).data == std::vector<double>{0.0, 0.0});
    const auto half = g.dense(g.param("x"), g.param("w"), g.param("b"), Activation::sigmoid);
    CHECK(g.value(half).data == std::vector<double>{0.5, 0.5});

    ParamStore store2;
    Tensor w2 = Tensor::vector({1.0, 2.0});
    w2.shape = {2, 1};
    store2.create("w", w2);
    store2.create("b", Tensor::vector({1.0}));
    store2.create("x", Tensor::vector({3.0, -1.0}));
    Graph g2(&store2);
    const auto out = g2.dense(g2.param("x"), g2.param("w"), g2.param("b"), Activation::identity);
    CHECK(g2.value(out).data == std::vector<double>{2.0});

    CHECK_THROWS_AS(g2.dense(g2.param("b"), g2.param("w"), g2.param("b"),
                             Activation::identity),
                    ShapeMismatch);
}

TEST_CASE("lstm: zero parameters give zero hidden state") {
    ParamStore store;
    for (const char* gate : {"i", "f", "o", "u"}) {
        store.create(std::string("w") + gate, Tensor::zeros({2, 3}));
        store.create(std::string("u") + gate, Tensor::zeros({3, 3}));
        store.create(std::string("b") + gate, Tensor::zeros({3}));
    }
    Rng rng(7);
    store.create("x", rand_tensor({2, 5}, rng));
    Graph g(&store);
    Graph::LstmVars p{g.param("wi"), g.param("ui"), g.param("bi"), g.param("wf"),
                      g.param("uf"), g.param("bf"), g.param("wo"), g.param("uo"),
                      g.param("bo"), g.param("wu"), g.param("uu"), g.param("bu")};
    const auto h = g.lstm_final(g.param("x"), p, 3);
    for (double v : g.value(h).data) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("lstm: single-step scalar case matches direct formula evaluation") {
    ParamStore store;
    auto mat = [&](const char* name, double v) {
        Tensor t = Tensor::vector({v});
        t.shape = {1, 1};
        store.create(name, t);
    };
    mat("wi", 0.5);
    mat("ui", 0.3);
    mat("wf", -0.4);
    mat("uf", 0.2);
    mat("wo", 0.7);
    mat("uo", -0.1);
    mat("wu", 0.6);
    mat("uu", 0.4);
    store.create("bi", Tensor::vector({0.1}));
    store.create("bf", Tensor::vector({0.0}));
    store.create("bo", Tensor::vector({0.2}));
    store.create("bu", Tensor::vector({-0.3}));
    Tensor x = Tensor::zeros({1, 1});
    x.data = {0.8};
    store.create("x", x);

    Graph g(&store);
    Graph::LstmVars p{g.param("wi"), g.param("ui"), g.param("bi"), g.param("wf"),
                      g.param("uf"), g.param("bf"), g.param("wo"), g.param("uo"),
                      g.param("bo"), g.param("wu"), g.param("uu"), g.param("bu")};
    const auto h = g.lstm_final(g.param("x"), p, 1);

    // Independent oracle: direct evaluation of the five formulas at 64-bit precision.
    const double i = sigma(0.5 * 0.8 + 0.1);
    const double o = sigma(0.7 * 0.8 + 0.2);
    const double u = std::tanh(0.6 * 0.8 - 0.3);
    const double c = i * u;
    const double expected = o * std::tanh(c);
    CHECK(g.value(h).at(0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("childsum: empty children with zero params gives zero hidden state") {
    ParamStore store;
    for (const char* m : {"ui", "uf", "uo", "uu"}) {
        store.create(m, Tensor::zeros({2, 2}));
    }
    for (const char* b : {"bi", "bf", "bo", "bu"}) {
        store.create(b, Tensor::zeros({2}));
    }
    Graph g(&store);
    Graph::ChildSumVars p;
    p.ui = g.param("ui");
    p.uf = g.param("uf");
    p.uo = g.param("uo");
    p.uu = g.param("uu");
    p.bi = g.param("bi");
    p.bf = g.param("bf");
    p.bo = g.param("bo");
    p.bu = g.param("bu");
    const auto hc = g.childsum_treelstm({}, std::nullopt, p, 2);
    for (double v : g.value(hc.h).data) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("childsum: permuting children leaves the output unchanged") {
    Rng rng(11);
    ParamStore store;
    for (const char* m : {"ui", "uf", "uo", "uu"}) {
        store.create(m, rand_tensor({3, 3}, rng));
    }
    for (const char* b : {"bi", "bf", "bo", "bu"}) {
        store.create(b, rand_tensor({3}, rng));
    }
    store.create("h1", rand_tensor({3}, rng));
    store.create("c1", rand_tensor({3}, rng));
    store.create("h2", rand_tensor({3}, rng));
    store.create("c2", rand_tensor({3}, rng));

    auto run = [&](bool swapped) {
        Graph g(&store);
        Graph::ChildSumVars p;
        p.ui = g.param("ui");
        p.uf = g.param("uf");
        p.uo = g.param("uo");
        p.uu = g.param("uu");
        p.bi = g.param("bi");
        p.bf = g.param("bf");
        p.bo = g.param("bo");
        p.bu = g.param("bu");
        Graph::HC a{g.param("h1"), g.param("c1")};
        Graph::HC b{g.param("h2"), g.param("c2")};
        std::vector<Graph::HC> kids = swapped ? std::vector<Graph::HC>{b, a}
                                              : std::vector<Graph::HC>{a, b};
        const auto hc = g.childsum_treelstm(kids, std::nullopt, p, 3);
        return g.value(hc.h).data;
    };
    CHECK(run(false) == run(true));
}

TEST_CASE("childsum: one-child scalar case matches direct formula evaluation") {
    ParamStore store;
    auto mat = [&](const char* name, double v) {
        Tensor t = Tensor::vector({v});
        t.shape = {1, 1};
        store.create(name, t);
    };
    mat("ui", 0.3);
    mat("uf", 0.2);
    mat("uo", -0.1);
    mat("uu", 0.4);
    store.create("bi", Tensor::vector({0.1}));
    store.create("bf", Tensor::vector({0.0}));
    store.create("bo", Tensor::vector({0.2}));
    store.create("bu", Tensor::vector({-0.3}));
    store.create("h1", Tensor::vector({0.5}));
    store.create("c1", Tensor::vector({0.25}));

    Graph g(&store);
    Graph::ChildSumVars p;
    p.ui = g.param("ui");
    p.uf = g.param("uf");
    p.uo = g.param("uo");
    p.uu = g.param("uu");
    p.bi = g.param("bi");
    p.bf = g.param("bf");
    p.bo = g.param("bo");
    p.bu = g.param("bu");
    const auto hc = g.childsum_treelstm({{g.param("h1"), g.param("c1")}}, std::nullopt, p, 1);

    const double i = sigma(0.3 * 0.5 + 0.1);
    const double f = sigma(0.2 * 0.5);
    const double o = sigma(-0.1 * 0.5 + 0.2);
    const double u = std::tanh(0.4 * 0.5 - 0.3);
    const double c = i * u + f * 0.25;
    CHECK(g.value(hc.c).at(0) == doctest::Approx(c).epsilon(1e-15));
    CHECK(g.value(hc.h).at(0) == doctest::Approx(o * std::tanh(c)).epsilon(1e-15));
}

TEST_CASE("binary treelstm: zero params zero inputs give zero hidden state") {
    ParamStore store;
    for (const char* m : {"uil", "uir", "ufll", "uflr", "ufrl", "ufrr", "uol", "uor", "uul",
                          "uur"}) {
        store.create(m, Tensor::zeros({2, 2}));
    }
    for (const char* b : {"bi", "bf", "bo", "bu"}) {
        store.create(b, Tensor::zeros({2}));
    }
    Graph g(&store);
    Graph::BinaryTreeVars p;
    p.uil = g.param("uil");
    p.uir = g.param("uir");
    p.ufll = g.param("ufll");
    p.uflr = g.param("uflr");
    p.ufrl = g.param("ufrl");
    p.ufrr = g.param("ufrr");
    p.uol = g.param("uol");
    p.uor = g.param("uor");
    p.uul = g.param("uul");
    p.uur = g.param("uur");
    p.bi = g.param("bi");
    p.bf = g.param("bf");
    p.bo = g.param("bo");
    p.bu = g.param("bu");
    Graph::HC zero{g.zeros(2), g.zeros(2)};
    const auto hc = g.binary_treelstm(zero, zero, std::nullopt, p, 2);
    for (double v : g.value(hc.h).data) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("binary treelstm: swapping children changes the output") {
    Rng rng(13);
    ParamStore store;
    for (const char* m : {"uil", "uir", "ufll", "uflr", "ufrl", "ufrr", "uol", "uor", "uul",
                          "uur"}) {
        store.create(m, rand_tensor({2, 2}, rng));
    }
    for (const char* b : {"bi", "bf", "bo", "bu"}) {
        store.create(b, rand_tensor({2}, rng));
    }
    store.create("hl", rand_tensor({2}, rng));
    store.create("hr", rand_tensor({2}, rng));

    auto run = [&](bool swapped) {
        Graph g(&store);
        Graph::BinaryTreeVars p;
        p.uil = g.param("uil");
        p.uir = g.param("uir");
        p.ufll = g.param("ufll");
        p.uflr = g.param("uflr");
        p.ufrl = g.param("ufrl");
        p.ufrr = g.param("ufrr");
        p.uol = g.param("uol");
        p.uor = g.param("uor");
        p.uul = g.param("uul");
        p.uur = g.param("uur");
        p.bi = g.param("bi");
        p.bf = g.param("bf");
        p.bo = g.param("bo");
        p.bu = g.param("bu");
        Graph::HC l{g.param("hl"), g.zeros(2)};
        Graph::HC r{g.param("hr"), g.zeros(2)};
        const auto hc = swapped ? g.binary_treelstm(r, l, std::nullopt, p, 2)
                                : g.binary_treelstm(l, r, std::nullopt, p, 2);
        return g.value(hc.h).data;
    };
    CHECK(run(false) != run(true));
}

TEST_CASE("cross_entropy: hand values") {
    ParamStore store;
    Graph g(&store);
    const auto l1 = g.cross_entropy_loss(1, g.constant(Tensor::scalar(0.5)));
    CHECK(g.value(l1).at(0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    const auto l2 = g.cross_entropy_loss(1, g.constant(Tensor::scalar(1.0 - 1e-7)));
    CHECK(g.value(l2).at(0) == doctest::Approx(0.0).epsilon(1e-6));
    const auto l3 = g.cross_entropy_loss(0, g.constant(Tensor::scalar(0.8)));
    CHECK(g.value(l3).at(0) == doctest::Approx(-std::log(0.2)).epsilon(1e-12));
}

TEST_CASE("cross_entropy gradient: d/dp at (1, 0.5) is -2") {
    ParamStore store;
    store.create("p", Tensor::scalar(0.5));
    Graph g(&store);
    const auto loss = g.cross_entropy_loss(1, g.param("p"));
    g.backward(loss);
    CHECK(g.grad(g.touched_params().at("p")).at(0) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("unused embedding columns receive exactly zero gradient") {
    Rng rng(17);
    ParamStore store;
    store.create("t", rand_tensor({2, 5}, rng));
    Graph g(&store);
    const auto out = g.embedding_lookup(g.param("t"), {1, 3});
    Rng prng(19);
    const auto loss = project(g, out, prng);
    g.backward(loss);
    const auto& gt = g.grad(g.touched_params().at("t"));
    for (std::size_t r = 0; r < 2; ++r) {
        CHECK(gt.at(r, 0) == 0.0);
        CHECK(gt.at(r, 2) == 0.0);
        CHECK(gt.at(r, 4) == 0.0);
    }
}

TEST_CASE("backward aborts on non-finite parameter gradients") {
    ParamStore store;
    store.create("p", Tensor::scalar(1e308));
    store.create("b", Tensor::scalar(0.0));
    Graph g(&store);
    Tensor w = Tensor::scalar(1e308);
    w.shape = {1, 1};
    const auto y = g.dense(g.param("p"), g.constant(w), g.param("b"), Activation::identity);
    const auto z = g.dense(y, g.constant(w), g.param("b"), Activation::identity);
    CHECK_THROWS_AS(g.backward(z), NonFiniteGradient);
}

// ---------------------------------------------------------------------------
// Finite-difference checks, per op in isolation
// ---------------------------------------------------------------------------

TEST_CASE("gradcheck: dense (all activations)") {
    int salt = 100;
    for (auto act : {Activation::identity, Activation::relu, Activation::sigmoid,
                     Activation::tanh}) {
        Rng rng(salt++);
        ParamStore store;
        store.create("w", rand_tensor({4, 3}, rng));
        store.create("b", rand_tensor({3}, rng));
        store.create("x", rand_tensor({4}, rng));
        const auto report = gradcheck::check_store(store, [&](Graph& g) {
            Rng local(7);
            return project(g, g.dense(g.param("x"), g.param("w"), g.param("b"), act), local);
        });
        CHECK(report.max_err < 1e-4);
        CHECK(report.checked == 4 * 3 + 3 + 4);
    }
}

TEST_CASE("gradcheck: embedding + conv bank") {
    Rng rng(19);
    ParamStore store;
    store.create("t", rand_tensor({3, 6}, rng));
    store.create("w1", rand_tensor({2, 3}, rng));
    store.create("b1", rand_tensor({2}, rng));
    store.create("w3", rand_tensor({2, 9}, rng));
    store.create("b3", rand_tensor({2}, rng));
    const std::vector<int> ids{1, 4, 2, 0, 5, 3, 1, 2};
    const auto report = gradcheck::check_store(store, [&](Graph& g) {
        const auto x = g.embedding_lookup(g.param("t"), ids);
        const auto c1 = g.conv1d_max(x, g.param("w1"), g.param("b1"), 1, 8);
        const auto c3 = g.conv1d_max(x, g.param("w3"), g.param("b3"), 3, 6);
        Rng local(23);
        return project(g, g.concat({c1, c3}), local);
    });
    CHECK(report.max_err < 1e-4);
}

TEST_CASE("gradcheck: lstm over a short sequence") {
    Rng rng(29);
    ParamStore store;
    const std::size_t m = 3, h = 4;
    for (const char* gate : {"i", "f", "o", "u"}) {
        store.create(std::string("w") + gate, rand_tensor({m, h}, rng));
        store.create(std::string("u") + gate, rand_tensor({h, h}, rng));
        store.create(std::string("b") + gate, rand_tensor({h}, rng));
    }
    store.create("x", rand_tensor({m, 5}, rng));
    const auto report = gradcheck::check_store(store, [&](Graph& g) {
        Graph::LstmVars p{g.param("wi"), g.param("ui"), g.param("bi"), g.param("wf"),
                          g.param("uf"), g.param("bf"), g.param("wo"), g.param("uo"),
                          g.param("bo"), g.param("wu"), g.param("uu"), g.param("bu")};
        Rng local(31);
        return project(g, g.lstm_final(g.param("x"), p, h), local);
    });
    CHECK(report.max_err < 1e-4);
}

TEST_CASE("gradcheck: childsum with input x and multiple children") {
    Rng rng(37);
    ParamStore store;
    const std::size_t d = 3, m = 2;
    for (const char* mat : {"ui", "uf", "uo", "uu"}) {
        store.create(mat, rand_tensor({d, d}, rng));
    }
    for (const char* mat : {"wi", "wf", "wo", "wu"}) {
        store.create(mat, rand_tensor({m, d}, rng));
    }
    for (const char* b : {"bi", "bf", "bo", "bu"}) {
        store.create(b, rand_tensor({d}, rng));
    }
    store.create("x", rand_tensor({m}, rng));
    for (int k = 0; k < 3; ++k) {
        store.create("h" + std::to_string(k), rand_tensor({d}, rng));
        store.create("c" + std::to_string(k), rand_tensor({d}, rng));
    }
    const auto report = gradcheck::check_store(store, [&](Graph& g) {
        Graph::ChildSumVars p;
        p.wi = g.param("wi");
        p.wf = g.param("wf");
        p.wo = g.param("wo");
        p.wu = g.param("wu");
        p.ui = g.param("ui");
        p.uf = g.param("uf");
        p.uo = g.param("uo");
        p.uu = g.param("uu");
        p.bi = g.param("bi");
        p.bf = g.param("bf");
        p.bo = g.param("bo");
        p.bu = g.param("bu");
        std::vector<Graph::HC> kids;
        for (int k = 0; k < 3; ++k) {
            kids.push_back({g.param("h" + std::to_string(k)), g.param("c" + std::to_string(k))});
        }
        const auto hc = g.childsum_treelstm(kids, g.param("x"), p, d);
        Rng local(41);
        return project(g, g.concat({hc.h, hc.c}), local);
    });
    CHECK(report.max_err < 1e-4);
}

TEST_CASE("gradcheck: binary treelstm with input x") {
    Rng rng(43);
    ParamStore store;
    const std::size_t d = 3, m = 2;
    for (const char* mat : {"uil", "uir", "ufll", "uflr", "ufrl", "ufrr", "uol", "uor", "uul",
                            "uur"}) {
        store.create(mat, rand_tensor({d, d}, rng));
    }
    for (const char* mat : {"wi", "wf", "wo", "wu"}) {
        store.create(mat, rand_tensor({m, d}, rng));
    }
    for (const char* b : {"bi", "bf", "bo", "bu"}) {
        store.create(b, rand_tensor({d}, rng));
    }
    store.create("x", rand_tensor({m}, rng));
    for (const char* n : {"hl", "cl", "hr", "cr"}) {
        store.create(n, rand_tensor({d}, rng));
    }
    const auto report = gradcheck::check_store(store, [&](Graph& g) {
        Graph::BinaryTreeVars p;
        p.wi = g.param("wi");
        p.wf = g.param("wf");
        p.wo = g.param("wo");
        p.wu = g.param("wu");
        p.uil = g.param("uil");
        p.uir = g.param("uir");
        p.ufll = g.param("ufll");
        p.uflr = g.param("uflr");
        p.ufrl = g.param("ufrl");
        p.ufrr = g.param("ufrr");
        p.uol = g.param("uol");
        p.uor = g.param("uor");
        p.uul = g.param("uul");
        p.uur = g.param("uur");
        p.bi = g.param("bi");
        p.bf = g.param("bf");
        p.bo = g.param("bo");
        p.bu = g.param("bu");
        Graph::HC l{g.param("hl"), g.param("cl")};
        Graph::HC r{g.param("hr"), g.param("cr")};
        const auto hc = g.binary_treelstm(l, r, g.param("x"), p, d);
        Rng local(47);
        return project(g, g.concat({hc.h, hc.c}), local);
    });
    CHECK(report.max_err < 1e-4);
}

// ---------------------------------------------------------------------------
// RMSprop
// ---------------------------------------------------------------------------

TEST_CASE("rmsprop: zero gradient leaves theta, decays s") {
    ParamStore store;
    store.create("p", Tensor::vector({1.5, -2.0}));
    store.entry("p").rms.data = {0.4, 0.9};
    std::map<std::string, Tensor> grads{{"p", Tensor::vector({0.0, 0.0})}};
    nn::rmsprop_step(store, grads);
    CHECK(store.value("p").data == std::vector<double>{1.5, -2.0});
    CHECK(store.entry("p").rms.data[0] == doctest::Approx(0.36).epsilon(1e-12));
    CHECK(store.entry("p").rms.data[1] == doctest::Approx(0.81).epsilon(1e-12));
    CHECK(store.step() == 1);
}

TEST_CASE("rmsprop: fresh accumulator, unit gradient") {
    ParamStore store;
    store.create("p", Tensor::vector({0.0}));
    std::map<std::string, Tensor> grads{{"p", Tensor::vector({1.0})}};
    nn::rmsprop_step(store, grads);
    CHECK(store.entry("p").rms.at(0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(store.value("p").at(0) ==
          doctest::Approx(-0.001 / std::sqrt(0.1 + 1e-7)).epsilon(1e-12));
    CHECK(store.value("p").at(0) == doctest::Approx(-0.0031623).epsilon(1e-4));
}

TEST_CASE("rmsprop: repeated identical steps shrink the update") {
    ParamStore store;
    store.create("p", Tensor::vector({0.0}));
    std::map<std::string, Tensor> grads{{"p", Tensor::vector({1.0})}};
    nn::rmsprop_step(store, grads);
    const double step1 = std::fabs(store.value("p").at(0));
    const double before = store.value("p").at(0);
    nn::rmsprop_step(store, grads);
    const double step2 = std::fabs(store.value("p").at(0) - before);
    CHECK(step2 < step1);
}

TEST_CASE("rmsprop: update magnitude bounded by eta/sqrt(eps)") {
    ParamStore store;
    store.create("p", Tensor::vector({0.0}));
    std::map<std::string, Tensor> grads{{"p", Tensor::vector({1e-9})}};
    nn::rmsprop_step(store, grads);
    CHECK(std::fabs(store.value("p").at(0)) <= nn::rmsprop_step_bound({}) + 1e-18);
}

TEST_CASE("rmsprop: shape mismatch") {
    ParamStore store;
    store.create("p", Tensor::vector({0.0, 1.0}));
    std::map<std::string, Tensor> grads{{"p", Tensor::vector({1.0})}};
    CHECK_THROWS_AS(nn::rmsprop_step(store, grads), ShapeMismatch);
}
