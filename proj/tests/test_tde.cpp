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

#include "gradcheck.hpp"
#include "linkoracle/corpus/vocab.hpp"
#include "linkoracle/errors.hpp"
#include "linkoracle/linn/model.hpp"
#include "linkoracle/tde/encoder.hpp"
#include "linkoracle/tde/type.hpp"

using namespace linkoracle;
using icc::PatternString;
using tde::EncodeValue;
using tde::EncoderSpec;
using tde::Instantiation;

namespace {

icc::AbstractIntent mk_intent(const char* act, std::vector<std::string> cats) {
    std::optional<PatternString> a;
    if (act) {
        a = PatternString::parse(act);
    }
    std::vector<PatternString> cs;
    for (const auto& c : cats) {
        cs.push_back(PatternString::parse(c));
    }
    return icc::AbstractIntent::make(std::move(a), std::move(cs));
}

} // namespace

TEST_CASE("intent/filter types have the documented structure") {
    const auto it = tde::intent_type();
    REQUIRE(it.kind == tde::TypeDescriptor::Kind::prod);
    CHECK(it.children[0].kind == tde::TypeDescriptor::Kind::sum);
    CHECK(it.children[0].children[0].kind == tde::TypeDescriptor::Kind::list);
    CHECK(it.children[0].children[1].kind == tde::TypeDescriptor::Kind::unit_omega);
    CHECK(it.children[1].kind == tde::TypeDescriptor::Kind::set);
    // Prod -> Sum -> List path gives depth 3 (leaf categorical adds one more level).
    CHECK(it.children[0].children[0].depth() == 2);
    CHECK(it.depth() == 4);

    const auto ft = tde::filter_type();
    REQUIRE(ft.kind == tde::TypeDescriptor::Kind::prod);
    CHECK(ft.children[0].kind == tde::TypeDescriptor::Kind::set);
    CHECK(ft.children[1].kind == tde::TypeDescriptor::Kind::set);
    CHECK(ft.children[0].children[0].children[0].cardinality == corpus::kVocabSize);
}

TEST_CASE("build_encoder: dimensions per instantiation") {
    const auto str_type =
        tde::TypeDescriptor::list(tde::TypeDescriptor::categorical(corpus::kVocabSize));
    tde::Hyperparams hyper;

    tde::ParamRegistry r1;
    CHECK(tde::build_encoder(str_type, Instantiation::str_cnn, hyper, "intent", r1).dim == 120);
    tde::ParamRegistry r2;
    CHECK(tde::build_encoder(str_type, Instantiation::str_rnn, hyper, "intent", r2).dim == 128);

    tde::ParamRegistry r3;
    const auto typed_tree =
        tde::build_encoder(tde::intent_type(), Instantiation::typed_tree, hyper, "intent", r3);
    CHECK(typed_tree.dim == 120);
    // Every internal node of the typed-tree encoder carries the string dimension.
    CHECK(typed_tree.children[0].dim == 120);
    CHECK(typed_tree.children[1].dim == 120);

    tde::ParamRegistry r4;
    const auto typed_simple =
        tde::build_encoder(tde::intent_type(), Instantiation::typed_simple, hyper, "intent", r4);
    CHECK(typed_simple.dim == 64);

    tde::ParamRegistry r5;
    CHECK_THROWS_AS(
        tde::build_encoder(tde::intent_type(), Instantiation::str_cnn, hyper, "intent", r5),
        UnsupportedType);
}

TEST_CASE("encode: singleton set equals its element encoding under sum aggregation") {
    auto model = linn::build_model(Instantiation::typed_simple, 7);
    const auto& spec = model.spec.intent_enc;
    const auto& set_spec = spec.children[1]; // cats
    REQUIRE(set_spec.kind == EncoderSpec::Kind::set_sum);

    const auto toks = corpus::pattern_tokens(PatternString::parse("default"));
    nn::Graph g(&model.store);
    const auto single = tde::encode(
        g, set_spec, EncodeValue::set({EncodeValue::from_tokens(toks)}), model.spec.hyper);
    const auto elem =
        tde::encode(g, set_spec.children[0], EncodeValue::from_tokens(toks), model.spec.hyper);
    CHECK(g.value(single).data == g.value(elem).data);
}

TEST_CASE("encode: empty set gives the zero vector under sum aggregation") {
    auto model = linn::build_model(Instantiation::typed_simple, 7);
    nn::Graph g(&model.store);
    const auto out =
        tde::encode(g, model.spec.intent_enc.children[1], EncodeValue::set({}), model.spec.hyper);
    for (double v : g.value(out).data) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("encode: set permutation invariance is exact for both typed instantiations") {
    for (auto inst : {Instantiation::typed_simple, Instantiation::typed_tree}) {
        auto model = linn::build_model(inst, 11);
        for (int t = 0; t < 50; ++t) {
            // Same set, handed over in two different orders: the canonical AbstractIntent
            // makes the encodings bit-identical.
            const auto a = mk_intent("x", {"aa", "bb", "cc"});
            const auto b = mk_intent("x", {"cc", "aa", "bb"});
            nn::Graph g(&model.store);
            const auto ea = tde::encode(g, model.spec.intent_enc,
                                        tde::typed_value(a, 128), model.spec.hyper);
            const auto eb = tde::encode(g, model.spec.intent_enc,
                                        tde::typed_value(b, 128), model.spec.hyper);
            CHECK(g.value(ea).data == g.value(eb).data);
        }
    }
}

TEST_CASE("encode: omega branch uses the trained vector and isolates gradients") {
    auto model = linn::build_model(Instantiation::typed_tree, 13);
    const auto omega_intent = mk_intent(nullptr, {"default"});
    const auto string_intent = mk_intent("view", {"default"});

    // ω dispatch reaches the intent.omega parameter.
    {
        nn::Graph g(&model.store);
        const auto sum_spec = model.spec.intent_enc.children[0];
        REQUIRE(sum_spec.kind == EncoderSpec::Kind::sum_dispatch);
        const auto out = tde::encode(g, sum_spec, EncodeValue::omega(), model.spec.hyper);
        CHECK(g.value(out).data == model.store.value("intent.omega").data);
    }

    // Encoding a string value never touches enumEnc_Ω: its gradient is exactly zero.
    {
        nn::Graph g(&model.store);
        const auto out = tde::encode(g, model.spec.intent_enc,
                                     tde::typed_value(string_intent, 128), model.spec.hyper);
        // Project to scalar with a constant vector of ones.
        nn::Tensor ones = nn::Tensor::zeros({g.value(out).numel(), 1});
        for (auto& v : ones.data) {
            v = 1.0;
        }
        const auto loss = g.dense(out, g.constant(ones), g.constant(nn::Tensor::zeros({1})),
                                  nn::Activation::identity);
        g.backward(loss);
        CHECK_FALSE(g.touched_params().count("intent.omega"));
    }

    // And the ω value does flow gradients into it.
    {
        nn::Graph g(&model.store);
        const auto out = tde::encode(g, model.spec.intent_enc,
                                     tde::typed_value(omega_intent, 128), model.spec.hyper);
        nn::Tensor ones = nn::Tensor::zeros({g.value(out).numel(), 1});
        for (auto& v : ones.data) {
            v = 1.0;
        }
        const auto loss = g.dense(out, g.constant(ones), g.constant(nn::Tensor::zeros({1})),
                                  nn::Activation::identity);
        g.backward(loss);
        REQUIRE(g.touched_params().count("intent.omega"));
        double norm = 0.0;
        for (double v : g.grad(g.touched_params().at("intent.omega")).data) {
            norm += std::fabs(v);
        }
        CHECK(norm > 0.0);
    }
}

TEST_CASE("encode: dimension discipline on every node of every instantiation") {
    for (auto inst : {Instantiation::str_cnn, Instantiation::str_rnn, Instantiation::typed_simple,
                      Instantiation::typed_tree}) {
        auto model = linn::build_model(inst, 17);
        const auto intent = mk_intent("android.intent.action.view", {"default", "browsable"});
        const auto filter = icc::AbstractFilter::make(
            {PatternString::parse("android.intent.action.view")},
            {PatternString::parse("default")});
        // encode() itself checks declared dim == produced length at every node.
        CHECK(linn::forward(model, intent, filter) > 0.0);
        CHECK(linn::forward(model, intent, filter) < 1.0);
    }
}

TEST_CASE("conv geometry: pooling restricted to the unpadded prefix") {
    tde::Hyperparams hyper;
    const auto g1 = tde::conv_geometry(10, hyper);
    CHECK(g1.l_eff == 10);
    CHECK(g1.n_pos(1, 10) == 10);
    CHECK(g1.n_pos(7, 10) == 4);

    const auto g2 = tde::conv_geometry(5, hyper); // shorter than the largest kernel
    CHECK(g2.l_eff == 7);
    CHECK(g2.n_pos(1, 5) == 5); // windows starting in padding are not pooled
    CHECK(g2.n_pos(7, 5) == 1);

    const auto g3 = tde::conv_geometry(0, hyper);
    CHECK(g3.l_eff == 7);
    CHECK(g3.n_pos(1, 0) == 1);
}

TEST_CASE("str encoders ignore PAD beyond the true length") {
    for (auto inst : {Instantiation::str_cnn, Instantiation::str_rnn}) {
        auto model = linn::build_model(inst, 19);
        const auto intent = mk_intent("view", {"default"});
        const auto filter = icc::AbstractFilter::make({PatternString::parse("view")},
                                                      {PatternString::parse("default")});
        const auto padded = corpus::render_as_tokens(intent); // 128 with PAD suffix
        std::vector<int> bare(padded.begin(),
                              padded.begin() + corpus::true_length(padded));
        const auto fto = corpus::render_as_tokens(filter);
        CHECK(linn::forward_str_tokens(model, padded, fto) ==
              linn::forward_str_tokens(model, bare, fto));
    }
}

TEST_CASE("gradcheck: full encoders at reduced size") {
    tde::Hyperparams hyper;
    hyper.embed_dim = 4;
    hyper.kernel_sizes = {1, 3};
    hyper.kernel_counts = {2, 2};
    hyper.lstm_hidden = 3;
    hyper.comb_dense_dim = 4;
    hyper.mlp_dims = {3, 1};
    // A 3-link batch covering both sum branches (string and ω actions) and empty sets,
    // so every parameter of the typed models is exercised.
    const std::vector<corpus::LabeledLink> batch = {
        {mk_intent("ab.cd", {"de", "fg"}),
         icc::AbstractFilter::make(
             {PatternString::parse("ab(.*)"), PatternString::parse("xy")},
             {PatternString::parse("de")}),
         icc::Tri::one, 1},
        {mk_intent(nullptr, {"de"}),
         icc::AbstractFilter::make({PatternString::parse("xy")}, {PatternString::parse("de")}),
         icc::Tri::one, 1},
        {mk_intent("zz", {}),
         icc::AbstractFilter::make({PatternString::parse("(.*)")},
                                   std::vector<PatternString>{}),
         icc::Tri::zero, 0},
    };
    for (auto inst : {Instantiation::str_cnn, Instantiation::str_rnn, Instantiation::typed_simple,
                      Instantiation::typed_tree}) {
        auto model = linn::build_model(inst, 23, hyper);
        const auto report = gradcheck::check_store(model.store, [&](nn::Graph& g) {
            std::vector<nn::Graph::VarId> losses;
            for (const auto& link : batch) {
                const auto p = linn::forward_graph(g, model, link.intent, link.filter);
                losses.push_back(g.cross_entropy_loss(link.truth, p));
            }
            return g.mean_all(losses);
        });
        INFO(tde::instantiation_name(inst), " worst ", report.worst);
        CHECK(report.max_err < 1e-4);
        CHECK(report.checked == linn::param_count(model.spec));
    }
}
