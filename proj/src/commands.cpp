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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "linkoracle/cli/commands.hpp"
#include "linkoracle/corpus/dataset.hpp"
#include "linkoracle/corpus/vocab.hpp"
#include "linkoracle/errors.hpp"
#include "linkoracle/interpret/interpret.hpp"
#include "linkoracle/linn/checkpoint.hpp"
#include "linkoracle/linn/metrics.hpp"
#include "linkoracle/linn/model.hpp"

namespace linkoracle::cli {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using ordered_json = nlohmann::ordered_json;

namespace {

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const ordered_json& config, std::uint64_t seed,
                    const std::vector<std::string>& artifacts, const ordered_json& timings) {
    ordered_json m;
    m["command"] = command;
    m["config"] = config;
    m["seed"] = seed;
    m["artifacts"] = artifacts;
    m["timings_ms"] = timings;
    m["library_version"] = kVersion;
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    if (!out) {
        throw Error("cannot write manifest in " + out_dir.string());
    }
    out << m.dump(2) << '\n';
}

fs::path resolve_model_path(const std::string& arg) {
    fs::path p(arg);
    if (fs::is_directory(p)) {
        return p / "model.bin";
    }
    return p;
}

std::vector<corpus::LabeledLink> load_split(const std::string& data_dir, const char* split) {
    return corpus::load_jsonl((fs::path(data_dir) / (std::string(split) + ".jsonl")).string());
}

struct DatasetArgs {
    std::uint64_t seed = 1;
    std::size_t train = 2000, test = 500;
    std::string out;
    corpus::GeneratorConfig gen;
    corpus::ImprecisionConfig imp;
    std::string config_file;
    double imp_full = -1.0, imp_partial = -1.0;
};

int cmd_dataset(DatasetArgs& a) {
    if (!a.config_file.empty()) {
        corpus::apply_config_file(a.config_file, a.gen, a.imp);
    }
    if (a.imp_full >= 0.0) {
        a.imp.full_action = a.imp.full_intent_cat = a.imp.full_filter_action =
            a.imp.full_filter_cat = a.imp_full;
    }
    if (a.imp_partial >= 0.0) {
        a.imp.partial_action = a.imp.partial_intent_cat = a.imp.partial_filter_action =
            a.imp.partial_filter_cat = a.imp_partial;
    }
    a.gen.seed = a.seed;

    const auto t0 = Clock::now();
    fs::create_directories(a.out);
    const auto corpus_values = corpus::generate_corpus(a.gen);
    corpus::SampleConfig sample;
    sample.train_size = a.train;
    sample.test_size = a.test;
    const auto ds = corpus::build_dataset(corpus_values, a.imp, sample, a.seed);
    const double gen_ms = ms_since(t0);

    const auto t1 = Clock::now();
    corpus::save_jsonl(ds.train, (fs::path(a.out) / "train.jsonl").string());
    corpus::save_jsonl(ds.test, (fs::path(a.out) / "test.jsonl").string());

    ordered_json config{
        {"train", a.train},
        {"test", a.test},
        {"intent_count", a.gen.intent_count},
        {"filter_count", a.gen.filter_count},
        {"action_pool", a.gen.action_pool},
        {"imp", {{"full_action", a.imp.full_action},
                 {"partial_action", a.imp.partial_action},
                 {"full_intent_cat", a.imp.full_intent_cat},
                 {"partial_intent_cat", a.imp.partial_intent_cat},
                 {"full_filter_action", a.imp.full_filter_action},
                 {"partial_filter_action", a.imp.partial_filter_action},
                 {"full_filter_cat", a.imp.full_filter_cat},
                 {"partial_filter_cat", a.imp.partial_filter_cat},
                 {"hole_min", a.imp.hole_min},
                 {"hole_max", a.imp.hole_max}}},
    };
    write_manifest(a.out, "dataset", config, a.seed, {"train.jsonl", "test.jsonl"},
                   {{"build", gen_ms}, {"write", ms_since(t1)}});
    std::cout << "dataset: " << ds.train.size() << " train / " << ds.test.size()
              << " test links -> " << a.out << "\n";
    return 0;
}

struct TrainArgs {
    std::string inst;
    std::size_t epochs = 10, batch = 32;
    std::uint64_t seed = 1;
    std::string data, out;
};

int cmd_train(const TrainArgs& a) {
    const auto inst = tde::parse_instantiation(a.inst);
    if (!inst) {
        throw Error("unknown instantiation: " + a.inst);
    }
    const auto links = load_split(a.data, "train");

    const auto t0 = Clock::now();
    auto model = linn::build_model(*inst, a.seed);
    linn::TrainConfig cfg;
    cfg.epochs = a.epochs;
    cfg.batch = a.batch;
    cfg.seed = a.seed;
    const auto history = linn::train(model, links, cfg);
    const double train_ms = ms_since(t0);

    fs::create_directories(a.out);
    linn::save_checkpoint(model, (fs::path(a.out) / "model.bin").string());
    {
        std::ofstream hist(fs::path(a.out) / "history.csv", std::ios::binary);
        hist << "epoch,mean_loss\n";
        char buf[40];
        for (std::size_t e = 0; e < history.size(); ++e) {
            std::snprintf(buf, sizeof buf, "%.17g", history[e]);
            hist << e + 1 << ',' << buf << '\n';
        }
    }
    ordered_json config{{"inst", a.inst}, {"epochs", a.epochs}, {"batch", a.batch},
                        {"data", a.data}};
    write_manifest(a.out, "train", config, a.seed, {"model.bin", "history.csv"},
                   {{"train", train_ms}});
    std::cout << "train: " << links.size() << " links, " << a.epochs
              << " epochs; final loss " << history.back() << " -> " << a.out << "\n";
    return 0;
}

struct EvalArgs {
    std::string model, data, out;
};

int cmd_eval(const EvalArgs& a) {
    const auto model = linn::load_checkpoint(resolve_model_path(a.model).string());
    const auto test = load_split(a.data, "test");

    const auto t0 = Clock::now();
    const auto metrics = linn::evaluate(model, test);
    const double eval_ms = ms_since(t0);
    const double us_per_link = test.empty() ? 0.0 : eval_ms * 1000.0 / test.size();

    const std::string table = linn::metrics_table(
        tde::instantiation_name(model.spec.inst), linn::param_count(model.spec), metrics,
        us_per_link);
    const std::string json_text = linn::metrics_to_json(metrics);
    std::cout << table;
    if (!a.out.empty()) {
        fs::create_directories(a.out);
        std::ofstream(fs::path(a.out) / "metrics.json", std::ios::binary) << json_text << '\n';
        std::ofstream(fs::path(a.out) / "metrics.txt", std::ios::binary) << table;
        write_manifest(a.out, "eval",
                       ordered_json{{"model", a.model}, {"data", a.data}}, 0,
                       {"metrics.json", "metrics.txt"}, {{"eval", eval_ms}});
    }
    return 0;
}

struct ExplainArgs {
    std::string model, data, out;
    std::size_t mask_len = 5, count = 1, index = 0;
};

int cmd_explain(const ExplainArgs& a) {
    const auto model = linn::load_checkpoint(resolve_model_path(a.model).string());
    const auto test = load_split(a.data, "test");
    if (a.index >= test.size()) {
        throw Error("link index out of range");
    }
    const std::size_t end = std::min(test.size(), a.index + std::max<std::size_t>(a.count, 1));

    ordered_json report = ordered_json::array();
    for (std::size_t i = a.index; i < end; ++i) {
        const auto e = interpret::explain_by_masking(model, test[i], a.mask_len);
        ordered_json je;
        je["link_index"] = i;
        je["intent"] = e.intent_rendering;
        je["filter"] = corpus::render_flat(test[i].filter);
        je["mask_len"] = e.mask_len;
        je["p_orig"] = e.p_orig;
        ordered_json deltas = ordered_json::array();
        for (const auto& [pos, delta] : e.deltas) {
            deltas.push_back({pos, delta});
        }
        je["deltas"] = std::move(deltas);
        report.push_back(std::move(je));

        std::cout << "link " << i << " p=" << e.p_orig << "\n  "
                  << interpret::ansi_preview(e, corpus::render_as_tokens(test[i].intent))
                  << "\n";
    }
    if (!a.out.empty()) {
        fs::create_directories(a.out);
        std::ofstream(fs::path(a.out) / "explanations.json", std::ios::binary)
            << report.dump(2) << '\n';
        write_manifest(a.out, "explain",
                       ordered_json{{"model", a.model}, {"data", a.data},
                                    {"mask_len", a.mask_len}},
                       0, {"explanations.json"}, ordered_json::object());
    }
    return 0;
}

struct ActivationsArgs {
    std::string model, data, out;
    std::size_t top = 3;
};

int cmd_activations(const ActivationsArgs& a) {
    const auto model = linn::load_checkpoint(resolve_model_path(a.model).string());
    const auto test = load_split(a.data, "test");
    std::vector<icc::AbstractIntent> intents;
    intents.reserve(test.size());
    for (const auto& link : test) {
        intents.push_back(link.intent);
    }
    const auto report = interpret::top_kernel_activations(model, intents, a.top);

    ordered_json j = ordered_json::array();
    for (const auto& kernel : report) {
        if (kernel.empty()) {
            continue;
        }
        ordered_json jk;
        jk["kernel"] = "conv1d_size" + std::to_string(kernel[0].kernel_size) + ":" +
                       std::to_string(kernel[0].kernel_index);
        ordered_json stimuli = ordered_json::array();
        for (const auto& s : kernel) {
            stimuli.push_back({{"segment", s.segment}, {"activation", s.activation}});
        }
        jk["top"] = std::move(stimuli);
        j.push_back(std::move(jk));
    }
    if (!a.out.empty()) {
        fs::create_directories(a.out);
        std::ofstream(fs::path(a.out) / "activations.json", std::ios::binary)
            << j.dump(2) << '\n';
        write_manifest(a.out, "activations",
                       ordered_json{{"model", a.model}, {"data", a.data}, {"top", a.top}}, 0,
                       {"activations.json"}, ordered_json::object());
    } else {
        std::cout << j.dump(2) << '\n';
    }
    return 0;
}

struct ExportArgs {
    std::string model, data, kind = "intents", out;
};

int cmd_export(const ExportArgs& a) {
    const auto model = linn::load_checkpoint(resolve_model_path(a.model).string());
    const auto test = load_split(a.data, "test");
    std::vector<icc::AbstractIntent> intents;
    intents.reserve(test.size());
    for (const auto& link : test) {
        intents.push_back(link.intent);
    }
    const auto rows = interpret::export_encodings(model, intents);
    std::ofstream out(a.out, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + a.out);
    }
    interpret::write_encodings_csv(rows, out);
    std::cout << "export: " << rows.size() << " distinct intents -> " << a.out << "\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"linkoracle: tri-valued ICC matching with a trained link-inference model"};
    app.require_subcommand(1);

    DatasetArgs da;
    auto* dataset = app.add_subcommand("dataset", "generate a labeled synthetic dataset");
    dataset->add_option("--seed", da.seed);
    dataset->add_option("--train", da.train);
    dataset->add_option("--test", da.test);
    dataset->add_option("--out", da.out)->required();
    dataset->add_option("--intents", da.gen.intent_count);
    dataset->add_option("--filters", da.gen.filter_count);
    dataset->add_option("--action-pool", da.gen.action_pool);
    dataset->add_option("--imp-full", da.imp_full);
    dataset->add_option("--imp-partial", da.imp_partial);
    dataset->add_option("--config", da.config_file);

    TrainArgs ta;
    auto* train = app.add_subcommand("train", "train a link-inference model");
    train->add_option("--inst", ta.inst)
        ->required()
        ->check(CLI::IsMember({"str-rnn", "str-cnn", "typed-simple", "typed-tree"}));
    train->add_option("--epochs", ta.epochs);
    train->add_option("--batch", ta.batch);
    train->add_option("--seed", ta.seed);
    train->add_option("--data", ta.data)->required();
    train->add_option("--out", ta.out)->required();

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "evaluate a model on may links");
    eval->add_option("--model", ea.model)->required();
    eval->add_option("--data", ea.data)->required();
    eval->add_option("--out", ea.out);

    ExplainArgs xa;
    auto* explain = app.add_subcommand("explain", "masking explanation for test links");
    explain->add_option("--model", xa.model)->required();
    explain->add_option("--data", xa.data)->required();
    explain->add_option("--mask-len", xa.mask_len);
    explain->add_option("--count", xa.count);
    explain->add_option("--index", xa.index);
    explain->add_option("--out", xa.out);

    ActivationsArgs aa;
    auto* activations = app.add_subcommand("activations", "top stimuli per CNN kernel");
    activations->add_option("--model", aa.model)->required();
    activations->add_option("--data", aa.data)->required();
    activations->add_option("--top", aa.top);
    activations->add_option("--out", aa.out);

    ExportArgs pa;
    auto* exp = app.add_subcommand("export", "export encodings for external projection");
    exp->add_option("--model", pa.model)->required();
    exp->add_option("--data", pa.data)->required();
    exp->add_option("--kind", pa.kind)->check(CLI::IsMember({"intents"}));
    exp->add_option("--out", pa.out)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (dataset->parsed()) return cmd_dataset(da);
        if (train->parsed()) return cmd_train(ta);
        if (eval->parsed()) return cmd_eval(ea);
        if (explain->parsed()) return cmd_explain(xa);
        if (activations->parsed()) return cmd_activations(aa);
        if (exp->parsed()) return cmd_export(pa);
    } catch (const VocabularyMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CheckpointError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args);
}

} // namespace linkoracle::cli
