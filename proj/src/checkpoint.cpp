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

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "linkoracle/corpus/vocab.hpp"
#include "linkoracle/linn/checkpoint.hpp"

namespace linkoracle::linn {

namespace {

constexpr char kMagic[4] = {'L', 'N', 'C', 'P'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char buf[4];
    for (int i = 0; i < 4; ++i) {
        buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    }
    out.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
    }
    return v;
}

void write_doubles(std::ostream& out, const std::vector<double>& v) {
    // Little-endian hosts only (x86-64 / aarch64); stored format is defined LE.
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_doubles(std::istream& in, std::vector<double>& v) {
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

nlohmann::json hyper_to_json(const tde::Hyperparams& h) {
    return {
        {"embed_dim", h.embed_dim},   {"kernel_sizes", h.kernel_sizes},
        {"kernel_counts", h.kernel_counts}, {"lstm_hidden", h.lstm_hidden},
        {"comb_dense_dim", h.comb_dense_dim}, {"mlp_dims", h.mlp_dims},
        {"max_len", h.max_len},
    };
}

tde::Hyperparams hyper_from_json(const nlohmann::json& j) {
    tde::Hyperparams h;
    h.embed_dim = j.at("embed_dim").get<std::size_t>();
    h.kernel_sizes = j.at("kernel_sizes").get<std::vector<std::size_t>>();
    h.kernel_counts = j.at("kernel_counts").get<std::vector<std::size_t>>();
    h.lstm_hidden = j.at("lstm_hidden").get<std::size_t>();
    h.comb_dense_dim = j.at("comb_dense_dim").get<std::size_t>();
    h.mlp_dims = j.at("mlp_dims").get<std::vector<std::size_t>>();
    h.max_len = j.at("max_len").get<std::size_t>();
    return h;
}

} // namespace

void save_checkpoint(const LinnModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw CheckpointError("cannot write " + path);
    }
    nlohmann::json header;
    header["instantiation"] = tde::instantiation_name(model.spec.inst);
    header["hyper"] = hyper_to_json(model.spec.hyper);
    header["vocab_hash"] = model.vocab_hash;
    header["step"] = model.store.step();
    nlohmann::json manifest = nlohmann::json::array();
    for (const auto& def : model.spec.registry.defs()) {
        manifest.push_back({{"name", def.name}, {"shape", def.shape}});
    }
    header["params"] = std::move(manifest);
    const std::string htext = header.dump();

    out.write(kMagic, 4);
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(htext.size()));
    out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
    for (const auto& def : model.spec.registry.defs()) {
        const auto& e = model.store.entry(def.name);
        write_doubles(out, e.value.data);
        write_doubles(out, e.rms.data);
    }
    if (!out) {
        throw CheckpointError("write failed for " + path);
    }
}

LinnModel load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CheckpointError("cannot read " + path);
    }
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw CheckpointError("bad checkpoint magic in " + path);
    }
    const std::uint32_t version = read_u32(in);
    if (version != kVersion) {
        throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
    }
    const std::uint32_t hlen = read_u32(in);
    std::string htext(hlen, '\0');
    in.read(htext.data(), hlen);
    if (!in) {
        throw CheckpointError("truncated checkpoint header");
    }
    nlohmann::json header = nlohmann::json::parse(htext);

    const auto inst = tde::parse_instantiation(header.at("instantiation").get<std::string>());
    if (!inst) {
        throw CheckpointError("unknown instantiation in checkpoint");
    }
    LinnModel model;
    model.spec = make_model_spec(*inst, hyper_from_json(header.at("hyper")));
    model.vocab_hash = header.at("vocab_hash").get<std::uint64_t>();
    if (model.vocab_hash != corpus::vocabulary_hash()) {
        throw VocabularyMismatch("checkpoint vocabulary hash does not match this build");
    }

    const auto& manifest = header.at("params");
    const auto& defs = model.spec.registry.defs();
    if (manifest.size() != defs.size()) {
        throw CheckpointError("parameter manifest size mismatch");
    }
    for (std::size_t i = 0; i < defs.size(); ++i) {
        if (manifest[i].at("name").get<std::string>() != defs[i].name ||
            manifest[i].at("shape").get<std::vector<std::size_t>>() != defs[i].shape) {
            throw CheckpointError("parameter manifest mismatch at " + defs[i].name);
        }
    }
    for (const auto& def : defs) {
        nn::Tensor value = nn::Tensor::zeros(def.shape);
        nn::Tensor rms = nn::Tensor::zeros(def.shape);
        read_doubles(in, value.data);
        read_doubles(in, rms.data);
        model.store.create(def.name, std::move(value));
        model.store.entry(def.name).rms = std::move(rms);
    }
    if (!in) {
        throw CheckpointError("truncated checkpoint tensor data");
    }
    model.store.set_step(header.at("step").get<std::uint64_t>());
    return model;
}

} // namespace linkoracle::linn
