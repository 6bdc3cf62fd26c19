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
#include <map>
#include <string>

#include "linkoracle/nn/tensor.hpp"
#include "linkoracle/rng.hpp"

namespace linkoracle::nn {

// Named parameters with per-parameter RMSprop accumulators and a step count.
class ParamStore {
public:
    struct Entry {
        Tensor value;
        Tensor rms; // same shape, starts at zero
    };

    void create(const std::string& name, Tensor value) {
        Entry e;
        e.rms = Tensor::zeros(value.shape);
        e.value = std::move(value);
        entries_.emplace(name, std::move(e));
    }

    bool has(const std::string& name) const { return entries_.count(name) != 0; }

    Entry& entry(const std::string& name) {
        auto it = entries_.find(name);
        if (it == entries_.end()) {
            throw Error("unknown parameter: " + name);
        }
        return it->second;
    }

    const Entry& entry(const std::string& name) const {
        auto it = entries_.find(name);
        if (it == entries_.end()) {
            throw Error("unknown parameter: " + name);
        }
        return it->second;
    }

    Tensor& value(const std::string& name) { return entry(name).value; }
    const Tensor& value(const std::string& name) const { return entry(name).value; }

    std::map<std::string, Entry>& entries() { return entries_; }
    const std::map<std::string, Entry>& entries() const { return entries_; }

    std::uint64_t step() const { return step_; }
    void set_step(std::uint64_t s) { step_ = s; }

    std::size_t scalar_count() const {
        std::size_t n = 0;
        for (const auto& [name, e] : entries_) {
            n += e.value.numel();
        }
        return n;
    }

private:
    std::map<std::string, Entry> entries_;
    std::uint64_t step_ = 0;
};

struct RmspropConfig {
    double eta = 0.001;
    double rho = 0.9;
    double eps = 1e-7;
};

// s ← ρ·s + (1−ρ)·g²;  θ ← θ − η·g/√(s+ε). Bumps the store's step count once.
void rmsprop_step(ParamStore& store, const std::map<std::string, Tensor>& grads,
                  const RmspropConfig& cfg = {});

// Glorot-uniform fill for a matrix-shaped parameter.
void fill_glorot(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng);
// uniform(-0.05, 0.05), used for embedding tables and the ω vector.
void fill_embedding(Tensor& t, Rng& rng);

} // namespace linkoracle::nn
