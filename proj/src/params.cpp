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

#include <cmath>

#include "linkoracle/kernels/kernels.hpp"
#include "linkoracle/nn/params.hpp"

namespace linkoracle::nn {

void rmsprop_step(ParamStore& store, const std::map<std::string, Tensor>& grads,
                  const RmspropConfig& cfg) {
    for (const auto& [name, g] : grads) {
        auto& e = store.entry(name);
        if (!e.value.same_shape(g)) {
            throw ShapeMismatch("rmsprop: gradient shape mismatch for " + name);
        }
        kernels::rmsprop_update(e.value.data.data(), e.rms.data.data(), g.data.data(),
                                g.numel(), cfg.eta, cfg.rho, cfg.eps);
    }
    store.set_step(store.step() + 1);
}

void fill_glorot(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : t.data) {
        v = rng.uniform(-limit, limit);
    }
}

void fill_embedding(Tensor& t, Rng& rng) {
    for (double& v : t.data) {
        v = rng.uniform(-0.05, 0.05);
    }
}

} // namespace linkoracle::nn
