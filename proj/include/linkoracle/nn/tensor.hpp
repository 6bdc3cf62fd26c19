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

#include <cstddef>
#include <vector>

#include "linkoracle/errors.hpp"

namespace linkoracle::nn {

// Dense row-major tensor of 64-bit floats. Rank 1 or 2 is all this library needs.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;

    static Tensor zeros(std::vector<std::size_t> s) {
        Tensor t;
        std::size_t n = 1;
        for (auto d : s) {
            n *= d;
        }
        t.shape = std::move(s);
        t.data.assign(n, 0.0);
        return t;
    }

    static Tensor vector(std::vector<double> values) {
        Tensor t;
        t.shape = {values.size()};
        t.data = std::move(values);
        return t;
    }

    static Tensor scalar(double v) {
        Tensor t;
        t.shape = {1};
        t.data = {v};
        return t;
    }

    std::size_t numel() const { return data.size(); }

    std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
    std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

    double& at(std::size_t i) { return data[i]; }
    double at(std::size_t i) const { return data[i]; }
    double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

    double* row_ptr(std::size_t r) { return data.data() + r * cols(); }
    const double* row_ptr(std::size_t r) const { return data.data() + r * cols(); }

    bool same_shape(const Tensor& other) const { return shape == other.shape; }

    bool operator==(const Tensor&) const = default;
};

inline void require_shape(const Tensor& t, std::size_t n, const char* what) {
    if (t.numel() != n) {
        throw ShapeMismatch(std::string(what) + ": expected " + std::to_string(n) +
                            " elements, got " + std::to_string(t.numel()));
    }
}

} // namespace linkoracle::nn
