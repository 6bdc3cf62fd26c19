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
#include <memory>
#include <vector>

namespace linkoracle::tde {

// Algebraic type of an encodable value: reals, finite categoricals, the unit type of the
// undefined value ω, lists, sets, products and sums.
struct TypeDescriptor {
    enum class Kind { real, categorical, unit_omega, list, set, prod, sum };

    Kind kind = Kind::real;
    std::size_t cardinality = 0; // categorical only
    std::vector<TypeDescriptor> children;

    static TypeDescriptor real() { return {Kind::real, 0, {}}; }
    static TypeDescriptor categorical(std::size_t k) { return {Kind::categorical, k, {}}; }
    static TypeDescriptor unit_omega() { return {Kind::unit_omega, 0, {}}; }
    static TypeDescriptor list(TypeDescriptor elem) {
        return {Kind::list, 0, {std::move(elem)}};
    }
    static TypeDescriptor set(TypeDescriptor elem) { return {Kind::set, 0, {std::move(elem)}}; }
    static TypeDescriptor prod(TypeDescriptor l, TypeDescriptor r) {
        return {Kind::prod, 0, {std::move(l), std::move(r)}};
    }
    static TypeDescriptor sum(TypeDescriptor l, TypeDescriptor r) {
        return {Kind::sum, 0, {std::move(l), std::move(r)}};
    }

    std::size_t depth() const {
        std::size_t d = 0;
        for (const auto& c : children) {
            d = std::max(d, c.depth());
        }
        return d + 1;
    }

    bool operator==(const TypeDescriptor&) const = default;
};

// (L(Σ) + Ω) × S(L(Σ)) — action-or-null paired with a set of category strings.
TypeDescriptor intent_type();
// S(L(Σ)) × S(L(Σ))
TypeDescriptor filter_type();

} // namespace linkoracle::tde
