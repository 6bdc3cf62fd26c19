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

#include "linkoracle/corpus/vocab.hpp"
#include "linkoracle/tde/type.hpp"

namespace linkoracle::tde {

TypeDescriptor intent_type() {
    auto str = TypeDescriptor::list(TypeDescriptor::categorical(corpus::kVocabSize));
    return TypeDescriptor::prod(TypeDescriptor::sum(str, TypeDescriptor::unit_omega()),
                                TypeDescriptor::set(str));
}

TypeDescriptor filter_type() {
    auto str = TypeDescriptor::list(TypeDescriptor::categorical(corpus::kVocabSize));
    return TypeDescriptor::prod(TypeDescriptor::set(str), TypeDescriptor::set(str));
}

} // namespace linkoracle::tde
