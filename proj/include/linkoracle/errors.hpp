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

#include <stdexcept>
#include <string>

namespace linkoracle {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidCharacter : Error {
    std::size_t byte_offset;
    InvalidCharacter(const std::string& what, std::size_t offset)
        : Error(what + " at byte " + std::to_string(offset)), byte_offset(offset) {}
};

struct BudgetExceeded : Error {
    using Error::Error;
};

struct ShapeMismatch : Error {
    using Error::Error;
};

struct IdOutOfRange : Error {
    using Error::Error;
};

struct InputTooShort : Error {
    using Error::Error;
};

struct NonFiniteGradient : Error {
    using Error::Error;
};

struct UnsupportedType : Error {
    using Error::Error;
};

struct UnsupportedInstantiation : Error {
    using Error::Error;
};

struct VocabularyMismatch : Error {
    using Error::Error;
};

struct ParseError : Error {
    std::size_t line_number;
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_number(line) {}
};

struct InsufficientMayLinks : Error {
    using Error::Error;
};

struct InsufficientMustLinks : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct SingleClass : Error {
    using Error::Error;
};

struct AllTied : Error {
    using Error::Error;
};

struct CheckpointError : Error {
    using Error::Error;
};

} // namespace linkoracle
