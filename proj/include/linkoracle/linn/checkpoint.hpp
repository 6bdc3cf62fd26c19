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

#include <string>

#include "linkoracle/linn/model.hpp"

namespace linkoracle::linn {

// Versioned binary container: magic + JSON header (instantiation, hyperparameters, vocab
// hash, step count, parameter manifest) followed by little-endian 64-bit floats for each
// parameter tensor and its RMSprop accumulator, in manifest order.
void save_checkpoint(const LinnModel& model, const std::string& path);

// Rebuilds the spec from the header and verifies the parameter manifest; throws
// VocabularyMismatch if the stored vocabulary hash differs from this build's.
LinnModel load_checkpoint(const std::string& path);

} // namespace linkoracle::linn
