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
#include <string>

// Data-parallel inner loops of the differentiable kernels. Every entry point has a scalar
// reference implementation and an AVX2 variant selected once at startup; the two are
// bit-identical by construction:
//   - axpy/mul_accum/rmsprop_update touch each output element independently, so lane order
//     does not matter;
//   - dot uses a fixed 4-accumulator association in *both* backends (lane k sums elements
//     i ≡ k mod 4, combined as (acc0+acc2)+(acc1+acc3), tail added last in order).
// The whole library is compiled with -ffp-contract=off so neither backend fuses mul+add.
namespace linkoracle::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
std::string backend_name(Backend b);
bool cpu_supports_avx2();

// Force a backend (tests / benchmarking). Throws Error if unsupported on this CPU.
void force_backend(Backend b);

// y[i] += a * x[i]
void axpy(double* y, double a, const double* x, std::size_t n);

// (a0+a2)+(a1+a3) lane-ordered dot product, see above.
double dot(const double* a, const double* b, std::size_t n);

// y[i] += a[i] * b[i]
void mul_accum(double* y, const double* a, const double* b, std::size_t n);

// s = rho*s + (1-rho)*g*g;  theta -= eta * g / sqrt(s + eps)
void rmsprop_update(double* theta, double* s, const double* g, std::size_t n, double eta,
                    double rho, double eps);

namespace scalar {
void axpy(double* y, double a, const double* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void mul_accum(double* y, const double* a, const double* b, std::size_t n);
void rmsprop_update(double* theta, double* s, const double* g, std::size_t n, double eta,
                    double rho, double eps);
} // namespace scalar

namespace avx2 {
// True when this translation unit was actually built with AVX2 enabled.
bool compiled_with_avx2();
void axpy(double* y, double a, const double* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void mul_accum(double* y, const double* a, const double* b, std::size_t n);
void rmsprop_update(double* theta, double* s, const double* g, std::size_t n, double eta,
                    double rho, double eps);
} // namespace avx2

} // namespace linkoracle::kernels
