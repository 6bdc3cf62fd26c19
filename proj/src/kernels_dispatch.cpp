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

#include "linkoracle/errors.hpp"
#include "linkoracle/kernels/kernels.hpp"

namespace linkoracle::kernels {

namespace {

struct Table {
    void (*axpy)(double*, double, const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    void (*mul_accum)(double*, const double*, const double*, std::size_t);
    void (*rmsprop_update)(double*, double*, const double*, std::size_t, double, double, double);
};

constexpr Table kScalar{scalar::axpy, scalar::dot, scalar::mul_accum, scalar::rmsprop_update};
constexpr Table kAvx2{avx2::axpy, avx2::dot, avx2::mul_accum, avx2::rmsprop_update};

Backend pick_default() {
    if (avx2::compiled_with_avx2() && cpu_supports_avx2()) {
        return Backend::avx2;
    }
    return Backend::scalar;
}

Backend g_backend = pick_default();
const Table* g_table = g_backend == Backend::avx2 ? &kAvx2 : &kScalar;

} // namespace

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Backend active_backend() { return g_backend; }

std::string backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void force_backend(Backend b) {
    if (b == Backend::avx2 && !(avx2::compiled_with_avx2() && cpu_supports_avx2())) {
        throw Error("avx2 backend not available on this CPU/build");
    }
    g_backend = b;
    g_table = b == Backend::avx2 ? &kAvx2 : &kScalar;
}

void axpy(double* y, double a, const double* x, std::size_t n) { g_table->axpy(y, a, x, n); }

double dot(const double* a, const double* b, std::size_t n) { return g_table->dot(a, b, n); }

void mul_accum(double* y, const double* a, const double* b, std::size_t n) {
    g_table->mul_accum(y, a, b, n);
}

void rmsprop_update(double* theta, double* s, const double* g, std::size_t n, double eta,
                    double rho, double eps) {
    g_table->rmsprop_update(theta, s, g, n, eta, rho, eps);
}

} // namespace linkoracle::kernels
