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

// Compiled with -mavx2 (and nothing more); no FMA, so every lane performs the exact
// mul-then-add sequence of the scalar reference.

#include "linkoracle/kernels/kernels.hpp"

#if defined(__AVX2__)

#include <cmath>
#include <immintrin.h>

namespace linkoracle::kernels::avx2 {

bool compiled_with_avx2() { return true; }

void axpy(double* y, double a, const double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_loadu_pd(y + i);
        const __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
    }
    for (; i < n; ++i) {
        y[i] += a * x[i];
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d vacc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        vacc = _mm256_add_pd(vacc, _mm256_mul_pd(va, vb));
    }
    // Lanes hold (acc0, acc1, acc2, acc3); combine as (acc0+acc2)+(acc1+acc3).
    const __m128d lo = _mm256_castpd256_pd128(vacc);
    const __m128d hi = _mm256_extractf128_pd(vacc, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    double total = _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
    for (; i < n; ++i) {
        total += a[i] * b[i];
    }
    return total;
}

void mul_accum(double* y, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_loadu_pd(y + i);
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vb)));
    }
    for (; i < n; ++i) {
        y[i] += a[i] * b[i];
    }
}

void rmsprop_update(double* theta, double* s, const double* g, std::size_t n, double eta,
                    double rho, double eps) {
    const __m256d vrho = _mm256_set1_pd(rho);
    const __m256d vomr = _mm256_set1_pd(1.0 - rho);
    const __m256d veta = _mm256_set1_pd(eta);
    const __m256d veps = _mm256_set1_pd(eps);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vg = _mm256_loadu_pd(g + i);
        const __m256d g2 = _mm256_mul_pd(vg, vg);
        const __m256d vs =
            _mm256_add_pd(_mm256_mul_pd(vrho, _mm256_loadu_pd(s + i)), _mm256_mul_pd(vomr, g2));
        _mm256_storeu_pd(s + i, vs);
        const __m256d denom = _mm256_sqrt_pd(_mm256_add_pd(vs, veps));
        const __m256d step = _mm256_div_pd(_mm256_mul_pd(veta, vg), denom);
        _mm256_storeu_pd(theta + i, _mm256_sub_pd(_mm256_loadu_pd(theta + i), step));
    }
    const double one_minus_rho = 1.0 - rho;
    for (; i < n; ++i) {
        const double g2 = g[i] * g[i];
        s[i] = rho * s[i] + one_minus_rho * g2;
        theta[i] -= eta * g[i] / std::sqrt(s[i] + eps);
    }
}

} // namespace linkoracle::kernels::avx2

#else

// Non-AVX2 build: forward to the scalar reference so the symbols still exist.
namespace linkoracle::kernels::avx2 {

bool compiled_with_avx2() { return false; }

void axpy(double* y, double a, const double* x, std::size_t n) { scalar::axpy(y, a, x, n); }
double dot(const double* a, const double* b, std::size_t n) { return scalar::dot(a, b, n); }
void mul_accum(double* y, const double* a, const double* b, std::size_t n) {
    scalar::mul_accum(y, a, b, n);
}
void rmsprop_update(double* theta, double* s, const double* g, std::size_t n, double eta,
                    double rho, double eps) {
    scalar::rmsprop_update(theta, s, g, n, eta, rho, eps);
}

} // namespace linkoracle::kernels::avx2

#endif
