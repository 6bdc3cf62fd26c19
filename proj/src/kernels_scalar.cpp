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

namespace linkoracle::kernels::scalar {

void axpy(double* y, double a, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += a * x[i];
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    const std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        acc0 += a[i] * b[i];
        acc1 += a[i + 1] * b[i + 1];
        acc2 += a[i + 2] * b[i + 2];
        acc3 += a[i + 3] * b[i + 3];
    }
    double total = (acc0 + acc2) + (acc1 + acc3);
    for (std::size_t i = n4; i < n; ++i) {
        total += a[i] * b[i];
    }
    return total;
}

void mul_accum(double* y, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += a[i] * b[i];
    }
}

void rmsprop_update(double* theta, double* s, const double* g, std::size_t n, double eta,
                    double rho, double eps) {
    const double one_minus_rho = 1.0 - rho;
    for (std::size_t i = 0; i < n; ++i) {
        const double g2 = g[i] * g[i];
        s[i] = rho * s[i] + one_minus_rho * g2;
        theta[i] -= eta * g[i] / std::sqrt(s[i] + eps);
    }
}

} // namespace linkoracle::kernels::scalar
