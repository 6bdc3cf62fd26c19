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

#include <doctest.h>

#include <vector>

#include "linkoracle/kernels/kernels.hpp"
#include "linkoracle/rng.hpp"

using namespace linkoracle;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 2.0) {
    std::vector<double> v(n);
    for (auto& x : v) {
        x = rng.uniform(-scale, scale);
    }
    return v;
}

} // namespace

TEST_CASE("avx2 availability matches dispatch") {
    if (kernels::cpu_supports_avx2()) {
        CHECK(kernels::active_backend() == kernels::Backend::avx2);
    } else {
        CHECK(kernels::active_backend() == kernels::Backend::scalar);
    }
}

// The scalar and AVX2 paths must agree bit-for-bit: axpy/mul_accum/rmsprop touch
// independent elements, dot pins its reduction association in both backends.
TEST_CASE("scalar and avx2 kernels are bitwise identical") {
    if (!kernels::cpu_supports_avx2()) {
        return; // nothing to compare on this host
    }
    Rng rng(23);
    for (std::size_t n = 0; n <= 70; ++n) {
        const auto x = random_vec(rng, n);
        const auto b = random_vec(rng, n);
        const double a = rng.uniform(-3.0, 3.0);

        auto y1 = random_vec(rng, n);
        auto y2 = y1;
        kernels::scalar::axpy(y1.data(), a, x.data(), n);
        kernels::avx2::axpy(y2.data(), a, x.data(), n);
        CHECK(y1 == y2);

        const double d1 = kernels::scalar::dot(x.data(), b.data(), n);
        const double d2 = kernels::avx2::dot(x.data(), b.data(), n);
        CHECK(d1 == d2);

        auto m1 = random_vec(rng, n);
        auto m2 = m1;
        kernels::scalar::mul_accum(m1.data(), x.data(), b.data(), n);
        kernels::avx2::mul_accum(m2.data(), x.data(), b.data(), n);
        CHECK(m1 == m2);

        auto t1 = random_vec(rng, n);
        auto t2 = t1;
        auto s1 = random_vec(rng, n, 0.5);
        for (auto& s : s1) {
            s = s * s; // accumulators are nonnegative
        }
        auto s2 = s1;
        kernels::scalar::rmsprop_update(t1.data(), s1.data(), x.data(), n, 0.001, 0.9, 1e-7);
        kernels::avx2::rmsprop_update(t2.data(), s2.data(), x.data(), n, 0.001, 0.9, 1e-7);
        CHECK(t1 == t2);
        CHECK(s1 == s2);
    }
}

TEST_CASE("dot matches plain summation within rounding") {
    Rng rng(29);
    const auto a = random_vec(rng, 1000);
    const auto b = random_vec(rng, 1000);
    double naive = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        naive += a[i] * b[i];
    }
    CHECK(kernels::dot(a.data(), b.data(), a.size()) == doctest::Approx(naive).epsilon(1e-12));
}

TEST_CASE("force_backend round-trip") {
    const auto original = kernels::active_backend();
    kernels::force_backend(kernels::Backend::scalar);
    CHECK(kernels::active_backend() == kernels::Backend::scalar);
    kernels::force_backend(original);
}
