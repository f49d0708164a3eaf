/*
   Copyright 2026 The lftcalc Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

/// @file random.hpp
/// @brief Seeded generators of random test data shared by the test suites and the CLI self-test.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lftcalc/fields.hpp"
#include "lftcalc/series.hpp"
#include "lftcalc/witt.hpp"

namespace lftcalc {

using Rng = std::mt19937_64;

inline Fq random_elem(const FieldPtr& F, Rng& rng) {
    return Fq{static_cast<std::uint32_t>(std::uniform_int_distribution<std::int64_t>(0, F->q() - 1)(rng))};
}

inline Fq random_nonzero(const FieldPtr& F, Rng& rng) {
    return Fq{static_cast<std::uint32_t>(std::uniform_int_distribution<std::int64_t>(1, F->q() - 1)(rng))};
}

inline std::int64_t random_int(std::int64_t lo, std::int64_t hi, Rng& rng) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Exact Laurent polynomial with exponents in [val, val + len) and a nonzero leading coefficient.
inline FqSeries random_poly(const FieldPtr& F, std::int64_t val, int len, Rng& rng) {
    std::vector<Fq> c(len);
    for (auto& x : c) x = random_elem(F, rng);
    c[0] = random_nonzero(F, rng);
    return FqSeries::from_coeffs(F, val, std::move(c));
}

/// Exact unit power series 1 + (random terms up to t^{len-1}) scaled by a random nonzero constant.
inline FqSeries random_unit(const FieldPtr& F, int len, Rng& rng) { return random_poly(F, 0, len, rng); }

/// Random Witt vector with fil_level <= n_max, entries supported in negative degrees plus a constant.
inline WittVector random_witt(const FieldPtr& F, int m, std::int64_t n_max, Rng& rng, double density = 0.6) {
    WittVector w = WittVector::zero(F, m);
    std::int64_t p = F->p();
    std::bernoulli_distribution keep(density);
    for (int i = 0; i <= m; ++i) {
        std::int64_t lowest = n_max / ipow(p, m - i);  // p^{m-i} e <= n_max
        std::map<std::int64_t, Fq> terms;
        for (std::int64_t e = 1; e <= lowest; ++e)
            if (keep(rng)) terms[-e] = random_nonzero(F, rng);
        if (keep(rng)) terms[0] = random_elem(F, rng);
        if (keep(rng)) terms[1] = random_elem(F, rng);
        w.entries[i] = FqSeries::from_terms(F, terms);
    }
    return w;
}

/**
 * Random reduced vector of level exactly n (n >= 1): the top slot i = m - v_p(n) carries
 * c t^{-n/p^{m-i}}, lower terms avoid exponents divisible by p, lower slots stay below level n.
 */
inline WittVector random_reduced_witt(const FieldPtr& F, int m, std::int64_t n, Rng& rng) {
    std::int64_t p = F->p();
    int vp = 0;
    for (std::int64_t x = n; x % p == 0; x /= p) ++vp;
    require(vp <= m, ErrorKind::InconsistentInput, "level not reachable at this Witt length");
    int top = m - vp;
    WittVector w = WittVector::zero(F, m);
    std::bernoulli_distribution keep(0.5);
    for (int i = 0; i <= m; ++i) {
        std::int64_t weight = ipow(p, m - i);
        std::map<std::int64_t, Fq> terms;
        std::int64_t emax = (i == top) ? n / weight : (n - 1) / weight;
        for (std::int64_t e = 1; e <= emax; ++e) {
            if (e % p == 0) continue;
            if ((i == top && e == emax) || keep(rng)) terms[-e] = random_nonzero(F, rng);
        }
        if (keep(rng)) terms[0] = random_elem(F, rng);
        w.entries[i] = FqSeries::from_terms(F, terms);
    }
    return w;
}

}  // namespace lftcalc
