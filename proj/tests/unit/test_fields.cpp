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

#include <gtest/gtest.h>

#include <random>

#include "lftcalc/fields.hpp"

using namespace lftcalc;

namespace {

// Independent reference: schoolbook polynomial arithmetic modulo (p, modulus).
std::vector<int> ref_mul(const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& mod_low, int p) {
    int f = static_cast<int>(mod_low.size());
    std::vector<long> prod(2 * f, 0);
    for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j) prod[i + j] += static_cast<long>(a[i]) * b[j];
    for (int d = 2 * f - 1; d >= f; --d) {
        long c = ((prod[d] % p) + p) % p;
        prod[d] = 0;
        for (int i = 0; i < f; ++i) prod[d - f + i] -= c * mod_low[i];
    }
    std::vector<int> r(f);
    for (int i = 0; i < f; ++i) r[i] = static_cast<int>(((prod[i] % p) + p) % p);
    return r;
}

}  // namespace

TEST(Fields, F9ModulusIsXSquaredPlusOne) {
    auto F = FiniteField::make(3, 2);
    EXPECT_EQ(F->modulus(), (std::vector<int>{1, 0}));
    EXPECT_EQ(F->q(), 9);
}

TEST(Fields, GeneratorHasFullOrder) {
    for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {3, 3}, {5, 1}, {5, 2}, {7, 1}, {11, 1}}) {
        auto F = FiniteField::make(p, f);
        EXPECT_EQ(F->order(F->generator()), F->q() - 1);
        // smallest such index: no smaller index has full order
        for (std::uint32_t i = 1; i < F->generator().v; ++i) EXPECT_LT(F->order(Fq{i}), F->q() - 1);
    }
    EXPECT_EQ(FiniteField::make(3, 1)->generator().v, 2u);
}

TEST(Fields, Errors) {
    EXPECT_THROW(FiniteField::make(9, 1), Error);
    EXPECT_THROW(FiniteField::make(2, 3), Error);
    EXPECT_THROW(FiniteField::make(3, 20), Error);
    try {
        FiniteField::make(3, 20);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
    }
    try {
        FiniteField::make(15, 1);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPrime);
    }
}

TEST(Fields, MultiplicationMatchesPolynomialReference) {
    std::mt19937_64 rng(7);
    for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 2}, {3, 3}, {5, 2}, {3, 5}, {7, 2}}) {
        auto F = FiniteField::make(p, f);
        std::uniform_int_distribution<std::uint32_t> d(0, static_cast<std::uint32_t>(F->q() - 1));
        for (int it = 0; it < 300; ++it) {
            Fq a{d(rng)}, b{d(rng)};
            auto expect = ref_mul(F->coeffs(a), F->coeffs(b), F->modulus(), p);
            EXPECT_EQ(F->coeffs(F->mul(a, b)), expect);
            auto ca = F->coeffs(a), cb = F->coeffs(b);
            std::vector<int> s(f);
            for (int i = 0; i < f; ++i) s[i] = (ca[i] + cb[i]) % p;
            EXPECT_EQ(F->coeffs(F->add(a, b)), s);
            if (a.v != 0) { EXPECT_EQ(F->mul(a, F->inv(a)), F->one()); }
        }
    }
}

TEST(Fields, SquaresTraceFrobenius) {
    auto F = FiniteField::make(5, 2);
    int squares = 0;
    for (std::uint32_t i = 1; i < F->q(); ++i) {
        Fq x{i};
        bool brute = false;
        for (std::uint32_t j = 1; j < F->q(); ++j) brute = brute || F->mul(Fq{j}, Fq{j}) == x;
        EXPECT_EQ(F->is_square(x), brute);
        squares += brute;
        EXPECT_EQ(F->pth_root(F->frobenius(x)), x);
        if (brute) { EXPECT_EQ(F->mul(F->sqrt(x), F->sqrt(x)), x); }
    }
    EXPECT_EQ(squares, 12);
    // trace is F_p-linear and surjective
    int counts[5] = {0, 0, 0, 0, 0};
    for (std::uint32_t i = 0; i < F->q(); ++i) counts[F->trace(Fq{i})]++;
    for (int c : counts) EXPECT_EQ(c, 5);
    // -1 is a square in F_5 and in F_9, not in F_3
    EXPECT_EQ(FiniteField::make(3, 1)->kappa0(FiniteField::make(3, 1)->from_int(-1)), -1);
    EXPECT_EQ(FiniteField::make(3, 2)->kappa0(FiniteField::make(3, 2)->from_int(-1)), 1);
}

TEST(Fields, EmbeddingIsRingHomomorphism) {
    auto S = FiniteField::make(3, 2), L = FiniteField::make(3, 4);
    FieldEmbedding e(S, L);
    for (std::uint32_t a = 0; a < S->q(); ++a)
        for (std::uint32_t b = 0; b < S->q(); ++b) {
            EXPECT_EQ(e(S->mul(Fq{a}, Fq{b})), L->mul(e(Fq{a}), e(Fq{b})));
            EXPECT_EQ(e(S->add(Fq{a}, Fq{b})), L->add(e(Fq{a}), e(Fq{b})));
        }
}

TEST(Fields, WittCoeffRingLiftsAndTraces) {
    auto F = FiniteField::make(3, 2);
    WittCoeffRing R(F, 1);
    EXPECT_EQ(R.modulus_power(), 9);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(0, 8);
    for (int it = 0; it < 200; ++it) {
        Zq a{}, b{};
        a.c[0] = d(rng), a.c[1] = d(rng), b.c[0] = d(rng), b.c[1] = d(rng);
        EXPECT_EQ(R.reduce(R.mul(a, b)), F->mul(R.reduce(a), R.reduce(b)));
        if (R.is_unit(a)) { EXPECT_EQ(R.mul(a, R.inv(a)), R.one()); }
        // trace reduces to the field trace
        EXPECT_EQ(R.trace(a) % 3, F->trace(R.reduce(a)));
        EXPECT_EQ(R.trace(R.add(a, b)), (R.trace(a) + R.trace(b)) % 9);
    }
    // Tr(1) = f
    EXPECT_EQ(R.trace(R.one()), 2);
}
