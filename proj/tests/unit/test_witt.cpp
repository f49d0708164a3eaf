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

#include "lftcalc/random.hpp"
#include "lftcalc/witt.hpp"

using namespace lftcalc;

namespace {

FqSeries mono(const FieldPtr& F, std::int64_t c, std::int64_t e) { return FqSeries::monomial(F, F->from_int(c), e); }

bool witt_equal(const WittVector& a, const WittVector& b) {
    if (a.length() != b.length()) return false;
    for (int i = 0; i < a.length(); ++i)
        if (!agree(a.entries[i], b.entries[i])) return false;
    return true;
}

WittVector W(std::vector<FqSeries> e) { return WittVector{std::move(e)}; }

}  // namespace

TEST(Witt, FiltrationLevelExamples) {
    auto F = FiniteField::make(3, 1);
    EXPECT_EQ(fil_level(W({mono(F, 1, -1)})), 1);
    EXPECT_EQ(fil_level(W({mono(F, 1, -1), FqSeries(F)})), 3);
    EXPECT_EQ(fil_level(W({FqSeries(F), mono(F, 1, -2)})), 2);
    EXPECT_EQ(fil_level(W({mono(F, 1, 2)})), 0);
    EXPECT_THROW(fil_level(WittVector::zero(F, 1)), Error);
}

TEST(Witt, FmdExamples) {
    auto F = FiniteField::make(3, 1);
    auto a = fmd(W({mono(F, 1, -1)}));
    EXPECT_TRUE(agree(a, mono(F, -1, -2)));
    auto b = fmd(W({mono(F, 1, -1), FqSeries(F)}));
    EXPECT_TRUE(agree(b, mono(F, -1, -4)));
}

TEST(Witt, FrobeniusAndVerschiebung) {
    auto F = FiniteField::make(5, 1);
    auto f = frobenius(W({mono(F, 1, -1)}));
    EXPECT_TRUE(agree(f.entries[0], mono(F, 1, -5)));
    auto v = verschiebung(WittVector::zero(F, 0));
    EXPECT_EQ(v.length(), 2);
    EXPECT_TRUE(v.is_zero());
}

TEST(Witt, UniversalTablesAreIntegralAndIsobaric) {
    for (int p : {3, 5}) {
        const auto& T = UniversalWittTable::get(p, 3);
        for (int n = 0; n < 3; ++n) {
            std::vector<std::int64_t> wS, wQ;
            for (int i = 0; i < 3; ++i) wS.push_back(ipow(p, i));
            for (int i = 0; i < 3; ++i) wS.push_back(ipow(p, i));
            for (int i = 0; i < 3; ++i) wQ.push_back(ipow(p, i));
            for (int i = 0; i < 3; ++i) wQ.push_back(0);
            EXPECT_TRUE(T.addition(n).is_isobaric(wS, ipow(p, n)));
            EXPECT_TRUE(T.q_poly(n).is_isobaric(wQ, ipow(p, n)));
        }
        // Q_0 = X_0 Y_0
        auto q0 = IntPoly::var(6, 0) * IntPoly::var(6, 3);
        EXPECT_EQ(T.q_poly(0), q0);
    }
}

// Q_n = sum_{i<n} X_i^{p^{n-i}} lambda(Y_i) + X_n Y_n modulo p and the ideal (Y)^p.
TEST(Witt, QPolynomialCongruenceModPAndYp) {
    for (int p : {3, 5}) {
        const auto& T = UniversalWittTable::get(p, 3);
        int nv = 6;
        for (int n = 0; n <= 2; ++n) {
            std::vector<int> yvars = {3, 4, 5};
            auto lhs = T.q_poly(n).reduced_mod(p).truncated_in(yvars, p);
            IntPoly rhs(nv);
            for (int i = 0; i < n; ++i) {
                IntPoly lam(nv);
                for (int j = 1; j < p; ++j) {
                    // 1/j in F_p by brute force
                    int inv = 1;
                    while ((inv * j) % p != 1) ++inv;
                    int c = ((j % 2 == 1) ? 1 : -1) * inv;
                    lam = lam + IntPoly::var(nv, 3 + i).pow(j).scaled(c);
                }
                rhs = rhs + IntPoly::var(nv, i).pow(ipow(p, n - i)) * lam;
            }
            rhs = rhs + IntPoly::var(nv, n) * IntPoly::var(nv, 3 + n);
            EXPECT_EQ(lhs, rhs.reduced_mod(p).truncated_in(yvars, p)) << "p=" << p << " n=" << n;
        }
    }
}

TEST(Witt, QDefiningIdentityOnSeries) {
    Rng rng(17);
    auto F = FiniteField::make(3, 1);
    for (int it = 0; it < 20; ++it) {
        std::vector<FqSeries> x, y;
        for (int i = 0; i < 3; ++i) {
            x.push_back(random_poly(F, random_int(-3, 1, rng), 3, rng));
            y.push_back(random_poly(F, random_int(1, 3, rng), 3, rng));
        }
        WittVector z, qv;
        for (int i = 0; i < 3; ++i) z.entries.push_back(x[i] * (FqSeries::constant(F, F->one()) + y[i]));
        for (int n = 0; n < 3; ++n)
            qv.entries.push_back(qn_eval(n, std::vector<FqSeries>(x.begin(), x.begin() + n + 1),
                                         std::vector<FqSeries>(y.begin(), y.begin() + n + 1)));
        EXPECT_TRUE(witt_equal(z, witt_add(W(x), qv)));
    }
    EXPECT_TRUE(trunc_log(FqSeries(F)).is_zero());
}

TEST(Witt, GroupLaws) {
    Rng rng(1);
    for (auto [p, m] : std::vector<std::pair<int, int>>{{3, 0}, {3, 1}, {3, 2}, {5, 1}, {7, 1}}) {
        auto F = FiniteField::make(p, 1);
        for (int it = 0; it < 15; ++it) {
            auto a = random_witt(F, m, 6, rng), b = random_witt(F, m, 6, rng), c = random_witt(F, m, 6, rng);
            EXPECT_TRUE(witt_equal(witt_add(a, b), witt_add(b, a)));
            EXPECT_TRUE(witt_equal(witt_add(witt_add(a, b), c), witt_add(a, witt_add(b, c))));
            EXPECT_TRUE(witt_add(a, witt_neg(a)).is_zero());
            EXPECT_TRUE(witt_equal(witt_add(a, WittVector::zero(F, m)), a));
        }
    }
}

TEST(Witt, GhostMapIsAdditiveOnLifts) {
    Rng rng(2);
    for (auto [p, f, m] : std::vector<std::tuple<int, int, int>>{{3, 1, 1}, {3, 2, 1}, {3, 1, 2}, {5, 1, 1}}) {
        auto F = FiniteField::make(p, f);
        auto R = WittCoeffRing::make(F, m);
        for (int it = 0; it < 15; ++it) {
            auto a = random_witt(F, m, 5, rng), b = random_witt(F, m, 5, rng);
            auto lhs = ghost_component(witt_add(a, b), R);
            auto rhs = ghost_component(a, R) + ghost_component(b, R);
            EXPECT_TRUE(agree(lhs, rhs));
        }
    }
}

TEST(Witt, FiltrationProperties) {
    Rng rng(4);
    auto F = FiniteField::make(3, 1);
    for (int it = 0; it < 30; ++it) {
        auto a = random_witt(F, 1, 7, rng), b = random_witt(F, 1, 7, rng);
        if (a.is_zero() || b.is_zero()) continue;
        auto s = witt_add(a, b);
        if (!s.is_zero()) { EXPECT_LE(fil_level(s), std::max(fil_level(a), fil_level(b))); }
        auto v = verschiebung(a);
        EXPECT_TRUE(in_fil(v, fil_level(a)));
        EXPECT_TRUE(agree(fmd(s), fmd(a) + fmd(b)));
    }
}

TEST(Witt, ReductionExamples) {
    auto F = FiniteField::make(3, 1);
    auto r = reduce(W({mono(F, 1, -3)}));
    EXPECT_TRUE(witt_equal(r.reduced, W({mono(F, 1, -1)})));
    EXPECT_EQ(fil_level(r.reduced), 1);
    auto keep = W({mono(F, 1, -4)});
    EXPECT_TRUE(witt_equal(reduce(keep).reduced, keep));
    // reduced = a - (F(y) - y)
    Rng rng(8);
    for (int it = 0; it < 30; ++it) {
        auto a = random_witt(F, 1, 9, rng);
        auto res = reduce(a);
        auto rebuilt = witt_add(res.reduced, witt_sub(frobenius(res.witness), res.witness));
        EXPECT_TRUE(witt_equal(rebuilt, a));
        if (!res.reduced.is_zero() && fil_level(res.reduced) > 0) {
            auto alpha = fmd(res.reduced);
            EXPECT_EQ(alpha.valuation() + 1, -fil_level(res.reduced));
        }
    }
}

TEST(Witt, RefinedSwanExamples) {
    auto F = FiniteField::make(3, 1);
    auto r1 = rsw(W({mono(F, 1, -1)}));
    EXPECT_EQ(r1.n, 1);
    EXPECT_EQ(r1.coeff, F->one());
    auto r4 = rsw(W({mono(F, 1, -4)}));
    EXPECT_EQ(r4.n, 4);
    EXPECT_EQ(r4.coeff, F->from_int(4));
    EXPECT_THROW(rsw(W({mono(F, 1, -3)})), Error);
    EXPECT_THROW(rsw(W({mono(F, 1, 0)})), Error);
    Rng rng(12);
    auto F9 = FiniteField::make(3, 2);
    for (int it = 0; it < 50; ++it) {
        int m = static_cast<int>(random_int(0, 1, rng));
        std::int64_t n = random_int(1, 8, rng);
        if (m == 0 && n % 3 == 0) ++n;
        if (m == 1 && n % 9 == 0) ++n;
        auto a = random_reduced_witt(F9, m, n, rng);
        auto s = rsw(a);
        EXPECT_EQ(s.n, n);
        EXPECT_FALSE(F9->is_zero(s.coeff));
    }
}
