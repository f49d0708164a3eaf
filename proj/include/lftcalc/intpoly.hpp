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

/// @file intpoly.hpp
/// @brief Sparse multivariate polynomials over Z, used to build universal Witt polynomials.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lftcalc/error.hpp"
#include "lftcalc/series.hpp"

namespace lftcalc {

class IntPoly {
   public:
    using Monomial = std::vector<std::uint16_t>;

    IntPoly() = default;
    explicit IntPoly(int nvars) : nvars_(nvars) {}

    static IntPoly constant(int nvars, const mpz_class& c) {
        IntPoly r(nvars);
        if (c != 0) r.terms_[Monomial(nvars, 0)] = c;
        return r;
    }
    static IntPoly var(int nvars, int i) {
        IntPoly r(nvars);
        Monomial m(nvars, 0);
        m[i] = 1;
        r.terms_[m] = 1;
        return r;
    }

    int nvars() const { return nvars_; }
    const std::map<Monomial, mpz_class>& terms() const { return terms_; }
    std::map<Monomial, mpz_class>& mutable_terms() { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        IntPoly r = a;
        for (const auto& [m, c] : b.terms_) r.accumulate(m, c);
        return r;
    }
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
        IntPoly r = a;
        for (const auto& [m, c] : b.terms_) r.accumulate(m, -c);
        return r;
    }
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        IntPoly r(a.nvars_);
        Monomial m(a.nvars_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                for (int i = 0; i < a.nvars_; ++i) m[i] = static_cast<std::uint16_t>(ma[i] + mb[i]);
                r.accumulate(m, ca * cb);
            }
        return r;
    }
    IntPoly pow(std::int64_t e) const {
        IntPoly r = constant(nvars_, 1), b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e > 0) b = b * b;
        }
        return r;
    }
    IntPoly scaled(const mpz_class& s) const {
        IntPoly r(nvars_);
        if (s == 0) return r;
        for (const auto& [m, c] : terms_) r.terms_[m] = c * s;
        return r;
    }
    /// Division by an integer that must divide every coefficient.
    IntPoly divided_exact(const mpz_class& d) const {
        IntPoly r(nvars_);
        for (const auto& [m, c] : terms_) {
            require(mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t()) != 0, ErrorKind::InconsistentInput,
                    "universal polynomial is not integral");
            r.terms_[m] = c / d;
        }
        return r;
    }
    /// Coefficients reduced into [0, p), zero terms dropped.
    IntPoly reduced_mod(std::int64_t p) const {
        IntPoly r(nvars_);
        mpz_class P = static_cast<long>(p);
        for (const auto& [m, c] : terms_) {
            mpz_class x;
            mpz_fdiv_r(x.get_mpz_t(), c.get_mpz_t(), P.get_mpz_t());
            if (x != 0) r.terms_[m] = x;
        }
        return r;
    }
    /// True when every monomial has the same weighted degree.
    bool is_isobaric(const std::vector<std::int64_t>& weights, std::int64_t weight) const {
        for (const auto& [m, c] : terms_) {
            std::int64_t w = 0;
            for (int i = 0; i < nvars_; ++i) w += weights[i] * m[i];
            if (w != weight) return false;
        }
        return true;
    }
    /// Drop monomials whose total degree in the listed variables is at least bound.
    IntPoly truncated_in(const std::vector<int>& vars, int bound) const {
        IntPoly r(nvars_);
        for (const auto& [m, c] : terms_) {
            int d = 0;
            for (int v : vars) d += m[v];
            if (d < bound) r.terms_[m] = c;
        }
        return r;
    }
    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }

   private:
    void accumulate(const Monomial& m, const mpz_class& c) {
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
            return;
        }
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }

    int nvars_ = 0;
    std::map<Monomial, mpz_class> terms_;
};

/**
 * Evaluate a polynomial at series over a ring of characteristic p, reading each integer
 * coefficient through Ring::from_int. Powers of each argument are computed once.
 */
template <class Ring>
LaurentSeries<Ring> evaluate_mod_p(const IntPoly& poly, const std::vector<LaurentSeries<Ring>>& args, std::int64_t p) {
    require(static_cast<int>(args.size()) == poly.nvars(), ErrorKind::LengthMismatch, "argument count mismatch");
    const auto& ring = args.front().ring();
    std::vector<std::vector<LaurentSeries<Ring>>> powers(args.size());
    auto get_pow = [&](std::size_t v, int e) -> const LaurentSeries<Ring>& {
        auto& pv = powers[v];
        if (pv.empty()) pv.push_back(LaurentSeries<Ring>::constant(ring, ring->one()));
        while (static_cast<int>(pv.size()) <= e) pv.push_back(pv.back() * args[v]);
        return pv[e];
    };
    LaurentSeries<Ring> acc(ring);
    mpz_class P = static_cast<long>(p);
    for (const auto& [m, c] : poly.terms()) {
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), P.get_mpz_t());
        if (r == 0) continue;
        auto term = LaurentSeries<Ring>::constant(ring, ring->from_int(r.get_si()));
        for (std::size_t v = 0; v < m.size(); ++v)
            if (m[v] > 0) term = term * get_pow(v, m[v]);
        acc = acc + term;
    }
    return acc;
}

}  // namespace lftcalc
