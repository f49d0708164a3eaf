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

/**
 * @file fields.hpp
 * @brief Finite fields of odd characteristic and the truncated unramified lifts of their Witt rings.
 *
 * An element of F_q with q = p^f is stored as the integer index sum_i c_i p^i where
 * c_0 + c_1 X + ... + c_{f-1} X^{f-1} is its representative modulo the field modulus.
 * Index 0 is zero and index 1 is one. Multiplication goes through discrete-logarithm tables
 * built once per field.
 */

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lftcalc/error.hpp"

namespace lftcalc {

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Distinct prime divisors in increasing order.
inline std::vector<std::int64_t> prime_divisors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline std::int64_t ipow(std::int64_t b, std::int64_t e) {
    std::int64_t r = 1;
    for (std::int64_t i = 0; i < e; ++i) r *= b;
    return r;
}

/// Nonnegative residue of a modulo n.
inline std::int64_t mod(std::int64_t a, std::int64_t n) {
    std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

/// Binomial coefficient C(x, 2) = x(x-1)/2 for any integer x.
inline std::int64_t binom2(std::int64_t x) { return x * (x - 1) / 2; }

/// Exponent of the largest power of p dividing n (n != 0).
inline int p_adic_valuation(std::int64_t n, std::int64_t p) {
    int v = 0;
    if (n == 0) return 1 << 20;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

/// Strong type for an element of a FiniteField.
struct Fq {
    std::uint32_t v = 0;
    friend constexpr bool operator==(Fq, Fq) = default;
    friend constexpr auto operator<=>(Fq, Fq) = default;
};

class FiniteField {
   public:
    using Elem = Fq;
    static constexpr std::int64_t kDefaultCap = std::int64_t{1} << 16;

    /// Cached construction: the same (p, f) always yields the same object.
    static std::shared_ptr<const FiniteField> make(std::int64_t p, int f, std::int64_t cap = kDefaultCap) {
        require(is_prime(p), ErrorKind::NotPrime, "p = " + std::to_string(p) + " is not prime");
        require(p != 2, ErrorKind::EvenCharacteristic, "characteristic 2 is not supported");
        require(f >= 1, ErrorKind::InconsistentInput, "extension degree must be positive");
        std::int64_t q = 1;
        for (int i = 0; i < f; ++i) {
            q *= p;
            require(q <= cap, ErrorKind::CapExceeded,
                    "field size " + std::to_string(p) + "^" + std::to_string(f) + " exceeds cap " + std::to_string(cap));
        }
        static std::mutex mu;
        static std::map<std::pair<std::int64_t, int>, std::shared_ptr<const FiniteField>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(p, f);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        auto field = std::shared_ptr<const FiniteField>(new FiniteField(static_cast<int>(p), f));
        cache.emplace(key, field);
        return field;
    }

    int p() const { return p_; }
    int f() const { return f_; }
    std::int64_t q() const { return q_; }
    /// Low coefficients c_0..c_{f-1} of the monic modulus.
    const std::vector<int>& modulus() const { return modulus_; }
    Fq generator() const { return Fq{exp_[1]}; }

    Fq zero() const { return Fq{0}; }
    Fq one() const { return Fq{1}; }
    bool is_zero(Fq a) const { return a.v == 0; }
    bool is_unit(Fq a) const { return a.v != 0; }
    bool equal(Fq a, Fq b) const { return a == b; }

    Fq from_int(std::int64_t n) const { return Fq{static_cast<std::uint32_t>(mod(n, p_))}; }

    Fq from_coeffs(std::span<const int> c) const {
        require(static_cast<int>(c.size()) <= f_, ErrorKind::SchemaError, "too many coefficients for field element");
        std::uint32_t idx = 0;
        for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
            idx = idx * static_cast<std::uint32_t>(p_) + static_cast<std::uint32_t>(mod(c[i], p_));
        return Fq{idx};
    }

    std::vector<int> coeffs(Fq a) const {
        std::vector<int> c(f_);
        std::uint32_t v = a.v;
        for (int i = 0; i < f_; ++i) {
            c[i] = static_cast<int>(v % p_);
            v /= p_;
        }
        return c;
    }

    Fq add(Fq a, Fq b) const {
        if (!add_table_.empty()) return Fq{add_table_[a.v * q_ + b.v]};
        return digitwise(a, b);
    }
    Fq sub(Fq a, Fq b) const { return add(a, neg(b)); }
    Fq neg(Fq a) const { return Fq{neg_[a.v]}; }

    Fq mul(Fq a, Fq b) const {
        if (a.v == 0 || b.v == 0) return Fq{0};
        std::uint32_t s = log_[a.v] + log_[b.v];
        if (s >= q_ - 1) s -= static_cast<std::uint32_t>(q_ - 1);
        return Fq{exp_[s]};
    }

    Fq inv(Fq a) const {
        require(a.v != 0, ErrorKind::DivisionByZero, "inverse of zero in F_q");
        std::uint32_t l = log_[a.v];
        return Fq{exp_[l == 0 ? 0 : (q_ - 1 - l)]};
    }
    Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }

    Fq pow(Fq a, std::int64_t e) const {
        if (a.v == 0) {
            require(e >= 0, ErrorKind::DivisionByZero, "negative power of zero");
            return e == 0 ? one() : zero();
        }
        std::int64_t l = mod(static_cast<std::int64_t>(log_[a.v]) * mod(e, q_ - 1), q_ - 1);
        return Fq{exp_[l]};
    }

    /// Discrete logarithm to the canonical generator, in [0, q-1).
    std::int64_t dlog(Fq a) const {
        require(a.v != 0, ErrorKind::ZeroInput, "discrete log of zero");
        return log_[a.v];
    }
    Fq exp(std::int64_t k) const { return Fq{exp_[mod(k, q_ - 1)]}; }

    bool is_square(Fq a) const { return a.v == 0 || log_[a.v] % 2 == 0; }
    /// Quadratic character of k^x: +1 on squares, -1 otherwise.
    int kappa0(Fq a) const {
        require(a.v != 0, ErrorKind::ZeroInput, "quadratic character of zero");
        return log_[a.v] % 2 == 0 ? 1 : -1;
    }
    Fq sqrt(Fq a) const {
        if (a.v == 0) return a;
        require(is_square(a), ErrorKind::NotASquare, "element is not a square");
        return Fq{exp_[log_[a.v] / 2]};
    }

    Fq frobenius(Fq a) const { return pow(a, p_); }
    Fq pth_root(Fq a) const { return pow(a, q_ / p_); }

    /// Absolute trace to F_p, returned as an integer in [0, p).
    int trace(Fq a) const { return trace_[a.v]; }

    /// Multiplicative order of a nonzero element.
    std::int64_t order(Fq a) const {
        std::int64_t l = dlog(a);
        return (q_ - 1) / std::gcd(l, q_ - 1);
    }

    std::string to_string(Fq a) const {
        if (f_ == 1) return std::to_string(a.v);
        auto c = coeffs(a);
        std::ostringstream os;
        bool first = true;
        for (int i = f_ - 1; i >= 0; --i) {
            if (c[i] == 0) continue;
            if (!first) os << "+";
            first = false;
            if (i == 0) {
                os << c[i];
            } else {
                if (c[i] != 1) os << c[i] << "*";
                os << "X";
                if (i > 1) os << "^" << i;
            }
        }
        if (first) os << "0";
        return os.str();
    }

   private:
    FiniteField(int p, int f) : p_(p), f_(f), q_(ipow(p, f)) {
        find_modulus();
        build_tables();
    }

    // Polynomial product of two index-coded elements reduced by the modulus.
    Fq slow_mul(Fq a, Fq b) const {
        auto x = coeffs(a), y = coeffs(b);
        std::vector<std::int64_t> prod(2 * f_, 0);
        for (int i = 0; i < f_; ++i)
            for (int j = 0; j < f_; ++j) prod[i + j] += static_cast<std::int64_t>(x[i]) * y[j];
        for (int d = 2 * f_ - 1; d >= f_; --d) {
            std::int64_t c = mod(prod[d], p_);
            if (c == 0) continue;
            prod[d] = 0;
            for (int i = 0; i < f_; ++i) prod[d - f_ + i] -= c * modulus_[i];
        }
        std::vector<int> r(f_);
        for (int i = 0; i < f_; ++i) r[i] = static_cast<int>(mod(prod[i], p_));
        return from_coeffs(r);
    }

    Fq digitwise(Fq a, Fq b) const {
        std::uint32_t x = a.v, y = b.v, r = 0, place = 1;
        for (int i = 0; i < f_; ++i) {
            std::uint32_t d = (x % p_ + y % p_) % p_;
            r += d * place;
            place *= p_;
            x /= p_;
            y /= p_;
        }
        return Fq{r};
    }

    // Remainder of a monic-or-not polynomial by a monic divisor, coefficients mod p.
    static std::vector<int> poly_rem(std::vector<int> a, const std::vector<int>& monic, int p) {
        int db = static_cast<int>(monic.size()) - 1;
        for (int d = static_cast<int>(a.size()) - 1; d >= db; --d) {
            int c = static_cast<int>(mod(a[d], p));
            if (c == 0) continue;
            for (int i = 0; i <= db; ++i) a[d - db + i] = static_cast<int>(mod(a[d - db + i] - c * monic[i], p));
        }
        a.resize(std::max(0, db));
        return a;
    }

    bool irreducible(const std::vector<int>& full) const {
        // full has degree f_ and is monic.
        for (int d = 1; d <= f_ / 2; ++d) {
            std::int64_t count = ipow(p_, d);
            for (std::int64_t idx = 0; idx < count; ++idx) {
                std::vector<int> div(d + 1);
                std::int64_t v = idx;
                for (int i = 0; i < d; ++i) {
                    div[i] = static_cast<int>(v % p_);
                    v /= p_;
                }
                div[d] = 1;
                auto r = poly_rem(full, div, p_);
                bool zero = true;
                for (int c : r) zero = zero && (c == 0);
                if (zero) return false;
            }
        }
        return true;
    }

    void find_modulus() {
        for (std::int64_t idx = 0; idx < q_; ++idx) {
            std::vector<int> full(f_ + 1);
            std::int64_t v = idx;
            for (int i = 0; i < f_; ++i) {
                full[i] = static_cast<int>(v % p_);
                v /= p_;
            }
            full[f_] = 1;
            if (irreducible(full)) {
                modulus_.assign(full.begin(), full.begin() + f_);
                return;
            }
        }
        fail(ErrorKind::InconsistentInput, "no irreducible polynomial found");
    }

    void build_tables() {
        neg_.resize(q_);
        for (std::int64_t i = 0; i < q_; ++i) {
            auto c = coeffs(Fq{static_cast<std::uint32_t>(i)});
            for (auto& x : c) x = static_cast<int>(mod(-x, p_));
            neg_[i] = from_coeffs(c).v;
        }
        auto divisors = prime_divisors(q_ - 1);
        auto slow_pow = [&](Fq a, std::int64_t e) {
            Fq r = one();
            while (e > 0) {
                if (e & 1) r = slow_mul(r, a);
                a = slow_mul(a, a);
                e >>= 1;
            }
            return r;
        };
        Fq gen{0};
        for (std::int64_t idx = 1; idx < q_; ++idx) {
            Fq cand{static_cast<std::uint32_t>(idx)};
            bool primitive = true;
            for (auto l : divisors) {
                if (slow_pow(cand, (q_ - 1) / l) == one()) {
                    primitive = false;
                    break;
                }
            }
            if (primitive) {
                gen = cand;
                break;
            }
        }
        if (q_ == 2) gen = one();
        exp_.resize(q_);
        log_.assign(q_, 0);
        Fq cur = one();
        for (std::int64_t k = 0; k < q_ - 1; ++k) {
            exp_[k] = cur.v;
            log_[cur.v] = static_cast<std::uint32_t>(k);
            cur = slow_mul(cur, gen);
        }
        exp_[q_ - 1] = exp_[0];
        if (q_ <= 1024) {
            add_table_.resize(q_ * q_);
            for (std::int64_t a = 0; a < q_; ++a)
                for (std::int64_t b = 0; b < q_; ++b)
                    add_table_[a * q_ + b] =
                        digitwise(Fq{static_cast<std::uint32_t>(a)}, Fq{static_cast<std::uint32_t>(b)}).v;
        }
        trace_.resize(q_);
        for (std::int64_t i = 0; i < q_; ++i) {
            Fq x{static_cast<std::uint32_t>(i)}, acc = zero(), cur2 = x;
            for (int j = 0; j < f_; ++j) {
                acc = add(acc, cur2);
                cur2 = pow(cur2, p_);
            }
            trace_[i] = coeffs(acc)[0];
        }
    }

    int p_;
    int f_;
    std::int64_t q_;
    std::vector<int> modulus_;
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> log_;
    std::vector<std::uint32_t> neg_;
    std::vector<std::uint32_t> add_table_;
    std::vector<int> trace_;
};

using FieldPtr = std::shared_ptr<const FiniteField>;

/// Field embedding F_q -> F_{q^s} sending the modulus root of the small field to a root in the large one.
class FieldEmbedding {
   public:
    FieldEmbedding(FieldPtr small, FieldPtr large) : small_(std::move(small)), large_(std::move(large)) {
        require(small_->p() == large_->p() && large_->f() % small_->f() == 0, ErrorKind::IncompatibleLevels,
                "no embedding between the requested fields");
        // Find the smallest root in the large field of the small field's modulus.
        const auto& mcoef = small_->modulus();
        Fq root{0};
        bool found = false;
        for (std::int64_t idx = 0; idx < large_->q() && !found; ++idx) {
            Fq x{static_cast<std::uint32_t>(idx)};
            Fq acc = large_->one();  // leading term of the monic modulus evaluated by Horner
            for (int i = small_->f() - 1; i >= 0; --i) acc = large_->add(large_->mul(acc, x), large_->from_int(mcoef[i]));
            if (large_->is_zero(acc)) {
                root = x;
                found = true;
            }
        }
        require(found, ErrorKind::InconsistentInput, "modulus has no root in the extension field");
        table_.resize(small_->q());
        for (std::int64_t idx = 0; idx < small_->q(); ++idx) {
            auto c = small_->coeffs(Fq{static_cast<std::uint32_t>(idx)});
            Fq acc = large_->zero();
            for (int i = small_->f() - 1; i >= 0; --i) acc = large_->add(large_->mul(acc, root), large_->from_int(c[i]));
            table_[idx] = acc;
        }
    }

    Fq operator()(Fq a) const { return table_[a.v]; }
    const FieldPtr& source() const { return small_; }
    const FieldPtr& target() const { return large_; }

   private:
    FieldPtr small_;
    FieldPtr large_;
    std::vector<Fq> table_;
};

/// Element of (Z/p^{m+1})[X]/(lifted modulus); coefficients are kept in [0, p^{m+1}).
struct Zq {
    static constexpr int kMaxDegree = 16;
    std::array<std::int64_t, kMaxDegree> c{};
    friend bool operator==(const Zq&, const Zq&) = default;
};

/**
 * The ring W_{m+1}(F_q), modelled as (Z/p^{m+1})[X]/(F~) where F~ lifts the field modulus
 * coefficient-wise into [0, p).
 */
class WittCoeffRing {
   public:
    using Elem = Zq;

    WittCoeffRing(FieldPtr field, int m) : field_(std::move(field)), m_(m) {
        require(m >= 0, ErrorKind::InconsistentInput, "negative Witt level");
        require(field_->f() <= Zq::kMaxDegree, ErrorKind::CapExceeded, "extension degree too large for lifted ring");
        pm_ = ipow(field_->p(), m + 1);
        // Traces of the basis monomials X^i, as traces of multiplication matrices.
        trace_basis_.resize(field_->f());
        int f = field_->f();
        for (int i = 0; i < f; ++i) {
            std::int64_t tr = 0;
            for (int j = 0; j < f; ++j) {
                Zq xj{};
                xj.c[j] = 1;
                Zq xi{};
                xi.c[i] = 1;
                tr += mul(xi, xj).c[j];
            }
            trace_basis_[i] = mod(tr, pm_);
        }
    }

    static std::shared_ptr<const WittCoeffRing> make(FieldPtr field, int m) {
        return std::make_shared<const WittCoeffRing>(std::move(field), m);
    }

    const FieldPtr& field() const { return field_; }
    int m() const { return m_; }
    std::int64_t modulus_power() const { return pm_; }

    Zq zero() const { return Zq{}; }
    Zq one() const {
        Zq r{};
        r.c[0] = 1 % pm_;
        return r;
    }
    Zq from_int(std::int64_t n) const {
        Zq r{};
        r.c[0] = mod(n, pm_);
        return r;
    }
    bool is_zero(const Zq& a) const {
        for (int i = 0; i < field_->f(); ++i)
            if (a.c[i] != 0) return false;
        return true;
    }
    bool equal(const Zq& a, const Zq& b) const { return a == b; }
    bool is_unit(const Zq& a) const { return !field_->is_zero(reduce(a)); }

    Zq add(const Zq& a, const Zq& b) const {
        Zq r{};
        for (int i = 0; i < field_->f(); ++i) {
            r.c[i] = a.c[i] + b.c[i];
            if (r.c[i] >= pm_) r.c[i] -= pm_;
        }
        return r;
    }
    Zq neg(const Zq& a) const {
        Zq r{};
        for (int i = 0; i < field_->f(); ++i) r.c[i] = a.c[i] == 0 ? 0 : pm_ - a.c[i];
        return r;
    }
    Zq sub(const Zq& a, const Zq& b) const { return add(a, neg(b)); }
    Zq scale(const Zq& a, std::int64_t n) const {
        Zq r{};
        std::int64_t k = mod(n, pm_);
        for (int i = 0; i < field_->f(); ++i) r.c[i] = mod(static_cast<std::int64_t>(static_cast<__int128>(a.c[i]) * k % pm_), pm_);
        return r;
    }

    Zq mul(const Zq& a, const Zq& b) const {
        int f = field_->f();
        std::array<__int128, 2 * Zq::kMaxDegree> prod{};
        for (int i = 0; i < f; ++i) {
            if (a.c[i] == 0) continue;
            for (int j = 0; j < f; ++j) prod[i + j] += static_cast<__int128>(a.c[i]) * b.c[j];
        }
        for (int i = 0; i < 2 * f; ++i) prod[i] %= pm_;
        const auto& mc = field_->modulus();
        for (int d = 2 * f - 2; d >= f; --d) {
            __int128 c = prod[d] % pm_;
            if (c == 0) continue;
            prod[d] = 0;
            for (int i = 0; i < f; ++i) prod[d - f + i] = (prod[d - f + i] - c * mc[i]) % pm_;
        }
        Zq r{};
        for (int i = 0; i < f; ++i) {
            auto v = static_cast<std::int64_t>(prod[i] % pm_);
            r.c[i] = v < 0 ? v + pm_ : v;
        }
        return r;
    }

    /// Inverse of a unit: invert the reduction, then refine by Newton iteration.
    Zq inv(const Zq& a) const {
        Fq red = reduce(a);
        require(!field_->is_zero(red), ErrorKind::DivisionByZero, "non-unit in lifted coefficient ring");
        Zq y = lift(field_->inv(red));
        Zq two = from_int(2);
        for (int it = 0; it <= m_ + 1; ++it) y = mul(y, sub(two, mul(a, y)));
        return y;
    }

    Zq lift(Fq a) const {
        auto c = field_->coeffs(a);
        Zq r{};
        for (int i = 0; i < field_->f(); ++i) r.c[i] = c[i];
        return r;
    }
    Fq reduce(const Zq& a) const {
        std::vector<int> c(field_->f());
        for (int i = 0; i < field_->f(); ++i) c[i] = static_cast<int>(mod(a.c[i], field_->p()));
        return field_->from_coeffs(c);
    }

    /// Trace down to Z/p^{m+1}, in [0, p^{m+1}).
    std::int64_t trace(const Zq& a) const {
        __int128 s = 0;
        for (int i = 0; i < field_->f(); ++i) s += static_cast<__int128>(a.c[i]) * trace_basis_[i];
        return mod(static_cast<std::int64_t>(s % pm_), pm_);
    }

   private:
    FieldPtr field_;
    int m_;
    std::int64_t pm_;
    std::vector<std::int64_t> trace_basis_;
};

using CoeffRingPtr = std::shared_ptr<const WittCoeffRing>;

}  // namespace lftcalc
