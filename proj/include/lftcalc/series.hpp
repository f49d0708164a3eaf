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
 * @file series.hpp
 * @brief Truncated Laurent series with explicit precision over a coefficient ring.
 *
 * A series is known modulo t^prec. Exact Laurent polynomials carry prec == kExact, and every
 * operation propagates the precision it can actually guarantee: a product of series known to
 * N_a and N_b with valuations v_a and v_b is known to min(N_a + v_b, N_b + v_a). Reading a
 * coefficient at or beyond the known precision raises PrecisionExhausted instead of guessing.
 *
 * The Ring parameter supplies Elem, zero, one, from_int, add, sub, neg, mul, inv, is_zero,
 * is_unit and equal. FiniteField and WittCoeffRing both qualify.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lftcalc/error.hpp"
#include "lftcalc/fields.hpp"

namespace lftcalc {

inline constexpr std::int64_t kExact = std::numeric_limits<std::int64_t>::max() / 4;
/// Valuation reported for a series that is zero to its known precision.
inline constexpr std::int64_t kInfinity = kExact;

inline std::int64_t sat_add(std::int64_t a, std::int64_t b) {
    if (a >= kExact || b >= kExact) return kExact;
    std::int64_t s = a + b;
    return s >= kExact ? kExact : s;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

template <class Ring>
class LaurentSeries {
   public:
    using Elem = typename Ring::Elem;
    using RingPtr = std::shared_ptr<const Ring>;

    LaurentSeries() = default;
    explicit LaurentSeries(RingPtr ring, std::int64_t prec = kExact) : ring_(std::move(ring)), prec_(prec) {}

    static LaurentSeries from_coeffs(RingPtr ring, std::int64_t val, std::vector<Elem> coeffs,
                                     std::int64_t prec = kExact) {
        LaurentSeries s(std::move(ring), prec);
        s.val_ = val;
        s.coeffs_ = std::move(coeffs);
        s.normalize();
        return s;
    }
    static LaurentSeries monomial(RingPtr ring, Elem c, std::int64_t e, std::int64_t prec = kExact) {
        return from_coeffs(std::move(ring), e, {c}, prec);
    }
    static LaurentSeries constant(RingPtr ring, Elem c) { return monomial(std::move(ring), c, 0); }
    /// The uniformizer t.
    static LaurentSeries t(RingPtr ring) {
        auto one = ring->one();
        return monomial(std::move(ring), one, 1);
    }
    /// Sparse constructor from exponent -> coefficient pairs.
    static LaurentSeries from_terms(RingPtr ring, const std::map<std::int64_t, Elem>& terms, std::int64_t prec = kExact) {
        if (terms.empty()) return LaurentSeries(std::move(ring), prec);
        std::int64_t lo = terms.begin()->first, hi = terms.rbegin()->first;
        std::vector<Elem> c(static_cast<std::size_t>(hi - lo + 1), ring->zero());
        for (const auto& [e, v] : terms) c[e - lo] = v;
        return from_coeffs(std::move(ring), lo, std::move(c), prec);
    }

    const RingPtr& ring() const { return ring_; }
    std::int64_t valuation() const { return coeffs_.empty() ? kInfinity : val_; }
    /// Lower bound for the valuation: the valuation, or prec when zero to precision.
    std::int64_t valuation_bound() const { return coeffs_.empty() ? prec_ : val_; }
    std::int64_t prec() const { return prec_; }
    bool is_exact() const { return prec_ >= kExact; }
    bool is_zero() const { return coeffs_.empty(); }
    std::int64_t last_exponent() const { return val_ + static_cast<std::int64_t>(coeffs_.size()) - 1; }
    const std::vector<Elem>& raw_coeffs() const { return coeffs_; }

    Elem coeff(std::int64_t e) const {
        require(e < prec_, ErrorKind::PrecisionExhausted,
                "coefficient of t^" + std::to_string(e) + " requested but series known only modulo t^" +
                    std::to_string(prec_));
        if (coeffs_.empty() || e < val_ || e > last_exponent()) return ring_->zero();
        return coeffs_[static_cast<std::size_t>(e - val_)];
    }
    Elem leading() const {
        require(!coeffs_.empty(), ErrorKind::ZeroInput, "leading coefficient of a series that is zero to precision");
        return coeffs_.front();
    }

    /// Forget everything from t^N on.
    LaurentSeries truncated(std::int64_t N) const {
        LaurentSeries s = *this;
        s.prec_ = std::min(prec_, N);
        s.normalize();
        return s;
    }
    /// Drop the precision claim: treat the stored coefficients as an exact Laurent polynomial.
    LaurentSeries as_exact_polynomial() const {
        LaurentSeries s = *this;
        s.prec_ = kExact;
        s.normalize();
        return s;
    }
    /// Multiply by t^k.
    LaurentSeries shifted(std::int64_t k) const {
        LaurentSeries s = *this;
        s.val_ += k;
        s.prec_ = sat_add(prec_, k);
        return s;
    }
    LaurentSeries scaled(Elem c) const {
        LaurentSeries s = *this;
        for (auto& x : s.coeffs_) x = ring_->mul(x, c);
        s.normalize();
        return s;
    }
    LaurentSeries mapped(const std::function<Elem(const Elem&)>& fn) const {
        LaurentSeries s = *this;
        for (auto& x : s.coeffs_) x = fn(x);
        s.normalize();
        return s;
    }

    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return combine(a, b, false); }
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return combine(a, b, true); }
    friend LaurentSeries operator-(const LaurentSeries& a) {
        LaurentSeries s = a;
        for (auto& x : s.coeffs_) x = a.ring_->neg(x);
        return s;
    }

    /// Same precision and the same stored coefficients.
    friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
        if (a.prec_ != b.prec_ || a.coeffs_.size() != b.coeffs_.size()) return false;
        if (a.coeffs_.empty()) return true;
        if (a.val_ != b.val_) return false;
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            if (!a.ring_->equal(a.coeffs_[i], b.coeffs_[i])) return false;
        return true;
    }
    friend std::ostream& operator<<(std::ostream& os, const LaurentSeries& s) {
        os << "series(val=" << s.valuation() << ", prec=" << s.prec_ << ", terms=" << s.coeffs_.size() << ")";
        return os;
    }

    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
        const auto& R = *a.ring_;
        std::int64_t prec = std::min(sat_add(a.prec_, b.valuation_bound()), sat_add(b.prec_, a.valuation_bound()));
        LaurentSeries out(a.ring_, prec);
        if (a.is_zero() || b.is_zero()) return out;
        std::int64_t lo = a.val_ + b.val_;
        std::int64_t hi = a.last_exponent() + b.last_exponent();
        if (prec < kExact) hi = std::min(hi, prec - 1);
        if (hi < lo) return out;
        std::vector<Elem> c(static_cast<std::size_t>(hi - lo + 1), R.zero());
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            const Elem& x = a.coeffs_[i];
            if (R.is_zero(x)) continue;
            std::int64_t base = a.val_ + static_cast<std::int64_t>(i) + b.val_;
            if (base > hi) break;
            std::size_t jmax = std::min(b.coeffs_.size(), static_cast<std::size_t>(hi - base + 1));
            for (std::size_t j = 0; j < jmax; ++j) {
                const Elem& y = b.coeffs_[j];
                if (R.is_zero(y)) continue;
                auto& dst = c[static_cast<std::size_t>(base - lo) + j];
                dst = R.add(dst, R.mul(x, y));
            }
        }
        out.val_ = lo;
        out.coeffs_ = std::move(c);
        out.normalize();
        return out;
    }

    LaurentSeries& operator+=(const LaurentSeries& o) { return *this = *this + o; }
    LaurentSeries& operator-=(const LaurentSeries& o) { return *this = *this - o; }
    LaurentSeries& operator*=(const LaurentSeries& o) { return *this = *this * o; }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (ring_->is_zero(coeffs_[i])) continue;
            if (!first) os << " + ";
            first = false;
            os << "(" << elem_string(coeffs_[i]) << ")*t^" << (val_ + static_cast<std::int64_t>(i));
        }
        if (first) os << "0";
        if (!is_exact()) os << " + O(t^" << prec_ << ")";
        return os.str();
    }

   private:
    std::string elem_string(const Elem& e) const {
        if constexpr (std::is_same_v<Ring, FiniteField>) {
            return ring_->to_string(e);
        } else {
            std::ostringstream os;
            os << "[";
            for (int i = 0; i < ring_->field()->f(); ++i) os << (i ? "," : "") << e.c[i];
            os << "]";
            return os.str();
        }
    }

    static LaurentSeries combine(const LaurentSeries& a, const LaurentSeries& b, bool subtract) {
        const auto& R = *a.ring_;
        std::int64_t prec = std::min(a.prec_, b.prec_);
        LaurentSeries out(a.ring_, prec);
        if (a.is_zero() && b.is_zero()) return out;
        std::int64_t lo = std::min(a.is_zero() ? kInfinity : a.val_, b.is_zero() ? kInfinity : b.val_);
        std::int64_t hi = std::max(a.is_zero() ? -kInfinity : a.last_exponent(), b.is_zero() ? -kInfinity : b.last_exponent());
        if (prec < kExact) hi = std::min(hi, prec - 1);
        if (hi < lo) return out;
        std::vector<Elem> c(static_cast<std::size_t>(hi - lo + 1), R.zero());
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            std::int64_t e = a.val_ + static_cast<std::int64_t>(i);
            if (e > hi) break;
            c[e - lo] = a.coeffs_[i];
        }
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) {
            std::int64_t e = b.val_ + static_cast<std::int64_t>(i);
            if (e > hi) break;
            auto& dst = c[e - lo];
            dst = subtract ? R.sub(dst, b.coeffs_[i]) : R.add(dst, b.coeffs_[i]);
        }
        out.val_ = lo;
        out.coeffs_ = std::move(c);
        out.normalize();
        return out;
    }

    void normalize() {
        const auto& R = *ring_;
        if (prec_ < kExact && !coeffs_.empty()) {
            std::int64_t keep = prec_ - val_;
            if (keep <= 0)
                coeffs_.clear();
            else if (static_cast<std::int64_t>(coeffs_.size()) > keep)
                coeffs_.resize(static_cast<std::size_t>(keep));
        }
        std::size_t first = 0;
        while (first < coeffs_.size() && R.is_zero(coeffs_[first])) ++first;
        if (first == coeffs_.size()) {
            coeffs_.clear();
            val_ = 0;
            return;
        }
        if (first > 0) {
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(first));
            val_ += static_cast<std::int64_t>(first);
        }
        while (!coeffs_.empty() && R.is_zero(coeffs_.back())) coeffs_.pop_back();
    }

    RingPtr ring_;
    std::int64_t val_ = 0;
    std::vector<Elem> coeffs_;
    std::int64_t prec_ = kExact;
};

using FqSeries = LaurentSeries<FiniteField>;
using ZqSeries = LaurentSeries<WittCoeffRing>;

/// True when a - b vanishes to the shared known precision.
template <class Ring>
bool agree(const LaurentSeries<Ring>& a, const LaurentSeries<Ring>& b) {
    return (a - b).is_zero();
}

/**
 * Inverse of a series whose leading coefficient is a unit. The result is computed to relative
 * precision min(rel, prec(s) - val(s)); an exact monomial inverts exactly. An exact series with
 * several terms needs a finite rel.
 */
template <class Ring>
LaurentSeries<Ring> inverse(const LaurentSeries<Ring>& s, std::int64_t rel = kExact) {
    const auto& R = *s.ring();
    require(!s.is_zero(), ErrorKind::DivisionByZero, "inverse of a series that is zero to precision");
    require(R.is_unit(s.leading()), ErrorKind::NonUnitLeadingCoefficient, "leading coefficient is not a unit");
    std::int64_t v = s.valuation();
    const auto& c = s.raw_coeffs();
    if (s.is_exact() && c.size() == 1)
        return LaurentSeries<Ring>::monomial(s.ring(), R.inv(c[0]), -v, kExact);
    std::int64_t avail = s.is_exact() ? kExact : s.prec() - v;
    std::int64_t R_rel = std::min(rel, avail);
    require(R_rel < kExact, ErrorKind::PrecisionExhausted, "inverse of an exact non-monomial needs a finite precision");
    if (R_rel <= 0) return LaurentSeries<Ring>(s.ring(), -v + R_rel);
    std::vector<typename Ring::Elem> b(static_cast<std::size_t>(R_rel), R.zero());
    auto c0inv = R.inv(c[0]);
    b[0] = c0inv;
    for (std::int64_t k = 1; k < R_rel; ++k) {
        auto acc = R.zero();
        std::int64_t jmax = std::min<std::int64_t>(k, static_cast<std::int64_t>(c.size()) - 1);
        for (std::int64_t j = 1; j <= jmax; ++j) {
            if (R.is_zero(c[j])) continue;
            acc = R.add(acc, R.mul(c[j], b[k - j]));
        }
        b[k] = R.neg(R.mul(c0inv, acc));
    }
    return LaurentSeries<Ring>::from_coeffs(s.ring(), -v, std::move(b), -v + R_rel);
}

/// a / b with the inverse of b taken to relative precision rel.
template <class Ring>
LaurentSeries<Ring> divide(const LaurentSeries<Ring>& a, const LaurentSeries<Ring>& b, std::int64_t rel = kExact) {
    return a * inverse(b, rel);
}

template <class Ring>
LaurentSeries<Ring> power(const LaurentSeries<Ring>& s, std::int64_t e, std::int64_t rel = kExact) {
    if (e < 0) return power(inverse(s, rel), -e, rel);
    auto result = LaurentSeries<Ring>::constant(s.ring(), s.ring()->one());
    auto base = s;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return result;
}

/// d/dt; a series known modulo t^N has derivative known modulo t^{N-1}.
template <class Ring>
LaurentSeries<Ring> derivative(const LaurentSeries<Ring>& s) {
    const auto& R = *s.ring();
    std::int64_t prec = s.is_exact() ? kExact : s.prec() - 1;
    if (s.is_zero()) return LaurentSeries<Ring>(s.ring(), prec);
    std::vector<typename Ring::Elem> c(s.raw_coeffs().size(), R.zero());
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::int64_t e = s.valuation() + static_cast<std::int64_t>(i);
        c[i] = R.mul(R.from_int(e), s.raw_coeffs()[i]);
    }
    return LaurentSeries<Ring>::from_coeffs(s.ring(), s.valuation() - 1, std::move(c), prec);
}

template <class Ring>
LaurentSeries<Ring> derivative(const LaurentSeries<Ring>& s, int times) {
    auto out = s;
    for (int i = 0; i < times; ++i) out = derivative(out);
    return out;
}

/// Coefficient of t^{-1}.
template <class Ring>
typename Ring::Elem residue(const LaurentSeries<Ring>& s) {
    return s.coeff(-1);
}

/// Logarithmic derivative u'/u, the inverse of u taken to relative precision rel.
template <class Ring>
LaurentSeries<Ring> dlog(const LaurentSeries<Ring>& u, std::int64_t rel) {
    require(!u.is_zero(), ErrorKind::ZeroArgument, "logarithmic derivative of zero");
    return derivative(u) * inverse(u, rel);
}

/**
 * g(b) for g a Laurent series in x and b a series in t of positive valuation. The result is
 * known modulo t^target at most, and modulo t^{n * prec(g)} when g is inexact.
 */
template <class Ring>
LaurentSeries<Ring> compose(const LaurentSeries<Ring>& g, const LaurentSeries<Ring>& b, std::int64_t target) {
    require(!b.is_zero(), ErrorKind::InconsistentInput, "cannot substitute zero");
    std::int64_t n = b.valuation();
    require(n >= 1, ErrorKind::InconsistentInput, "substituted series must have positive valuation");
    require(target < kExact, ErrorKind::PrecisionExhausted, "composition needs a finite target precision");
    std::int64_t out_prec = target;
    if (!g.is_exact()) out_prec = std::min(out_prec, g.prec() * n);
    LaurentSeries<Ring> acc(g.ring(), out_prec);
    if (g.is_zero()) return acc;
    std::int64_t k0 = g.valuation();
    std::int64_t k1 = g.is_exact() ? g.last_exponent() : std::min(g.last_exponent(), g.prec() - 1);
    // b^{k0} to the needed relative precision, then multiply up by b.
    auto bt = b.truncated(target + n * std::max<std::int64_t>(0, -k0) + n + 1);
    LaurentSeries<Ring> pw = (k0 >= 0) ? power(bt, k0) : power(bt, k0, out_prec - n * k0);
    pw = pw.truncated(out_prec);
    for (std::int64_t k = k0; k <= k1; ++k) {
        if (n * k >= out_prec) break;
        auto c = g.coeff(k);
        if (!g.ring()->is_zero(c)) acc = acc + pw.scaled(c).truncated(out_prec);
        pw = (pw * bt).truncated(out_prec);
    }
    return acc.truncated(out_prec);
}

/// s(t (1 + theta t^r)), known modulo t^min(target, prec(s)).
template <class Ring>
LaurentSeries<Ring> substitute_dilated(const LaurentSeries<Ring>& s, std::int64_t r, typename Ring::Elem theta,
                                       std::int64_t target) {
    require(r >= 1, ErrorKind::InconsistentInput, "dilation exponent must be positive");
    std::map<std::int64_t, typename Ring::Elem> terms{{1, s.ring()->one()}, {r + 1, theta}};
    auto u = LaurentSeries<Ring>::from_terms(s.ring(), terms);
    return compose(s, u, target);
}

/**
 * Decomposition s = sum_{i<n} t^i g_i(b) modulo t^target, where b has valuation n >= 1.
 * Each g_i is returned as a series in the base variable x, known modulo x^{ceil((T - i) / n)}
 * with T = min(target, prec(s)).
 */
template <class Ring>
std::vector<LaurentSeries<Ring>> decompose_over_base(const LaurentSeries<Ring>& s, const LaurentSeries<Ring>& b,
                                                     std::int64_t target) {
    const auto& R = *s.ring();
    require(!b.is_zero() && b.valuation() >= 1, ErrorKind::InconsistentInput, "base uniformizer must have positive valuation");
    require(R.is_unit(b.leading()), ErrorKind::NonUnitLeadingCoefficient, "base uniformizer leading coefficient must be a unit");
    std::int64_t n = b.valuation();
    std::int64_t T = std::min(target, s.prec());
    require(T < kExact, ErrorKind::PrecisionExhausted, "decomposition needs a finite target precision");
    std::vector<std::map<std::int64_t, typename Ring::Elem>> g(static_cast<std::size_t>(n));
    std::map<std::int64_t, LaurentSeries<Ring>> bpow;
    auto lb = b.leading();
    auto get_pow = [&](std::int64_t k) -> const LaurentSeries<Ring>& {
        auto it = bpow.find(k);
        if (it != bpow.end()) return it->second;
        LaurentSeries<Ring> pw = (k >= 0) ? power(b.truncated(T + 1), k) : power(b, k, T - n * k + 1);
        return bpow.emplace(k, pw.truncated(T + n)).first->second;
    };
    auto rem = s.truncated(T);
    std::int64_t guard = 0;
    while (!rem.is_zero() && rem.valuation() < T) {
        require(++guard < 1000000, ErrorKind::PrecisionExhausted, "decomposition did not terminate");
        std::int64_t v = rem.valuation();
        std::int64_t k = floor_div(v, n);
        std::int64_t i = v - n * k;
        auto c = R.mul(rem.leading(), R.inv(power(LaurentSeries<Ring>::constant(s.ring(), lb), k).leading()));
        auto& slot = g[static_cast<std::size_t>(i)][k];
        slot = R.add(slot, c);
        rem = (rem - get_pow(k).shifted(i).scaled(c)).truncated(T);
    }
    std::vector<LaurentSeries<Ring>> out;
    for (std::int64_t i = 0; i < n; ++i)
        out.push_back(LaurentSeries<Ring>::from_terms(s.ring(), g[static_cast<std::size_t>(i)], ceil_div(T - i, n)));
    return out;
}

/// Coefficient-wise image under a ring map.
template <class RingA, class RingB, class Fn>
LaurentSeries<RingB> map_coeffs(const LaurentSeries<RingA>& s, std::shared_ptr<const RingB> target, Fn&& fn) {
    std::vector<typename RingB::Elem> c;
    c.reserve(s.raw_coeffs().size());
    for (const auto& x : s.raw_coeffs()) c.push_back(fn(x));
    return LaurentSeries<RingB>::from_coeffs(std::move(target), s.valuation_bound(), std::move(c), s.prec());
}

inline FqSeries embed_series(const FqSeries& s, const FieldEmbedding& e) {
    return map_coeffs(s, e.target(), [&](Fq x) { return e(x); });
}

/// Coefficient-wise lift into the truncated Witt coefficient ring.
inline ZqSeries lift_series(const FqSeries& s, const CoeffRingPtr& ring) {
    return map_coeffs(s, ring, [&](Fq x) { return ring->lift(x); });
}

inline FqSeries reduce_series(const ZqSeries& s) {
    const auto& ring = s.ring();
    return map_coeffs(s, ring->field(), [&](const Zq& x) { return ring->reduce(x); });
}

/// ord(t s'/s), the refined valuation used for Legendre data; kInfinity when s' vanishes.
inline std::int64_t nu(const FqSeries& s) {
    require(!s.is_zero(), ErrorKind::ZeroInput, "nu of zero");
    auto d = derivative(s);
    if (d.is_zero()) {
        require(d.is_exact(), ErrorKind::PrecisionExhausted, "derivative vanishes only to the known precision");
        return kInfinity;
    }
    return d.valuation() + 1 - s.valuation();
}

}  // namespace lftcalc
