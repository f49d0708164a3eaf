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
 * @file characters.hpp
 * @brief Rank-one quasi-characters of F_q((t))^x, additive characters psi_omega, the explicit
 * reciprocity pairing, Hilbert symbols and Kummer characters.
 *
 * Conventions. Values live in Q(zeta_N) with N = 2 p^{m+1} (q-1). psi_m(x) = zeta_{p^{m+1}}^x and
 * psi_0 = psi_m restricted to p^m Z/p^{m+1}; psi_k = psi_0 o Tr. A character chi with tame exponent
 * e, uniformizer value s and wild vector a sends u = t^v u_0 to
 *     s^v * zeta_{q-1}^{e dlog(u_0 mod t)} * psi_m^{-1}([a, u)_m),
 * where [z, u)_m = -Tr res(w_m(z~) dlog u~). The Artin-Schreier character of g is the length-one
 * wild vector (g).
 */

#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <vector>

#include "lftcalc/cyclo.hpp"
#include "lftcalc/fields.hpp"
#include "lftcalc/series.hpp"
#include "lftcalc/witt.hpp"

namespace lftcalc {

/// Pairing from explicit lifts: -Tr res(w_m(z~) dlog u~) with u~ = t^v u0~ and u0~ a unit lift.
inline std::int64_t witt_pairing_lifted(const std::vector<ZqSeries>& z_lifts, std::int64_t v, const ZqSeries& u0_lift) {
    const auto& R = u0_lift.ring();
    std::int64_t pm = R->modulus_power();
    require(!u0_lift.is_zero() && u0_lift.valuation() == 0 && R->is_unit(u0_lift.leading()), ErrorKind::ZeroArgument,
            "unit part of the lift must be a unit");
    auto w = ghost_of_lifts(z_lifts);
    if (w.is_zero() && w.is_exact()) return 0;
    // res(w * dlog u0) only sees dlog u0 modulo t^{-ord w}.
    std::int64_t need = w.is_zero() ? 1 : std::max<std::int64_t>(1, -w.valuation() + 1);
    auto dl = dlog(u0_lift.truncated(need + 1), need);
    auto prod = w * dl;
    require(prod.prec() > -1, ErrorKind::PrecisionExhausted, "residue of the pairing is not determined by the inputs");
    Zq res = residue(prod);
    if (v != 0) {
        require(w.prec() > 0, ErrorKind::PrecisionExhausted, "constant term of the ghost component is not determined");
        res = R->add(res, R->scale(w.coeff(0), v));
    }
    return mod(-R->trace(res), pm);
}

/// [z, u)_m in Z/p^{m+1}, using the digit lifts of z and of the unit part of u.
inline std::int64_t witt_pairing(const WittVector& z, const FqSeries& u) {
    require(!u.is_zero(), ErrorKind::ZeroArgument, "pairing with zero");
    auto R = WittCoeffRing::make(z.field(), z.m());
    std::vector<ZqSeries> lifts;
    for (const auto& e : z.entries) lifts.push_back(lift_series(e, R));
    std::int64_t v = u.valuation();
    return witt_pairing_lifted(lifts, v, lift_series(u.shifted(-v), R));
}

/// Additive character psi_omega(x) = psi_k(res(x omega)) with omega = g dt.
class AdditiveCharacter {
   public:
    explicit AdditiveCharacter(FqSeries g) : g_(std::move(g)) {
        require(!g_.is_zero(), ErrorKind::ZeroArgument, "differential form must be nonzero");
    }
    static AdditiveCharacter dt(const FieldPtr& F) { return AdditiveCharacter(FqSeries::constant(F, F->one())); }

    const FqSeries& g() const { return g_; }
    const FieldPtr& field() const { return g_.ring(); }
    /// ord(psi) = ord(omega).
    std::int64_t order() const { return g_.valuation(); }
    /// beta = t g, so that omega = beta dlog t.
    FqSeries gauge() const { return g_.shifted(1); }

    /// Tr res(x g) in F_p.
    std::int64_t exponent(const FqSeries& x) const {
        auto prod = x * g_;
        require(prod.prec() > -1, ErrorKind::PrecisionExhausted, "residue of x omega is not determined");
        return field()->trace(residue(prod));
    }
    CycloNumber operator()(const FqSeries& x) const {
        return CycloNumber::root_of_unity(static_cast<int>(field()->p()), exponent(x));
    }

   private:
    FqSeries g_;
};

struct Conductor {
    std::int64_t a = 0;   ///< Artin conductor
    std::int64_t sw = 0;  ///< Swan conductor
    friend bool operator==(const Conductor&, const Conductor&) = default;
    friend std::ostream& operator<<(std::ostream& os, const Conductor& c) {
        return os << "(a=" << c.a << ", sw=" << c.sw << ")";
    }
};

/// chi = (unramified twist) * (tame character of the units) * (psi_m^{-1} o [a, .)_m).
class QuasiCharacter {
   public:
    QuasiCharacter(FieldPtr field, std::int64_t tame_exponent, CycloNumber uniformizer_value, WittVector wild)
        : field_(std::move(field)),
          e_(mod(tame_exponent, field_->q() - 1)),
          s_(std::move(uniformizer_value)),
          wild_(std::move(wild)),
          memo_(std::make_shared<Memo>()) {
        require(!s_.is_zero(), ErrorKind::ZeroArgument, "uniformizer value must be nonzero");
        require(wild_.length() >= 1, ErrorKind::LengthMismatch, "wild part needs at least one entry");
        require(wild_.field() == field_, ErrorKind::IncompatibleLevels, "wild part lives over another field");
    }

    static QuasiCharacter trivial(const FieldPtr& F) { return unramified(F, CycloNumber::one(1)); }
    static QuasiCharacter unramified(const FieldPtr& F, CycloNumber s) {
        return QuasiCharacter(F, 0, std::move(s), WittVector::zero(F, 0));
    }
    static QuasiCharacter tame(const FieldPtr& F, std::int64_t e, CycloNumber s) {
        return QuasiCharacter(F, e, std::move(s), WittVector::zero(F, 0));
    }
    static QuasiCharacter artin_schreier(const FqSeries& g) {
        return QuasiCharacter(g.ring(), 0, CycloNumber::one(1), WittVector{{g}});
    }
    static QuasiCharacter wild(const WittVector& a) {
        return QuasiCharacter(a.field(), 0, CycloNumber::one(1), a);
    }

    const FieldPtr& field() const { return field_; }
    std::int64_t tame_exponent() const { return e_; }
    const CycloNumber& uniformizer_value() const { return s_; }
    const WittVector& wild_part() const { return wild_; }
    int m() const { return wild_.m(); }
    int value_level() const { return lftcalc::value_level(field_->p(), field_->q(), m()); }

    /// Reduced representative of the wild part, computed once and shared between copies.
    const ReductionResult& reduction() const {
        std::call_once(memo_->once, [&] { memo_->result = reduce(wild_); });
        return *memo_->result;
    }
    const WittVector& reduced_wild() const { return reduction().reduced; }

    std::int64_t swan() const {
        const auto& r = reduced_wild();
        return r.is_zero() ? 0 : fil_level(r);
    }
    Conductor conductor() const {
        std::int64_t sw = swan();
        if (sw > 0) return {sw + 1, sw};
        return {e_ == 0 ? 0 : 1, 0};
    }
    bool is_unramified() const { return conductor().a == 0; }
    bool is_wild() const { return conductor().a >= 2; }

    /// Exponent k with chi(u) = zeta_N^k for a unit u.
    std::int64_t unit_exponent(const FqSeries& u) const {
        require(!u.is_zero(), ErrorKind::ZeroArgument, "character evaluated at zero");
        require(u.valuation() == 0, ErrorKind::InconsistentInput, "unit_exponent expects a unit");
        int N = value_level();
        std::int64_t q1 = field_->q() - 1, pm = ipow(field_->p(), m() + 1);
        std::int64_t k = mod(e_ * field_->dlog(u.leading()), q1) * (N / q1);
        std::int64_t w = wild_.is_zero() ? 0 : witt_pairing(wild_, u);
        return mod(k - w * (N / pm), N);
    }

    CycloNumber operator()(const FqSeries& u) const {
        require(!u.is_zero(), ErrorKind::ZeroArgument, "character evaluated at zero");
        std::int64_t v = u.valuation();
        int N = value_level();
        std::int64_t pm = ipow(field_->p(), m() + 1);
        std::int64_t w = wild_.is_zero() ? 0 : witt_pairing(wild_, u);
        std::int64_t q1 = field_->q() - 1;
        std::int64_t k = mod(e_ * field_->dlog(u.leading()), q1) * (N / q1) - w * (N / pm);
        return s_.pow(v) * CycloNumber::root_of_unity(N, mod(k, N));
    }
    /// chi(t): the uniformizer value times the wild contribution at t.
    CycloNumber at_uniformizer() const { return (*this)(FqSeries::t(field_)); }

    QuasiCharacter inverse() const {
        return QuasiCharacter(field_, -e_, s_.inv(), witt_neg(wild_));
    }

   private:
    struct Memo {
        std::once_flag once;
        std::optional<ReductionResult> result;
    };
    FieldPtr field_;
    std::int64_t e_;
    CycloNumber s_;
    WittVector wild_;
    std::shared_ptr<Memo> memo_;
};

/// Pointwise product; the shorter wild vector is pushed up by V before adding.
inline QuasiCharacter tensor(const QuasiCharacter& a, const QuasiCharacter& b) {
    require(a.field() == b.field(), ErrorKind::IncompatibleLevels, "characters over different fields");
    int m = std::max(a.m(), b.m());
    auto wa = verschiebung(a.wild_part(), m - a.m());
    auto wb = verschiebung(b.wild_part(), m - b.m());
    return QuasiCharacter(a.field(), a.tame_exponent() + b.tame_exponent(), a.uniformizer_value() * b.uniformizer_value(),
                          witt_add(wa, wb));
}

/// Tame-symbol Hilbert symbol (x, y) for odd residue characteristic.
inline int hilbert_symbol(const FqSeries& x, const FqSeries& y) {
    require(!x.is_zero() && !y.is_zero(), ErrorKind::ZeroArgument, "Hilbert symbol of zero");
    const auto& F = x.ring();
    std::int64_t vx = x.valuation(), vy = y.valuation();
    Fq val = F->mul(F->pow(x.leading(), vy), F->pow(y.leading(), -vx));
    if ((vx * vy) % 2 != 0) val = F->neg(val);
    return F->kappa0(val);
}

/**
 * The quadratic character u -> (f, u). On units it is kappa_0^{v(f)}; at t it is
 * kappa_0((-1)^{v(f)} lc(f)).
 */
inline QuasiCharacter kummer_char(const FqSeries& f) {
    require(!f.is_zero(), ErrorKind::ZeroArgument, "Kummer character of zero");
    const auto& F = f.ring();
    std::int64_t v = f.valuation();
    std::int64_t e = (v % 2 != 0) ? (F->q() - 1) / 2 : 0;
    Fq lead = (v % 2 != 0) ? F->neg(f.leading()) : f.leading();
    return QuasiCharacter::tame(F, e, CycloNumber::from_int(1, F->kappa0(lead)));
}

}  // namespace lftcalc
