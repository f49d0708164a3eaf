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

/// @file lft.hpp
/// @brief Legendre triples, local Fourier transform descriptors, dimension bookkeeping and the
/// Laumon product check.

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lftcalc/characters.hpp"
#include "lftcalc/cyclo.hpp"
#include "lftcalc/epsilon.hpp"
#include "lftcalc/error.hpp"
#include "lftcalc/fields.hpp"
#include "lftcalc/random.hpp"
#include "lftcalc/series.hpp"
#include "lftcalc/witt.hpp"

namespace lftcalc {

// ---------------------------------------------------------------------------------------------
// Legendre triples
// ---------------------------------------------------------------------------------------------

/// Outcome of check_legendre. `violated` names the first failing condition and is empty on success.
struct LegendreCheck {
    bool ok = false;
    std::int64_t n = 0;
    std::int64_t nu_b = 0;
    std::int64_t nu_c = 0;
    bool even_gap = false;  ///< n - nu(c) is even
    std::string violated;
    std::vector<std::string> diagnostics;
};

namespace detail {

inline std::int64_t exact_order(const FqSeries& s) {
    if (s.is_zero()) {
        require(s.is_exact(), ErrorKind::PrecisionExhausted, "series vanishes only to the known precision");
        return kInfinity;
    }
    return s.valuation();
}

inline bool finite(std::int64_t v) { return v < kInfinity; }

}  // namespace detail

/// Evaluates the three Legendre conditions for (a, b, c) exactly.
inline LegendreCheck check_legendre(const WittVector& a, const FqSeries& b, const FqSeries& c) {
    require(!b.is_zero() && !c.is_zero(), ErrorKind::ZeroArgument, "b and c must be nonzero");
    LegendreCheck out;
    auto alpha = fmd(a);
    std::int64_t p = a.field()->p();
    out.nu_b = nu(b);
    out.nu_c = nu(c);
    if (alpha.is_zero()) {
        out.n = 0;
        out.violated = "n_positive";
        out.diagnostics.push_back("F^m d(a) vanishes, so a defines no wild level");
        return out;
    }
    out.n = -(alpha.valuation() + 1);
    std::int64_t n = out.n;
    out.even_gap = detail::finite(out.nu_c) && (n - out.nu_c) % 2 == 0;
    auto fail_with = [&](const std::string& name, const std::string& why) {
        out.violated = name;
        out.diagnostics.push_back(why);
        return out;
    };
    if (n < 1) return fail_with("n_positive", "n = " + std::to_string(n) + " is not positive");
    if (!in_fil(a, n)) return fail_with("fil_membership", "a is not in fil_" + std::to_string(n));
    std::int64_t gap = detail::exact_order(alpha + c * derivative(b));
    if (!detail::finite(out.nu_c)) {
        if (detail::finite(gap)) return fail_with("stationary_inequality", "nu(c) is infinite");
    } else if (detail::finite(gap) && 2 * gap < -n + out.nu_c) {
        return fail_with("stationary_inequality", "2 ord(alpha + c b') = " + std::to_string(2 * gap) + " < " +
                                                      std::to_string(-n + out.nu_c));
    }
    if (!detail::finite(out.nu_b) || !detail::finite(out.nu_c) || 2 * out.nu_b + p * out.nu_c >= (p - 2) * n)
        return fail_with("convexity_inequality", "2 nu(b) + p nu(c) is not below (p-2) n");
    out.ok = true;
    return out;
}

/// A validated Legendre triple with its conductor (n, nu(b), nu(c)).
struct LegendreTriple {
    WittVector a;
    FqSeries b;
    FqSeries c;
    std::int64_t n = 0;
    std::int64_t nu_b = 0;
    std::int64_t nu_c = 0;

    static LegendreTriple make(WittVector a, FqSeries b, FqSeries c) {
        auto chk = check_legendre(a, b, c);
        require(chk.ok, ErrorKind::NotLegendre,
                "not a Legendre triple: " + chk.violated +
                    (chk.diagnostics.empty() ? std::string() : " (" + chk.diagnostics.front() + ")"));
        LegendreTriple t{std::move(a), std::move(b), std::move(c), chk.n, chk.nu_b, chk.nu_c};
        return t;
    }
    const FieldPtr& field() const { return b.ring(); }
    FqSeries alpha() const { return fmd(a); }
    bool even_gap() const { return (n - nu_c) % 2 == 0; }
};

/**
 * c = -alpha / b' truncated to the shortest polynomial that keeps 2 ord(alpha + c b') >= -n + nu(c).
 * The truncation keeps k terms with ord(alpha + c b') = -n - 1 + k.
 */
inline FqSeries stationary_c(const WittVector& a, const FqSeries& b) {
    require(!b.is_zero(), ErrorKind::ZeroArgument, "b must be nonzero");
    auto bp = derivative(b);
    require(!bp.is_zero(), ErrorKind::InseparableB, "b' vanishes");
    auto alpha = fmd(a);
    require(!alpha.is_zero(), ErrorKind::TameInput, "F^m d(a) vanishes; no stationary point");
    std::int64_t n = -(alpha.valuation() + 1);
    if (bp.is_exact() && bp.raw_coeffs().size() == 1) return -(alpha * inverse(bp));
    std::int64_t R = std::max<std::int64_t>(n, 1) + 4;
    auto c0 = -(alpha * inverse(bp, R));
    std::int64_t v = c0.valuation();
    auto d = derivative(c0);
    std::int64_t nu_c = d.is_zero() ? R : d.valuation() + 1 - v;
    std::int64_t k = std::max(ceil_div(n + nu_c, 2) + 1, nu_c + 1);
    if (k > R) c0 = -(alpha * inverse(bp, k + 1));
    require(c0.prec() - v >= k, ErrorKind::PrecisionExhausted, "stationary point not determined");
    return c0.truncated(v + k).as_exact_polynomial();
}

/// gamma = (1/2) lc(alpha) lc(c') / lc(c), the residue of (1/2) t^{n+1} alpha t^{1-nu(c)} c'/c.
inline Fq gamma(const LegendreTriple& T) {
    const auto& F = T.field();
    auto alpha = T.alpha();
    auto cp = derivative(T.c);
    require(-(alpha.valuation() + 1) == T.n, ErrorKind::NotLegendre, "ord(t alpha) differs from -n");
    require(!cp.is_zero() && cp.valuation() + 1 - T.c.valuation() == T.nu_c, ErrorKind::NotLegendre,
            "nu(c) inconsistent with c");
    Fq g = F->div(F->mul(alpha.leading(), cp.leading()), F->mul(F->from_int(2), T.c.leading()));
    require(!F->is_zero(g), ErrorKind::NotLegendre, "gamma vanishes");
    return g;
}

struct SquareClassReport {
    bool even_gap = false;
    Fq gamma{};
    std::int64_t order = 0;  ///< valuation of the tested element
    Fq leading{};            ///< its leading coefficient
    bool is_square = false;
};

/**
 * Tests that -c' / (2 b' gamma) (n - nu(c) even) or -t c' / (2 b' gamma) (odd) is a square in K.
 * Only the valuation and the leading coefficient matter in odd characteristic.
 */
inline SquareClassReport square_class_checks(const LegendreTriple& T) {
    const auto& F = T.field();
    SquareClassReport rep;
    rep.even_gap = T.even_gap();
    rep.gamma = gamma(T);
    auto cp = derivative(T.c);
    auto bp = derivative(T.b);
    rep.order = cp.valuation() - bp.valuation() + (rep.even_gap ? 0 : 1);
    rep.leading = F->neg(F->div(cp.leading(), F->mul(F->mul(F->from_int(2), bp.leading()), rep.gamma)));
    rep.is_square = rep.order % 2 == 0 && F->is_square(rep.leading);
    return rep;
}

/// f(t^2), used to move an odd gap n - nu(c) to an even one.
inline FqSeries substitute_square(const FqSeries& f) {
    require(f.is_exact(), ErrorKind::PrecisionExhausted, "base change expects exact input");
    std::map<std::int64_t, Fq> terms;
    for (std::size_t i = 0; i < f.raw_coeffs().size(); ++i)
        if (!f.ring()->is_zero(f.raw_coeffs()[i])) terms[2 * (f.valuation() + static_cast<std::int64_t>(i))] = f.raw_coeffs()[i];
    return FqSeries::from_terms(f.ring(), terms);
}

inline WittVector substitute_square(const WittVector& a) {
    WittVector out = a;
    for (auto& e : out.entries) e = substitute_square(e);
    return out;
}

// ---------------------------------------------------------------------------------------------
// Vanishing-cycle support
// ---------------------------------------------------------------------------------------------

struct SupportPoint {
    Fq y;                       ///< element of the splitting field
    std::int64_t multiplicity;  ///< ord_y(P)
    std::int64_t rho;           ///< -ord_y(P)
};

struct VanishingSupport {
    Fq lambda{};               ///< residue of t^{n+1} c b'
    std::int64_t ord_c = 0;
    std::int64_t ord_bprime = 0;
    FieldPtr split_field;      ///< F_{q^s} containing the |ord c|-th roots of unity
    std::vector<SupportPoint> points;
    std::int64_t rho_at_one = 0;
    std::int64_t total_degree = 0;  ///< sum of multiplicities of the zeros in G_m

    /// P(w) = lambda (1 - w^{ord c}) w^{ord b'} for w in the splitting field, w != 0.
    Fq evaluate(Fq w, const FieldEmbedding& emb) const {
        const auto& K = *split_field;
        Fq one = K.one();
        return K.mul(K.mul(emb(lambda), K.sub(one, K.pow(w, ord_c))), K.pow(w, ord_bprime));
    }
};

namespace detail {

/// Order of vanishing of the polynomial with coefficients poly (lowest degree first) at y.
inline std::int64_t root_order(std::vector<Fq> poly, Fq y, const FiniteField& K) {
    std::int64_t mult = 0;
    while (poly.size() > 1) {
        // Synthetic division by (w - y).
        std::vector<Fq> quo(poly.size() - 1, K.zero());
        Fq acc = K.zero();
        for (std::size_t i = poly.size(); i-- > 0;) {
            acc = K.add(K.mul(acc, y), poly[i]);
            if (i > 0) quo[i - 1] = acc;
        }
        if (!K.is_zero(acc)) break;
        ++mult;
        poly = std::move(quo);
    }
    return mult;
}

}  // namespace detail

/**
 * Zeros in G_m of P = lambda (1 - w^{ord c}) w^{ord b'} with their multiplicities, computed by
 * repeated division of w^{|ord c|} - 1 over the field generated by its roots.
 */
inline VanishingSupport vanishing_support(const WittVector& a, const FqSeries& b, const FqSeries& c) {
    const auto& F = b.ring();
    std::int64_t p = F->p();
    auto alpha = fmd(a);
    require(!alpha.is_zero(), ErrorKind::DegenerateOrder, "F^m d(a) vanishes");
    std::int64_t n = -(alpha.valuation() + 1);
    auto bp = derivative(b);
    require(!bp.is_zero(), ErrorKind::InseparableB, "b' vanishes");
    VanishingSupport out;
    out.ord_c = c.valuation();
    out.ord_bprime = bp.valuation();
    require(out.ord_c != 0, ErrorKind::DegenerateOrder, "ord(c) = 0");
    require(n + 1 + out.ord_c + out.ord_bprime == 0, ErrorKind::DegenerateOrder, "ord(t^{n+1} c b') is not zero");
    out.lambda = F->mul(c.leading(), bp.leading());
    std::int64_t e = out.ord_c < 0 ? -out.ord_c : out.ord_c;
    std::int64_t eprime = e;
    while (eprime % p == 0) eprime /= p;
    int s = 1;
    for (std::int64_t qs = F->q() % eprime; eprime > 1 && qs != 1 % eprime; qs = (qs * F->q()) % eprime) ++s;
    if (eprime == 1) s = 1;
    out.split_field = FiniteField::make(p, F->f() * s);
    const auto& K = *out.split_field;
    // Numerator of 1 - w^{ord c} up to a power of w: w^e - 1.
    std::vector<Fq> poly(static_cast<std::size_t>(e + 1), K.zero());
    poly[0] = K.neg(K.one());
    poly[static_cast<std::size_t>(e)] = K.one();
    std::int64_t step = (K.q() - 1) / eprime;
    for (std::int64_t j = 0; j < eprime; ++j) {
        Fq y = K.exp(j * step);
        std::int64_t mult = detail::root_order(poly, y, K);
        out.points.push_back({y, mult, -mult});
        out.total_degree += mult;
        if (y == K.one()) out.rho_at_one = -mult;
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Total dimensions and the Deligne-Kato count
// ---------------------------------------------------------------------------------------------

/// A point of the generic fiber: residue degree over K and Swan conductor.
struct HorizontalPoint {
    std::int64_t degree = 1;
    std::int64_t swan = 0;
};

/// A point of the special fiber, either with a smooth extension (dimtot = swan + 1) or ramified
/// with the form omega of the refined Swan conductor (dimtot = -ord(omega)).
struct VerticalPoint {
    bool extends = true;
    std::int64_t swan = 0;
    std::int64_t omega_order = 0;
};

struct DKInput {
    std::vector<HorizontalPoint> horizontal;
    std::vector<VerticalPoint> vertical;
    std::int64_t delta = 0;
};

inline std::int64_t dimtot(const HorizontalPoint& h) {
    require(h.degree >= 1 && h.swan >= 0, ErrorKind::InconsistentInput, "horizontal point data must be non-negative");
    return h.degree * (h.swan + 1);
}

inline std::int64_t dimtot(const VerticalPoint& v) {
    if (v.extends) {
        require(v.swan >= 0, ErrorKind::InconsistentInput, "negative Swan conductor");
        return v.swan + 1;
    }
    return -v.omega_order;
}

inline std::int64_t phi_eta(const DKInput& in) {
    std::int64_t s = 0;
    for (const auto& h : in.horizontal) s += dimtot(h);
    return s;
}

inline std::int64_t phi_s(const DKInput& in) {
    std::int64_t s = 0;
    for (const auto& v : in.vertical) s += dimtot(v);
    return s;
}

/// dim Psi^0 - dim Psi^1 = phi_s - phi_eta - 2 delta.
inline std::int64_t dk_dimension(const DKInput& in) {
    require(in.delta >= 0, ErrorKind::InconsistentInput, "delta must be non-negative");
    return phi_s(in) - phi_eta(in) - 2 * in.delta;
}

/// dim Psi^1 when Psi^0 is known to vanish.
inline std::int64_t psi1_dimension(const DKInput& in) {
    std::int64_t d = -dk_dimension(in);
    require(d >= 0, ErrorKind::InconsistentInput, "negative dimension: Psi^0 cannot vanish for this data");
    return d;
}

enum class SourcePoint { Finite, Infinity };
enum class TargetPoint { Zero, Infinity };

inline std::string to_string(SourcePoint z) { return z == SourcePoint::Finite ? "finite" : "infinity"; }
inline std::string to_string(TargetPoint z) { return z == TargetPoint::Zero ? "0" : "infinity"; }

/// rho(s, target): -ord_s(f^* dx) toward infinity, and 1 for (infinity, 0).
inline std::int64_t rho_point(SourcePoint z, TargetPoint target, std::int64_t ord_fdx) {
    if (target == TargetPoint::Infinity) return -ord_fdx;
    require(z == SourcePoint::Infinity, ErrorKind::InconsistentInput, "rho is tabulated at (infinity, 0) only");
    return 1;
}

enum class DimensionCase { FiniteToInfinity, InfinityToInfinity, InfinityToZero };

struct DimensionData {
    std::int64_t sw_G = 0;      ///< sw_s(G)
    std::int64_t ord_fdx = 0;   ///< ord_s(f^* dx)
    std::int64_t sw_theta = 0;  ///< Swan conductor of G_theta (x) L(x^ f_theta), cases two and three
};

/// The DKInput whose count gives dim Psi^1 in each of the three cases.
inline DKInput dimension_input(DimensionCase which, const DimensionData& d) {
    DKInput in;
    switch (which) {
        case DimensionCase::FiniteToInfinity:
            in.horizontal.push_back({1, d.sw_G});
            in.vertical.push_back({false, 0, -rho_point(SourcePoint::Finite, TargetPoint::Infinity, d.ord_fdx)});
            break;
        case DimensionCase::InfinityToInfinity:
            in.horizontal.push_back({1, d.sw_theta});
            in.vertical.push_back({false, 0, -rho_point(SourcePoint::Infinity, TargetPoint::Infinity, d.ord_fdx)});
            break;
        case DimensionCase::InfinityToZero:
            in.horizontal.push_back({1, d.sw_theta});
            in.vertical.push_back({true, d.sw_G, 0});
            break;
    }
    return in;
}

inline std::int64_t nearby_cycle_dimension(DimensionCase which, const DimensionData& d) {
    return psi1_dimension(dimension_input(which, d));
}

/// Rank, Swan conductor and slope set of a representation of the inertia group at the source.
struct SlopeData {
    std::int64_t sw = 0;
    std::int64_t rk = 0;
    std::vector<mpq_class> slopes;
};

/// Rank of the local Fourier transform from the five-row table.
inline std::int64_t lft_rank(SourcePoint z, TargetPoint target, const SlopeData& s) {
    require(s.sw >= 0 && s.rk >= 0, ErrorKind::InconsistentInput, "rank and Swan conductor must be non-negative");
    if (z == SourcePoint::Finite) {
        require(target == TargetPoint::Infinity, ErrorKind::InconsistentInput, "finite source points map to infinity");
        return s.sw + s.rk;
    }
    require(!s.slopes.empty() || s.rk == 0, ErrorKind::InconsistentInput, "slopes required at infinity");
    auto all = [&](auto pred) { return std::all_of(s.slopes.begin(), s.slopes.end(), pred); };
    const mpq_class one(1);
    if (target == TargetPoint::Infinity) {
        if (all([&](const mpq_class& x) { return x > one; })) return s.sw - s.rk;
        if (all([&](const mpq_class& x) { return x >= 0 && x <= one; })) return 0;
    } else {
        if (all([&](const mpq_class& x) { return x >= 0 && x < one; })) return s.rk - s.sw;
        if (all([&](const mpq_class& x) { return x >= one; })) return 0;
    }
    fail(ErrorKind::InconsistentInput, "slopes straddle the break of the rank table");
}

// ---------------------------------------------------------------------------------------------
// Local Fourier transform descriptor
// ---------------------------------------------------------------------------------------------

struct LFTDescriptor {
    SourcePoint source = SourcePoint::Finite;
    Fq source_value{};  ///< x(z) for a finite source point
    TargetPoint target = TargetPoint::Infinity;
    std::int64_t degree = 0;     ///< |ord c|
    QuasiCharacter pushed;       ///< chi (x) AS(bc) (x) K(-c'/(2b')) (x) unramified(-G)
    CycloNumber gauss_twist;     ///< -G, the uniformizer value of the unramified twist
    std::int64_t induced_sw = 0;  ///< sw(f_* chi) from the conductor of the induced representation
    std::int64_t induced_rk = 0;
    mpq_class slope;              ///< induced_sw / induced_rk (the common slope when f is tame)
    std::int64_t table_rank = 0;  ///< rank from the five-row table
};

/// Local parameter of K at the source point, pulled back to L.
inline FqSeries base_uniformizer(const FqSeries& b, SourcePoint z) {
    if (z == SourcePoint::Infinity) {
        require(b.valuation() < 0, ErrorKind::WrongSourcePoint, "b has no pole: the source point is finite");
        return inverse(b, -b.valuation() + 24);
    }
    require(b.valuation() >= 0, ErrorKind::WrongSourcePoint, "b has a pole: the source point is infinity");
    return b - FqSeries::constant(b.ring(), b.coeff(0));
}

inline LFTDescriptor lft_descriptor(const QuasiCharacter& chi, const FqSeries& b, const FqSeries& c, SourcePoint z) {
    const auto& F = chi.field();
    auto T = LegendreTriple::make(chi.wild_part(), b, c);
    require(chi.swan() == T.n, ErrorKind::NotLegendre, "sw(chi) differs from the level of the triple");
    TotallyRamifiedExt ext(base_uniformizer(b, z));
    LFTDescriptor d{z, z == SourcePoint::Finite ? b.coeff(0) : F->zero(), TargetPoint::Infinity, 0, chi,
                    CycloNumber::one(1), 0, 0, mpq_class(0), 0};
    d.induced_rk = ext.degree();
    d.induced_sw = induced_swan(ext, chi);
    d.slope = mpq_class(d.induced_sw, d.induced_rk);
    d.slope.canonicalize();
    if (z == SourcePoint::Infinity) {
        require(d.induced_rk % F->p() != 0, ErrorKind::SlopeConditionViolated,
                "wildly ramified f: slopes of f_* chi are not certified");
        require(d.slope != 1, ErrorKind::SlopeConditionViolated, "sw(f_* chi) = rk(f_* chi): neither slope condition holds");
        d.target = d.slope > 1 ? TargetPoint::Infinity : TargetPoint::Zero;
        require((c.valuation() < 0) == (d.target == TargetPoint::Infinity), ErrorKind::InconsistentInput,
                "ord(c) has the wrong sign for the slope side");
    } else {
        require(c.valuation() < 0, ErrorKind::InconsistentInput, "ord(c) must be negative at a finite source point");
    }
    d.degree = c.valuation() < 0 ? -c.valuation() : c.valuation();
    d.table_rank = lft_rank(z, d.target, SlopeData{d.induced_sw, d.induced_rk, {d.slope}});
    auto bp = derivative(b);
    auto cp = derivative(c);
    Fq klead = F->neg(F->div(cp.leading(), F->mul(F->from_int(2), bp.leading())));
    auto kummer = kummer_char(FqSeries::monomial(F, klead, cp.valuation() - bp.valuation()));
    d.gauss_twist = -quad_gauss(F);
    d.pushed = tensor(tensor(tensor(chi, QuasiCharacter::artin_schreier(b * c)), kummer),
                      QuasiCharacter::unramified(F, d.gauss_twist));
    return d;
}

// ---------------------------------------------------------------------------------------------
// Laumon's product formula
// ---------------------------------------------------------------------------------------------

struct LaumonReport {
    std::int64_t n = 0;        ///< sw(chi)
    std::int64_t i = 0;        ///< -ord(c)
    std::int64_t ord_bp = 0;   ///< ord(b')
    std::string branch;        ///< parities of ord(b') and n
    CycloNumber transform_side;   ///< the Fourier-side determinant in closed form
    CycloNumber transform_pushed;  ///< the same determinant assembled from the pushed character
    CycloNumber epsilon_side;     ///< eps_0(chi, psi_{db}) written through c
    CycloNumber lambda_side;      ///< lambda(L/K, psi_{dx}) written through b'
    CycloNumber product;          ///< transform_side * epsilon_side * lambda_side
    CycloNumber lhs;              ///< 1 / transform_pushed
    CycloNumber rhs;              ///< lambda_factor * epsilon0_wild
    bool product_identity = false;
    bool lhs_equals_rhs = false;
    std::optional<bool> oracle_match;
    std::string first_failure;  ///< empty when every check passes
};

inline LaumonReport verify_laumon(const QuasiCharacter& chi, const FqSeries& b, const FqSeries& c, bool use_oracle = false,
                                  std::int64_t oracle_cap = kDefaultOracleCap) {
    const auto& F = chi.field();
    require(F->p() != 2, ErrorKind::EvenCharacteristic, "p must be odd");
    require(!b.is_zero() && b.valuation() >= 1, ErrorKind::WrongSourcePoint, "the source point must be 0: ord(b) >= 1");
    auto T = LegendreTriple::make(chi.wild_part(), b, c);
    require(chi.swan() == T.n, ErrorKind::NotLegendre, "sw(chi) differs from the level of the triple");
    LaumonReport rep;
    rep.n = T.n;
    rep.i = -c.valuation();
    auto bp = derivative(b);
    auto cp = derivative(c);
    rep.ord_bp = bp.valuation();
    rep.branch = std::string(rep.ord_bp % 2 == 0 ? "ordb'-even" : "ordb'-odd") + "/" + (rep.n % 2 == 0 ? "n-even" : "n-odd");
    require(1 + rep.ord_bp - rep.i == -rep.n, ErrorKind::NotLegendre, "ord(t b' c) differs from -n");

    const auto t = FqSeries::t(F);
    auto sign = [&](std::int64_t e) { return (mod(e, 2) != 0 && kappa0_minus_one(F) == -1) ? -1 : 1; };
    auto as_cyclo = [](int s) { return CycloNumber::from_int(1, s); };
    AdditiveCharacter psi_db(bp);
    CycloNumber chi_c = chi(c);
    CycloNumber psi_c = psi_db(c);
    auto two = FqSeries::constant(F, F->from_int(2));

    // Fourier side, closed form.
    rep.transform_side = as_cyclo(sign(binom2(rep.i)) * hilbert_symbol(c, -(two * bp.shifted(rep.i)))) * chi_c *
                         psi_c.inv() * quad_gauss_power(F, -rep.i);
    // Fourier side, from the pushed character and the discriminant term.
    auto D = lft_descriptor(chi, b, c, SourcePoint::Finite);
    int pre = (rep.i % 2 == 0 ? 1 : -1) * sign(binom2(rep.i)) * hilbert_symbol(c, cp.shifted(rep.i));
    rep.transform_pushed = as_cyclo(pre) * D.pushed(c);

    // eps_0(chi, psi_db) through c and the uniformizer t.
    rep.epsilon_side = chi_c.inv() * psi_c * q_power(F, rep.i) * quad_gauss_power(F, -rep.n - 1) *
                       as_cyclo(sign(rep.n * (rep.n + 1) / 2));
    if (rep.n % 2 == 0) rep.epsilon_side = rep.epsilon_side * as_cyclo(hilbert_symbol(two * bp * c, t));
    // lambda(L/K, psi_dx) through b'.
    rep.lambda_side = quad_gauss_power(F, -rep.ord_bp) * as_cyclo(sign(binom2(rep.ord_bp + 1)));
    if (rep.ord_bp % 2 != 0) rep.lambda_side = rep.lambda_side * as_cyclo(hilbert_symbol(two * bp, t));

    rep.product = rep.transform_side * rep.epsilon_side * rep.lambda_side;
    rep.product_identity = rep.product == CycloNumber::one(1);

    auto eps = epsilon0_wild(chi, psi_db);
    rep.lhs = rep.transform_pushed.inv();
    rep.rhs = lambda_factor(TotallyRamifiedExt(b)) * eps.value;
    rep.lhs_equals_rhs = rep.lhs == rep.rhs;
    if (use_oracle) rep.oracle_match = epsilon_tate_oracle(chi, psi_db, oracle_cap).value == eps.value;

    if (!(rep.transform_pushed == rep.transform_side))
        rep.first_failure = "pushed character disagrees with the closed Fourier-side factor";
    else if (!(rep.epsilon_side == eps.value))
        rep.first_failure = "epsilon factor through c disagrees with the wild formula";
    else if (!rep.product_identity)
        rep.first_failure = "product of the three factors is not 1";
    else if (!rep.lhs_equals_rhs)
        rep.first_failure = "lhs differs from rhs";
    else if (rep.oracle_match && !*rep.oracle_match)
        rep.first_failure = "oracle epsilon factor differs from the closed form";
    return rep;
}

// ---------------------------------------------------------------------------------------------
// Congruences for u(t) = t (1 + theta t^r)
// ---------------------------------------------------------------------------------------------

enum class CongruenceKind { Key1, Key6, Key7 };

inline std::string to_string(CongruenceKind k) {
    switch (k) {
        case CongruenceKind::Key1: return "key1";
        case CongruenceKind::Key6: return "key6";
        case CongruenceKind::Key7: return "key7";
    }
    return "?";
}

struct CongruenceSample {
    Fq theta{};
    bool membership = false;  ///< difference lies in fil_level
    bool leading = false;     ///< difference minus the claimed term lies in fil_deeper
};

struct CongruenceReport {
    CongruenceKind kind = CongruenceKind::Key1;
    std::int64_t n = 0;
    std::int64_t r = 0;
    FieldPtr theta_field;
    std::int64_t level = 0;   ///< claimed membership level
    std::int64_t deeper = 0;  ///< level of the congruence with the claimed term
    std::int64_t guaranteed_mod_t = 0;
    std::vector<CongruenceSample> samples;
    bool all_pass() const {
        return std::all_of(samples.begin(), samples.end(), [](const CongruenceSample& s) { return s.membership && s.leading; });
    }
};

/// Smallest F_{q^s} with q^s > 4 (p r + n).
inline FieldPtr theta_field(const FieldPtr& F, std::int64_t r, std::int64_t n) {
    std::int64_t bound = 4 * (F->p() * r + n);
    int s = 1;
    for (std::int64_t qs = F->q(); qs <= bound; qs *= F->q()) ++s;
    return FiniteField::make(F->p(), F->f() * s);
}

namespace detail {

inline WittVector embed_witt(const WittVector& a, const FieldEmbedding& E) {
    WittVector out;
    for (const auto& e : a.entries) out.entries.push_back(embed_series(e, E));
    return out;
}

inline WittVector dilate(const WittVector& a, std::int64_t r, Fq theta, std::int64_t target) {
    WittVector out;
    for (const auto& e : a.entries) out.entries.push_back(substitute_dilated(e, r, theta, target));
    return out;
}

}  // namespace detail

/**
 * Checks the selected congruence for each theta. key1 asserts u(a) - a in fil_{n-r} and the
 * expansion modulo fil_{n-pr}; key6 and key7 assert membership of u(a) - a + V^m(c(u(b) - b)) in
 * fil_{n-nu(c)-2r} and its leading term modulo fil_{n-nu(c)-2r-1}. Precision doubles until every
 * membership is decided.
 */
inline CongruenceReport congruence_check(CongruenceKind kind, const WittVector& a, const FqSeries& b, const FqSeries& c,
                                         std::int64_t r, const FieldPtr& big, const std::vector<Fq>& thetas) {
    require(r >= 1, ErrorKind::HypothesisViolated, "r must be positive");
    const auto& F = a.field();
    std::int64_t p = F->p();
    int m = a.m();
    CongruenceReport rep;
    rep.kind = kind;
    rep.r = r;
    rep.theta_field = big;
    rep.n = a.is_zero() ? 0 : fil_level(a);
    std::int64_t n = rep.n;
    auto alpha = fmd(a);
    std::int64_t nu_c = 0;
    if (kind != CongruenceKind::Key1) {
        require(!b.is_zero() && !c.is_zero(), ErrorKind::HypothesisViolated, "b and c must be nonzero");
        std::int64_t nu_b = nu(b);
        nu_c = nu(c);
        require(detail::finite(nu_b) && detail::finite(nu_c) && nu_b + nu_c < (p - 2) * r, ErrorKind::HypothesisViolated,
                "nu(b) + nu(c) < (p-2) r fails");
        auto gap = alpha + c * derivative(b);
        if (kind == CongruenceKind::Key6) {
            require(gap.is_zero() && gap.is_exact(), ErrorKind::HypothesisViolated, "alpha + c b' is not zero");
        } else {
            require(!alpha.is_zero() && alpha.valuation() + 1 == -n, ErrorKind::HypothesisViolated, "ord(t alpha) differs from -n");
            require(detail::exact_order(gap) >= -n + nu_c + r, ErrorKind::HypothesisViolated,
                    "ord(alpha + c b') < -n + nu(c) + r");
        }
        rep.level = n - nu_c - 2 * r;
        rep.deeper = rep.level - 1;
    } else {
        rep.level = n - r;
        rep.deeper = n - p * r;
    }
    FieldEmbedding E(F, big);
    const auto& K = *big;
    auto aL = detail::embed_witt(a, E);
    auto alphaL = embed_series(alpha, E);
    std::optional<FqSeries> bL, cL, tcc;
    if (kind != CongruenceKind::Key1) {
        bL = embed_series(b, E);
        cL = embed_series(c, E);
    }
    std::int64_t pm = ipow(p, m);
    std::int64_t T = std::max<std::int64_t>(1 - rep.deeper, 1) + 2 * pm * (n + 1) + p * r + 8;
    for (int attempt = 0;; ++attempt) {
        try {
            std::vector<CongruenceSample> out;
            // Claimed term without theta: key1 keeps one polynomial per power of theta.
            std::vector<FqSeries> key1_terms;
            FqSeries lead2(big);
            if (kind == CongruenceKind::Key1) {
                mpz_class fact = 1;
                for (std::int64_t i = 1; i <= p - 1; ++i) {
                    fact *= static_cast<long>(i);
                    auto inv_fact = K.inv(K.from_int(mpz_class(fact % static_cast<long>(p)).get_si()));
                    key1_terms.push_back(derivative(alphaL, static_cast<int>(i - 1)).shifted(i + r * i).scaled(inv_fact));
                }
            } else {
                auto cc = *cL;
                auto ratio = derivative(cc).shifted(1) * inverse(cc, T + n + 2 * r + 8);
                lead2 = (alphaL.shifted(1) * ratio).shifted(2 * r).scaled(K.inv(K.from_int(2))).truncated(T);
            }
            for (Fq theta : thetas) {
                auto diff = witt_sub(detail::dilate(aL, r, theta, T), aL);
                FqSeries claimed(big);
                if (kind == CongruenceKind::Key1) {
                    Fq th = theta;
                    for (const auto& term : key1_terms) {
                        claimed = claimed + term.scaled(th);
                        th = K.mul(th, theta);
                    }
                } else {
                    auto ub = substitute_dilated(*bL, r, theta, T);
                    diff = witt_add(diff, WittVector::at_slot((*cL * (ub - *bL)).truncated(T), m, m));
                    claimed = lead2.scaled(K.mul(theta, theta));
                }
                auto rest = witt_sub(diff, WittVector::at_slot(claimed.truncated(T), m, m));
                out.push_back({theta, in_fil(diff, rep.level), in_fil(rest, rep.deeper)});
            }
            rep.samples = std::move(out);
            rep.guaranteed_mod_t = T;
            return rep;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::PrecisionExhausted || attempt >= 5) throw;
            T *= 2;
        }
    }
}

/// Draws `count` random nonzero theta values in the field, then runs congruence_check.
inline CongruenceReport congruence_check(CongruenceKind kind, const WittVector& a, const FqSeries& b, const FqSeries& c,
                                         std::int64_t r, int count, Rng& rng) {
    std::int64_t n = a.is_zero() ? 0 : fil_level(a);
    auto big = theta_field(a.field(), r, n);
    std::vector<Fq> thetas;
    for (int i = 0; i < count; ++i) thetas.push_back(random_nonzero(big, rng));
    return congruence_check(kind, a, b, c, r, big, thetas);
}

/**
 * key7 applied to a Legendre triple: with r = (n - nu(c)) / 2 when the gap is even, and after
 * t -> t^2 (which doubles n, nu(b) and nu(c)) with r = n - nu(c) when it is odd.
 */
struct LegendreCongruence {
    bool base_changed = false;
    CongruenceReport report;
};

inline LegendreCongruence legendre_congruence(const LegendreTriple& T, int count, Rng& rng) {
    if (T.even_gap()) return {false, congruence_check(CongruenceKind::Key7, T.a, T.b, T.c, (T.n - T.nu_c) / 2, count, rng)};
    auto a2 = substitute_square(T.a);
    auto b2 = substitute_square(T.b);
    auto c2 = substitute_square(T.c);
    return {true, congruence_check(CongruenceKind::Key7, a2, b2, c2, T.n - T.nu_c, count, rng)};
}

// ---------------------------------------------------------------------------------------------
// Random Legendre triples
// ---------------------------------------------------------------------------------------------

struct RandomTripleOptions {
    int m = 0;
    SourcePoint source = SourcePoint::Finite;
    std::int64_t n_min = 1;
    std::int64_t n_max = 6;
    std::int64_t d_max = 2;             ///< |ord b| ranges over [1, d_max]
    std::optional<int> gap_parity;      ///< required parity of n - nu(c)
    std::optional<int> bprime_parity;   ///< required parity of ord(b'), finite source only
    bool zero_source = true;            ///< finite source at x(z) = 0
    int unit_terms = 2;                 ///< extra random terms of b
};

/**
 * Rejection sampler: reduced a of level n with p not dividing n, b = t^{+-d} (unit), c the
 * stationary point; resamples until the Legendre conditions and the requested parities hold.
 */
inline LegendreTriple random_legendre_triple(const FieldPtr& F, const RandomTripleOptions& o, Rng& rng) {
    std::int64_t p = F->p();
    for (int attempt = 0; attempt < 2000; ++attempt) {
        std::int64_t n = random_int(o.n_min, o.n_max, rng);
        if (n % p == 0) continue;
        std::int64_t d = random_int(1, o.d_max, rng);
        if (d % p == 0) continue;
        auto a = random_reduced_witt(F, o.m, n, rng);
        FqSeries b(F);
        if (o.source == SourcePoint::Finite) {
            b = random_poly(F, d, 1 + o.unit_terms, rng);
            if (!o.zero_source) b = b + FqSeries::constant(F, random_nonzero(F, rng));
        } else {
            b = random_poly(F, -d, 1 + o.unit_terms, rng);
        }
        auto bp = derivative(b);
        if (bp.is_zero()) continue;
        if (o.bprime_parity && mod(bp.valuation(), 2) != *o.bprime_parity) continue;
        FqSeries c(F);
        try {
            c = stationary_c(a, b);
        } catch (const Error&) {
            continue;
        }
        if (c.valuation() == 0) continue;
        auto chk = check_legendre(a, b, c);
        if (!chk.ok) continue;
        if (o.gap_parity && mod(chk.n - chk.nu_c, 2) != *o.gap_parity) continue;
        if (o.source == SourcePoint::Infinity && (d % p == 0 || chk.n == d)) continue;
        return LegendreTriple{a, b, c, chk.n, chk.nu_b, chk.nu_c};
    }
    fail(ErrorKind::CapExceeded, "no Legendre triple found for the requested options");
}

/// A quasi-character with wild part a, a random tame exponent and a random root-of-unity value at t.
inline QuasiCharacter random_character_with_wild_part(const WittVector& a, Rng& rng) {
    const auto& F = a.field();
    std::int64_t e = random_int(0, F->q() - 2, rng);
    auto s = CycloNumber::root_of_unity(static_cast<int>(F->q() - 1), random_int(0, F->q() - 2, rng));
    return QuasiCharacter(F, e, s, a);
}

}  // namespace lftcalc
