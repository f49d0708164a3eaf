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

/// @file epsilon.hpp
/// @brief Gauss sums, local constants of quasi-characters, and lambda-factors of totally ramified extensions.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lftcalc/characters.hpp"
#include "lftcalc/cyclo.hpp"
#include "lftcalc/series.hpp"

namespace lftcalc {

/// tau(chi_k, psi_k) = -sum_{x in k^x} chi_k^{-1}(x) psi_k(x), chi_k = zeta_{q-1}^{j dlog}.
inline CycloNumber gauss_sum(const FieldPtr& F, std::int64_t j) {
    std::int64_t p = F->p(), q1 = F->q() - 1;
    int N = static_cast<int>(p * q1);
    std::vector<std::int64_t> hist(N, 0);
    for (std::int64_t k = 0; k < q1; ++k) {
        Fq x = F->exp(k);
        hist[mod(-j * k * p + F->trace(x) * q1, N)] -= 1;
    }
    return CycloNumber::from_exponent_counts(N, hist);
}

/// G = sum_{x in k} psi_k(x^2).
inline CycloNumber quad_gauss(const FieldPtr& F) {
    int p = static_cast<int>(F->p());
    std::vector<std::int64_t> hist(p, 0);
    for (std::int64_t i = 0; i < F->q(); ++i) {
        Fq x{static_cast<std::uint32_t>(i)};
        hist[F->trace(F->mul(x, x))] += 1;
    }
    return CycloNumber::from_exponent_counts(p, hist);
}

/// G^k for any integer k; negative powers use G^{-1} = kappa_0(-1) G / q.
inline CycloNumber quad_gauss_power(const FieldPtr& F, std::int64_t k) {
    auto G = quad_gauss(F);
    if (k >= 0) return G.pow(k);
    auto Ginv = G.scaled(mpq_class(F->kappa0(F->neg(F->one())), static_cast<unsigned long>(F->q())));
    return Ginv.pow(-k);
}

inline int kappa0_minus_one(const FieldPtr& F) { return F->kappa0(F->neg(F->one())); }

inline CycloNumber q_power(const FieldPtr& F, std::int64_t k) {
    mpz_class q = static_cast<long>(F->q()), r;
    mpz_pow_ui(r.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(k < 0 ? -k : k));
    return CycloNumber::from_rational(1, k >= 0 ? mpq_class(r) : mpq_class(1, r));
}

struct EpsilonResult {
    CycloNumber value;
    std::string branch;        ///< "unramified", "tame", "wild-odd" or "wild-even"
    std::optional<FqSeries> c;  ///< the element c of the wild formula
};

/// eps_0(chi, psi) = -chi(beta) q^{ord psi} tau(chi_k, psi_k) for a(chi) <= 1.
inline EpsilonResult epsilon0_tame(const QuasiCharacter& chi, const AdditiveCharacter& psi) {
    auto cond = chi.conductor();
    require(cond.a <= 1, ErrorKind::WildInput, "tame formula needs a(chi) <= 1");
    const auto& F = chi.field();
    auto val = -(chi(psi.gauge()) * q_power(F, psi.order()) * gauss_sum(F, chi.tame_exponent()));
    return {val, cond.a == 0 ? "unramified" : "tame", std::nullopt};
}

/**
 * Element c with chi(1 + x + x^2/2) = psi(c x) on m^r: c = -alpha / g with F^m d(a) = alpha dt
 * and omega = g dt, truncated to relative precision r + 1 so that 2 ord(F^m da + c omega) >= -n.
 */
inline FqSeries find_c(const QuasiCharacter& chi, const AdditiveCharacter& psi) {
    std::int64_t n = chi.swan();
    require(n >= 1, ErrorKind::TameInput, "find_c needs a wild character");
    auto alpha = fmd(chi.reduced_wild());
    std::int64_t r = (n + 1) / 2;
    auto c = (-(alpha * inverse(psi.g(), r + 2)));
    require(!c.is_zero() && c.prec() - c.valuation() >= r + 1, ErrorKind::PrecisionExhausted,
            "c is not determined to the required precision");
    c = c.truncated(c.valuation() + r + 1).as_exact_polynomial();
    require(c.valuation() + psi.gauge().valuation() == -n, ErrorKind::NotReduced, "ord(beta c) differs from -sw");
    auto check = alpha + c * psi.g();
    require(check.is_zero() ? 2 * check.prec() >= -n : 2 * check.valuation() >= -n, ErrorKind::PrecisionExhausted,
            "truncated c violates the stationary-point inequality");
    return c;
}

/**
 * eps_0 of a wild character: chi^{-1}(c) psi(c) q^{-ord c} kappa_0(-1)^{n(n+1)/2} G^{-n-1},
 * times (-2 beta c, pi) when n is even. The caller may supply c and pi.
 */
inline EpsilonResult epsilon0_wild(const QuasiCharacter& chi, const AdditiveCharacter& psi,
                                   std::optional<FqSeries> c_in = std::nullopt,
                                   std::optional<FqSeries> pi_in = std::nullopt) {
    const auto& F = chi.field();
    require(F->p() != 2, ErrorKind::EvenCharacteristic, "wild formula needs p odd");
    std::int64_t n = chi.swan();
    require(n >= 1, ErrorKind::TameInput, "wild formula needs a(chi) >= 2");
    FqSeries c = c_in ? *c_in : find_c(chi, psi);
    FqSeries pi = pi_in ? *pi_in : FqSeries::t(F);
    require(!pi.is_zero() && pi.valuation() == 1, ErrorKind::InconsistentInput, "pi must be a uniformizer");
    auto val = chi(c).inv() * psi(c) * q_power(F, -c.valuation()) * quad_gauss_power(F, -n - 1);
    if ((n * (n + 1) / 2) % 2 != 0 && kappa0_minus_one(F) == -1) val = -val;
    std::string branch = "wild-odd";
    if (n % 2 == 0) {
        branch = "wild-even";
        auto sym = FqSeries::constant(F, F->from_int(-2)) * psi.gauge() * c;
        if (hilbert_symbol(sym, pi) == -1) val = -val;
    }
    return {val, branch, c};
}

/// eps(chi, psi_{g dt}) = chi(g) q^{ord g} for unramified chi.
inline CycloNumber epsilon_unramified(const QuasiCharacter& chi, const AdditiveCharacter& psi) {
    require(chi.is_unramified(), ErrorKind::InconsistentInput, "character is ramified");
    return chi(psi.g()) * q_power(chi.field(), psi.order());
}

/// Closed-form eps_0, dispatching on the conductor.
inline EpsilonResult epsilon0(const QuasiCharacter& chi, const AdditiveCharacter& psi) {
    return chi.conductor().a <= 1 ? epsilon0_tame(chi, psi) : epsilon0_wild(chi, psi);
}

/// Exponent of chi on units given by coefficient lists, through the ghost component of the lifts.
class UnitCharacterEvaluator {
   public:
    explicit UnitCharacterEvaluator(const QuasiCharacter& chi)
        : F_(chi.field()), R_(WittCoeffRing::make(chi.field(), chi.m())), e_(chi.tame_exponent()) {
        N_ = chi.value_level();
        pm_ = ipow(F_->p(), chi.m() + 1);
        const auto& a = chi.wild_part();
        if (!a.is_zero()) {
            auto W = ghost_component(a, R_);
            require(W.prec() > -1, ErrorKind::PrecisionExhausted, "ghost component not known up to t^{-1}");
            if (!W.is_zero() && W.valuation() < 0)
                for (std::int64_t k = 0; k < -W.valuation(); ++k) w_.push_back(W.coeff(-1 - k));
        }
    }

    /// k with chi(u) = zeta_N^k, u = sum_j u[j] t^j and u[0] != 0.
    std::int64_t exponent(const std::vector<Fq>& u) const {
        std::int64_t q1 = F_->q() - 1;
        std::int64_t k = mod(e_ * F_->dlog(u[0]), q1) * (N_ / q1);
        if (w_.empty()) return mod(k, N_);
        std::size_t L = w_.size(), a = u.size();
        std::vector<Zq> U(L + 1, R_->zero()), D(L, R_->zero());
        for (std::size_t i = 0; i < std::min(a, L + 1); ++i) U[i] = R_->lift(u[i]);
        Zq u0inv = R_->inv(U[0]);
        for (std::size_t j = 0; j < L; ++j) {
            Zq acc = R_->scale(U[j + 1], static_cast<std::int64_t>(j + 1));
            for (std::size_t i = 1; i <= j; ++i) acc = R_->sub(acc, R_->mul(U[i], D[j - i]));
            D[j] = R_->mul(u0inv, acc);
        }
        Zq res = R_->zero();
        for (std::size_t j = 0; j < L; ++j) res = R_->add(res, R_->mul(w_[j], D[j]));
        std::int64_t pairing = mod(-R_->trace(res), pm_);
        return mod(k - pairing * (N_ / pm_), N_);
    }
    int level() const { return N_; }

   private:
    FieldPtr F_;
    CoeffRingPtr R_;
    std::int64_t e_;
    int N_ = 1;
    std::int64_t pm_ = 1;
    std::vector<Zq> w_;
};

struct TateOracleResult {
    CycloNumber value;
    std::int64_t v0 = 0;
    std::vector<std::pair<std::int64_t, CycloNumber>> partial;  ///< contribution of each valuation
};

inline constexpr std::int64_t kDefaultOracleCap = 300000;

/**
 * Tate integral of chi^{-1}(x) psi(x) over K^x, split by valuation v of x in the window
 * [-a-d-2, -d+2]. Cosets of 1 + m^a are enumerated lexicographically; when psi(u t^v) is not
 * constant on a coset, the extra additive sum over the finer digits factors out and is computed
 * separately. Every valuation other than -a-d must contribute zero.
 */
inline TateOracleResult epsilon_tate_oracle(const QuasiCharacter& chi, const AdditiveCharacter& psi,
                                            std::int64_t cap = kDefaultOracleCap) {
    const auto& F = chi.field();
    std::int64_t a = chi.conductor().a;
    require(a >= 1, ErrorKind::UnramifiedInput, "Tate oracle needs a ramified character");
    std::int64_t q = F->q(), p = F->p(), d = psi.order();
    {
        double cosets = std::pow(static_cast<double>(q), static_cast<double>(a));
        require(cosets <= static_cast<double>(cap), ErrorKind::CapExceeded,
                "q^a = " + std::to_string(static_cast<long long>(cosets)) + " cosets exceed the budget");
    }
    UnitCharacterEvaluator ev(chi);
    int N = ev.level();
    require(N % p == 0, ErrorKind::IncompatibleLevels, "value level must contain p-th roots of unity");
    // Enumerate units once, remembering chi^{-1} exponents.
    std::vector<std::vector<Fq>> units;
    std::vector<std::int64_t> chi_inv;
    {
        std::vector<std::int64_t> digit(a, 0);
        digit[0] = 1;
        while (true) {
            std::vector<Fq> u(a);
            for (std::int64_t j = 0; j < a; ++j) u[j] = Fq{static_cast<std::uint32_t>(digit[j])};
            chi_inv.push_back(mod(-ev.exponent(u), N));
            units.push_back(std::move(u));
            std::int64_t j = a - 1;
            while (j >= 0) {
                if (++digit[j] < q) break;
                digit[j] = (j == 0) ? 1 : 0;
                --j;
            }
            if (j < 0) break;
        }
    }
    CycloNumber chi_t_inv = chi.at_uniformizer().inv();
    auto g_coeff = [&](std::int64_t e) {
        require(e < psi.g().prec(), ErrorKind::PrecisionExhausted, "omega not known far enough for the oracle");
        return psi.g().coeff(e);
    };
    TateOracleResult out;
    out.v0 = -a - d;
    out.value = CycloNumber::zero(1);
    for (std::int64_t v = -a - d - 2; v <= -d + 2; ++v) {
        std::int64_t A = std::max(a, -v - d);
        // Additive sum over y in O / m^{A-a} of psi(y t^{v+a}).
        std::vector<std::int64_t> inner_hist(p, 0);
        {
            std::int64_t len = A - a;
            std::vector<Fq> gy(len);
            for (std::int64_t j = 0; j < len; ++j) gy[j] = g_coeff(-1 - v - a - j);
            std::vector<std::int64_t> digit(len, 0);
            while (true) {
                Fq s = F->zero();
                for (std::int64_t j = 0; j < len; ++j)
                    s = F->add(s, F->mul(Fq{static_cast<std::uint32_t>(digit[j])}, gy[j]));
                inner_hist[F->trace(s)] += 1;
                std::int64_t j = len - 1;
                while (j >= 0 && ++digit[j] == q) digit[j--] = 0;
                if (j < 0) break;
            }
        }
        CycloNumber inner = CycloNumber::from_exponent_counts(static_cast<int>(p), inner_hist);
        CycloNumber contribution = CycloNumber::zero(1);
        if (!inner.is_zero()) {
            std::vector<Fq> gu(a);
            for (std::int64_t j = 0; j < a; ++j) gu[j] = g_coeff(-1 - v - j);
            std::vector<std::int64_t> hist(N, 0);
            for (std::size_t idx = 0; idx < units.size(); ++idx) {
                Fq s = F->zero();
                for (std::int64_t j = 0; j < a; ++j) s = F->add(s, F->mul(units[idx][j], gu[j]));
                hist[mod(chi_inv[idx] + F->trace(s) * (N / p), N)] += 1;
            }
            contribution = CycloNumber::from_exponent_counts(N, hist) * inner * chi_t_inv.pow(v) * q_power(F, -v - A);
        }
        out.partial.emplace_back(v, contribution);
        if (v == out.v0) {
            out.value = contribution;
        } else {
            require(contribution.is_zero(), ErrorKind::InconsistentInput,
                    "Tate integral has a nonzero contribution at valuation " + std::to_string(v));
        }
    }
    return out;
}

/// Totally ramified L = F_q((t)) over K = F_q((x)) with x = b(t).
struct TotallyRamifiedExt {
    FqSeries b;

    explicit TotallyRamifiedExt(FqSeries b_) : b(std::move(b_)) {
        require(!b.is_zero() && b.valuation() >= 1, ErrorKind::InconsistentInput, "b must have positive valuation");
        require(!derivative(b).is_zero(), ErrorKind::InseparableInput, "b' vanishes: the extension is inseparable");
    }
    const FieldPtr& field() const { return b.ring(); }
    std::int64_t degree() const { return b.valuation(); }
    FqSeries bprime() const { return derivative(b); }
    /// m = ord(b'), the valuation of the different.
    std::int64_t different_order() const { return bprime().valuation(); }
};

/// delta = t b' / b to relative precision rel.
inline FqSeries refined_log_different(const TotallyRamifiedExt& ext, std::int64_t rel = 8) {
    return ext.bprime().shifted(1) * inverse(ext.b, rel);
}

/// lambda(L/K, psi_{dx}) = kappa_0(-1)^{C(m+1,2)} G^{-m}, times (2 b', t)_L when m is odd.
inline CycloNumber lambda_factor(const TotallyRamifiedExt& ext) {
    const auto& F = ext.field();
    std::int64_t m = ext.different_order();
    auto val = quad_gauss_power(F, -m);
    if (binom2(m + 1) % 2 != 0 && kappa0_minus_one(F) == -1) val = -val;
    if (m % 2 != 0) {
        auto two_bp = ext.bprime().scaled(F->from_int(2));
        if (hilbert_symbol(two_bp, FqSeries::t(F)) == -1) val = -val;
    }
    return val;
}

/**
 * Matrix of multiplication by alpha in the basis 1, t, ..., t^{n-1} over K; column j holds the
 * coordinates of alpha t^j, known modulo x^{ceil((T - i)/n)}.
 */
inline std::vector<std::vector<FqSeries>> multiplication_matrix(const TotallyRamifiedExt& ext, const FqSeries& alpha,
                                                                std::int64_t T) {
    std::int64_t n = ext.degree();
    std::vector<std::vector<FqSeries>> M(n, std::vector<FqSeries>(n, FqSeries(ext.field())));
    for (std::int64_t j = 0; j < n; ++j) {
        auto parts = decompose_over_base(alpha.shifted(j), ext.b, T);
        for (std::int64_t i = 0; i < n; ++i) M[i][j] = parts[i];
    }
    return M;
}

namespace detail {

/// Division-free Laplace expansion along the first column.
inline FqSeries laplace_det(const std::vector<std::vector<FqSeries>>& M) {
    std::size_t n = M.size();
    if (n == 1) return M[0][0];
    FqSeries acc(M[0][0].ring());
    for (std::size_t i = 0; i < n; ++i) {
        if (M[i][0].is_zero() && M[i][0].is_exact()) continue;
        std::vector<std::vector<FqSeries>> minor;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == i) continue;
            minor.emplace_back(M[r].begin() + 1, M[r].end());
        }
        auto term = M[i][0] * laplace_det(minor);
        acc = (i % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

}  // namespace detail

/// N_{L/K}(alpha) as a series in x, known at least modulo x^{target}.
inline FqSeries norm(const TotallyRamifiedExt& ext, const FqSeries& alpha, std::int64_t target) {
    std::int64_t n = ext.degree();
    require(n <= 8, ErrorKind::CapExceeded, "norm is implemented for degrees up to 8");
    std::int64_t margin = n * (n + 2) + std::max<std::int64_t>(0, -alpha.valuation_bound()) * n;
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::int64_t T = n * target + margin;
        if (!alpha.is_exact()) T = std::min(T, alpha.prec());
        auto det = detail::laplace_det(multiplication_matrix(ext, alpha, T));
        if (det.prec() >= target) return det.truncated(target);
        require(alpha.is_exact() || T < alpha.prec(), ErrorKind::PrecisionExhausted,
                "norm not determined by the precision of the argument");
        margin *= 2;
    }
    fail(ErrorKind::PrecisionExhausted, "norm precision did not converge");
}

/// Representative sign * lc * x^v of the discriminant class (-1)^{C(n,2)} N(t^n b'/b).
inline FqSeries discriminant_class(const TotallyRamifiedExt& ext) {
    std::int64_t n = ext.degree();
    auto u = ext.bprime().shifted(n) * inverse(ext.b, 4);
    auto N = norm(ext, u, u.valuation() + 1);
    require(!N.is_zero(), ErrorKind::PrecisionExhausted, "norm of the different vanishes to precision");
    Fq lead = N.leading();
    if (binom2(n) % 2 != 0) lead = ext.field()->neg(lead);
    return FqSeries::monomial(ext.field(), lead, N.valuation());
}

/// Second Stiefel-Whitney class of Ind 1 twisted as in the orthogonal case: (d_{L/K}, 2)_K.
inline int w2_induced(const TotallyRamifiedExt& ext) {
    const auto& F = ext.field();
    return hilbert_symbol(discriminant_class(ext), FqSeries::constant(F, F->from_int(2)));
}

/// Artin conductor of Ind_L^K chi_L: ord(b') + a(chi_L).
inline std::int64_t induced_artin(const TotallyRamifiedExt& ext, const QuasiCharacter& chi_L) {
    return ext.different_order() + chi_L.conductor().a;
}

/// Swan conductor of Ind_L^K chi_L; the inertia invariants are one-dimensional exactly when chi_L is unramified.
inline std::int64_t induced_swan(const TotallyRamifiedExt& ext, const QuasiCharacter& chi_L) {
    return induced_artin(ext, chi_L) - ext.degree() + (chi_L.is_unramified() ? 1 : 0);
}

}  // namespace lftcalc
