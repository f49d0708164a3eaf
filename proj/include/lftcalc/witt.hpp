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
 * @file witt.hpp
 * @brief Witt vectors of finite length over F_q((t)).
 *
 * Addition evaluates the universal polynomials S_0, ..., S_m modulo p. They are obtained once per
 * (p, length) by ghost interpolation over Z, with every division checked to be exact. The same
 * table holds the polynomials Q_n defined by
 *
 *     sum_i p^i (X_i (1 + Y_i))^{p^{n-i}} = sum_i p^i X_i^{p^{n-i}} + sum_i p^i Q_i^{p^{n-i}}.
 *
 * Setting LFTCALC_CACHE_DIR makes the tables persist across processes as JSON files.
 */

#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lftcalc/error.hpp"
#include "lftcalc/fields.hpp"
#include "lftcalc/intpoly.hpp"
#include "lftcalc/series.hpp"

namespace lftcalc {

inline constexpr int kDefaultWittLengthCap = 3;

class UniversalWittTable {
   public:
    /// Variables are ordered X_0..X_{L-1}, Y_0..Y_{L-1}.
    static const UniversalWittTable& get(int p, int length, int cap = kDefaultWittLengthCap) {
        require(length >= 1, ErrorKind::InconsistentInput, "Witt length must be positive");
        require(length <= cap, ErrorKind::CapExceeded,
                "Witt length " + std::to_string(length) + " exceeds cap " + std::to_string(cap));
        static std::mutex mu;
        static std::map<std::pair<int, int>, std::unique_ptr<UniversalWittTable>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(p, length);
        auto it = cache.find(key);
        if (it != cache.end()) return *it->second;
        auto table = std::unique_ptr<UniversalWittTable>(new UniversalWittTable(p, length));
        return *cache.emplace(key, std::move(table)).first->second;
    }

    int p() const { return p_; }
    int length() const { return length_; }
    const IntPoly& addition(int n) const { return S_.at(n); }
    const IntPoly& q_poly(int n) const { return Q_.at(n); }
    const IntPoly& addition_mod_p(int n) const { return S_mod_p_.at(n); }
    const IntPoly& q_poly_mod_p(int n) const { return Q_mod_p_.at(n); }

   private:
    UniversalWittTable(int p, int length) : p_(p), length_(length) {
        if (!load_cache()) {
            build();
            store_cache();
        }
        for (int n = 0; n < length_; ++n) {
            S_mod_p_.push_back(S_[n].reduced_mod(p_));
            Q_mod_p_.push_back(Q_[n].reduced_mod(p_));
        }
    }

    IntPoly X(int i) const { return IntPoly::var(2 * length_, i); }
    IntPoly Y(int i) const { return IntPoly::var(2 * length_, length_ + i); }

    void build() {
        int nv = 2 * length_;
        mpz_class p = p_;
        auto ppow = [&](int k) {
            mpz_class r = 1;
            for (int i = 0; i < k; ++i) r *= p;
            return r;
        };
        auto ipow_p = [&](int k) { return static_cast<std::int64_t>(ipow(p_, k)); };
        for (int n = 0; n < length_; ++n) {
            IntPoly acc(nv);
            for (int i = 0; i <= n; ++i) {
                acc = acc + X(i).pow(ipow_p(n - i)).scaled(ppow(i));
                acc = acc + Y(i).pow(ipow_p(n - i)).scaled(ppow(i));
            }
            for (int i = 0; i < n; ++i) acc = acc - S_[i].pow(ipow_p(n - i)).scaled(ppow(i));
            S_.push_back(acc.divided_exact(ppow(n)));
        }
        IntPoly one = IntPoly::constant(nv, 1);
        for (int n = 0; n < length_; ++n) {
            IntPoly acc(nv);
            for (int i = 0; i <= n; ++i) {
                acc = acc + (X(i) * (one + Y(i))).pow(ipow_p(n - i)).scaled(ppow(i));
                acc = acc - X(i).pow(ipow_p(n - i)).scaled(ppow(i));
            }
            for (int i = 0; i < n; ++i) acc = acc - Q_[i].pow(ipow_p(n - i)).scaled(ppow(i));
            Q_.push_back(acc.divided_exact(ppow(n)));
        }
    }

    static std::string cache_file(int p, int length) {
        const char* dir = std::getenv("LFTCALC_CACHE_DIR");
        if (dir == nullptr || *dir == '\0') return {};
        return (std::filesystem::path(dir) / ("witt_p" + std::to_string(p) + "_len" + std::to_string(length) + ".json"))
            .string();
    }

    static nlohmann::json poly_to_json(const IntPoly& poly) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [m, c] : poly.terms()) arr.push_back({m, c.get_str()});
        return arr;
    }
    IntPoly poly_from_json(const nlohmann::json& j) const {
        IntPoly r(2 * length_);
        for (const auto& term : j) {
            auto m = term.at(0).get<std::vector<std::uint16_t>>();
            require(static_cast<int>(m.size()) == 2 * length_, ErrorKind::SchemaError, "cached Witt table is malformed");
            r.mutable_terms()[m] = mpz_class(term.at(1).get<std::string>());
        }
        return r;
    }

    bool load_cache() {
        auto path = cache_file(p_, length_);
        if (path.empty() || !std::filesystem::exists(path)) return false;
        try {
            std::ifstream in(path);
            auto j = nlohmann::json::parse(in);
            for (const auto& s : j.at("S")) S_.push_back(poly_from_json(s));
            for (const auto& q : j.at("Q")) Q_.push_back(poly_from_json(q));
            if (static_cast<int>(S_.size()) != length_ || static_cast<int>(Q_.size()) != length_) {
                S_.clear();
                Q_.clear();
                return false;
            }
            return true;
        } catch (const std::exception&) {
            S_.clear();
            Q_.clear();
            return false;
        }
    }

    void store_cache() const {
        auto path = cache_file(p_, length_);
        if (path.empty()) return;
        std::error_code ec;
        std::filesystem::create_directories(std::filesystem::path(path).parent_path(), ec);
        nlohmann::json j;
        j["S"] = nlohmann::json::array();
        j["Q"] = nlohmann::json::array();
        for (const auto& s : S_) j["S"].push_back(poly_to_json(s));
        for (const auto& q : Q_) j["Q"].push_back(poly_to_json(q));
        std::ofstream out(path);
        if (out) out << j.dump();
    }

    int p_;
    int length_;
    std::vector<IntPoly> S_, Q_, S_mod_p_, Q_mod_p_;
};

/// Witt vector (a_0, ..., a_m) with entries in F_q((t)).
struct WittVector {
    std::vector<FqSeries> entries;

    int length() const { return static_cast<int>(entries.size()); }
    int m() const { return length() - 1; }
    const FieldPtr& field() const { return entries.front().ring(); }

    static WittVector zero(const FieldPtr& F, int m) {
        WittVector w;
        w.entries.assign(m + 1, FqSeries(F));
        return w;
    }
    /// The vector with x in slot i and zeros elsewhere, i.e. V^i of the Teichmuller lift of x.
    static WittVector at_slot(const FqSeries& x, int i, int m) {
        auto w = zero(x.ring(), m);
        w.entries[i] = x;
        return w;
    }
    bool is_zero() const {
        for (const auto& e : entries)
            if (!e.is_zero()) return false;
        return true;
    }
};

inline WittVector witt_add(const WittVector& a, const WittVector& b) {
    require(a.length() == b.length(), ErrorKind::LengthMismatch, "Witt vectors of different lengths");
    require(a.field() == b.field(), ErrorKind::IncompatibleLevels, "Witt vectors over different fields");
    int L = a.length();
    const auto& table = UniversalWittTable::get(a.field()->p(), L);
    std::vector<FqSeries> args;
    args.reserve(2 * L);
    for (const auto& e : a.entries) args.push_back(e);
    for (const auto& e : b.entries) args.push_back(e);
    WittVector out;
    out.entries.push_back(a.entries[0] + b.entries[0]);
    for (int n = 1; n < L; ++n) out.entries.push_back(evaluate_mod_p(table.addition_mod_p(n), args, a.field()->p()));
    return out;
}

/// Entry-wise negation, valid in odd characteristic.
inline WittVector witt_neg(const WittVector& a) {
    WittVector out = a;
    for (auto& e : out.entries) e = -e;
    return out;
}

inline WittVector witt_sub(const WittVector& a, const WittVector& b) { return witt_add(a, witt_neg(b)); }

inline WittVector frobenius(const WittVector& a) {
    WittVector out = a;
    for (auto& e : out.entries) e = power(e, a.field()->p());
    return out;
}

/// V: W_{m+1} -> W_{m+2}, (a_0, ..., a_m) -> (0, a_0, ..., a_m).
inline WittVector verschiebung(const WittVector& a) {
    WittVector out;
    out.entries.push_back(FqSeries(a.field()));
    for (const auto& e : a.entries) out.entries.push_back(e);
    return out;
}

/// V^k applied k times; the image in W_{m+k+1} defines the same character as a.
inline WittVector verschiebung(const WittVector& a, int k) {
    WittVector out = a;
    for (int i = 0; i < k; ++i) out = verschiebung(out);
    return out;
}

/// Smallest n >= 0 with p^{m-i} ord(a_i) >= -n for all i.
inline std::int64_t fil_level(const WittVector& a) {
    require(!a.is_zero() || [&] {
        for (const auto& e : a.entries)
            if (!e.is_exact()) return true;
        return false;
    }(), ErrorKind::ZeroVector, "filtration level of the zero Witt vector");
    std::int64_t p = a.field()->p();
    int m = a.m();
    std::int64_t level = 0;
    for (int i = 0; i <= m; ++i) {
        const auto& e = a.entries[i];
        if (e.is_zero()) continue;
        level = std::max(level, -ipow(p, m - i) * e.valuation());
    }
    for (int i = 0; i <= m; ++i) {
        const auto& e = a.entries[i];
        if (!e.is_zero() || e.is_exact()) continue;
        require(-ipow(p, m - i) * e.prec() <= level, ErrorKind::PrecisionExhausted,
                "filtration level undetermined: entry " + std::to_string(i) + " known only modulo t^" +
                    std::to_string(e.prec()));
    }
    return level;
}

/// Membership a in fil_L, with L allowed to be negative. Zero vectors belong to every level.
inline bool in_fil(const WittVector& a, std::int64_t L) {
    std::int64_t p = a.field()->p();
    int m = a.m();
    for (int i = 0; i <= m; ++i) {
        const auto& e = a.entries[i];
        std::int64_t bound = ceil_div(-L, ipow(p, m - i));
        if (!e.is_zero()) {
            if (e.valuation() < bound) return false;
            continue;
        }
        require(e.is_exact() || e.prec() >= bound, ErrorKind::PrecisionExhausted,
                "membership in fil_" + std::to_string(L) + " undetermined at entry " + std::to_string(i));
    }
    return true;
}

/// alpha with F^m d(a) = alpha dt, alpha = sum_i a_i^{p^{m-i}-1} a_i'.
inline FqSeries fmd(const WittVector& a) {
    std::int64_t p = a.field()->p();
    int m = a.m();
    FqSeries acc(a.field());
    for (int i = 0; i <= m; ++i) {
        const auto& e = a.entries[i];
        if (e.is_zero() && e.is_exact()) continue;
        acc = acc + power(e, ipow(p, m - i) - 1) * derivative(e);
    }
    return acc;
}

struct ReductionResult {
    WittVector reduced;
    WittVector witness;  ///< y with reduced = a - (F(y) - y)
};

/**
 * Move a within its Artin-Schreier-Witt coset a + (F - 1)W to a representative of minimal
 * filtration level. Each step removes a leading monomial c t^{-pk} from the highest-index entry
 * achieving the level by subtracting F(y) - y, y carrying c^{1/p} t^{-k} in the same slot.
 */
inline ReductionResult reduce(const WittVector& a) {
    const auto& F = a.field();
    std::int64_t p = F->p();
    int m = a.m();
    WittVector cur = a, witness = WittVector::zero(F, m);
    if (cur.is_zero()) return {cur, witness};
    for (int step = 0;; ++step) {
        require(step < 100000, ErrorKind::PrecisionExhausted, "reduction did not terminate");
        if (cur.is_zero()) break;
        std::int64_t n = fil_level(cur);
        if (n <= 0) break;
        int chosen = -1;
        for (int i = m; i >= 0; --i) {
            const auto& e = cur.entries[i];
            if (e.is_zero()) continue;
            std::int64_t v = e.valuation();
            if (-ipow(p, m - i) * v != n) continue;
            if (v < 0 && mod(v, p) == 0) {
                chosen = i;
                break;
            }
        }
        if (chosen < 0) break;
        const auto& e = cur.entries[chosen];
        std::int64_t k = e.valuation() / p;
        auto root = FqSeries::monomial(F, F->pth_root(e.leading()), k);
        auto y = WittVector::at_slot(root, chosen, m);
        cur = witt_add(witt_sub(cur, frobenius(y)), y);
        witness = witt_add(witness, y);
    }
    return {cur, witness};
}

struct RefinedSwan {
    std::int64_t n = 0;
    Fq coeff;
};

/// Swan conductor and refined Swan conductor of a reduced vector.
inline RefinedSwan rsw(const WittVector& a) {
    require(!a.is_zero(), ErrorKind::ZeroVector, "refined Swan conductor of the zero vector");
    std::int64_t n = fil_level(a);
    require(n >= 1, ErrorKind::TameInput, "vector has filtration level 0");
    auto alpha = fmd(a);
    require(!alpha.is_zero() && alpha.valuation() == -n - 1, ErrorKind::NotReduced,
            "ord(t alpha) differs from -n; the vector is not reduced");
    return {n, a.field()->neg(alpha.leading())};
}

/// Truncated logarithm sum_{i=1}^{p-1} (-1)^{i+1} y^i / i.
inline FqSeries trunc_log(const FqSeries& y) {
    const auto& F = y.ring();
    std::int64_t p = F->p();
    FqSeries acc(F), pw = FqSeries::constant(F, F->one());
    for (std::int64_t i = 1; i < p; ++i) {
        pw = pw * y;
        Fq c = F->div(F->from_int(i % 2 == 1 ? 1 : -1), F->from_int(i));
        acc = acc + pw.scaled(c);
    }
    return acc;
}

/// Q_n evaluated at x_0..x_n, y_0..y_n.
inline FqSeries qn_eval(int n, const std::vector<FqSeries>& x, const std::vector<FqSeries>& y) {
    require(static_cast<int>(x.size()) == n + 1 && static_cast<int>(y.size()) == n + 1, ErrorKind::LengthMismatch,
            "Q_n needs n+1 entries in each argument");
    const auto& F = x.front().ring();
    const auto& table = UniversalWittTable::get(F->p(), n + 1);
    std::vector<FqSeries> args = x;
    args.insert(args.end(), y.begin(), y.end());
    return evaluate_mod_p(table.q_poly_mod_p(n), args, F->p());
}

/// Ghost component w_m of coefficient-wise lifts: sum_j p^j z~_j^{p^{m-j}} over Z_q/p^{m+1}.
inline ZqSeries ghost_of_lifts(const std::vector<ZqSeries>& lifts) {
    const auto& R = lifts.front().ring();
    int m = static_cast<int>(lifts.size()) - 1;
    std::int64_t p = R->field()->p();
    ZqSeries acc(R);
    for (int j = 0; j <= m; ++j) {
        if (lifts[j].is_zero() && lifts[j].is_exact()) continue;
        auto term = power(lifts[j], ipow(p, m - j));
        auto pj = R->from_int(ipow(p, j));
        acc = acc + term.scaled(pj);
    }
    return acc;
}

inline ZqSeries ghost_component(const WittVector& z, const CoeffRingPtr& R) {
    std::vector<ZqSeries> lifts;
    for (const auto& e : z.entries) lifts.push_back(lift_series(e, R));
    return ghost_of_lifts(lifts);
}

}  // namespace lftcalc
