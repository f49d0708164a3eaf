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
 * @file cyclo.hpp
 * @brief Exact arithmetic in cyclotomic fields Q(zeta_N).
 *
 * A CycloNumber is a polynomial of degree < phi(N) in zeta_N with rational coefficients, stored as
 * integer numerators over one positive common denominator. Numbers of different levels are
 * combined in the field of level lcm(N, M).
 */

#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <ostream>
#include <string>
#include <vector>

#include "lftcalc/error.hpp"
#include "lftcalc/fields.hpp"

namespace lftcalc {

namespace detail {

struct CycloData {
    int N = 1;
    int phi = 1;
    std::vector<std::int64_t> Phi;                     // monic, low to high, size phi + 1
    std::vector<std::vector<std::int64_t>> pow_table;  // zeta^k reduced, k in [0, N)
};

inline std::vector<std::int64_t> poly_exact_div(std::vector<std::int64_t> a, const std::vector<std::int64_t>& b) {
    // b monic
    int da = static_cast<int>(a.size()) - 1, db = static_cast<int>(b.size()) - 1;
    std::vector<std::int64_t> q(std::max(0, da - db + 1), 0);
    for (int d = da; d >= db; --d) {
        std::int64_t c = a[d];
        q[d - db] = c;
        if (c == 0) continue;
        for (int i = 0; i <= db; ++i) a[d - db + i] -= c * b[i];
    }
    for (int i = 0; i < db; ++i)
        if (a[i] != 0) fail(ErrorKind::InconsistentInput, "cyclotomic division not exact");
    return q;
}

inline const std::vector<std::int64_t>& cyclotomic_polynomial(int N);

inline const CycloData& cyclo_data(int N) {
    require(N >= 1, ErrorKind::InconsistentInput, "cyclotomic level must be positive");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<CycloData>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(N);
        if (it != cache.end()) return *it->second;
    }
    auto data = std::make_unique<CycloData>();
    data->N = N;
    data->Phi = cyclotomic_polynomial(N);
    data->phi = static_cast<int>(data->Phi.size()) - 1;
    int phi = data->phi;
    data->pow_table.assign(N, std::vector<std::int64_t>(phi, 0));
    std::vector<std::int64_t> cur(phi, 0);
    cur[0] = 1;
    if (phi == 0) cur.clear();
    for (int k = 0; k < N; ++k) {
        data->pow_table[k] = cur;
        // multiply by X and reduce by the monic Phi
        std::vector<std::int64_t> next(phi, 0);
        std::int64_t top = phi > 0 ? cur[phi - 1] : 0;
        for (int i = phi - 1; i >= 1; --i) next[i] = cur[i - 1];
        if (phi > 0) next[0] = 0;
        for (int i = 0; i < phi; ++i) next[i] -= top * data->Phi[i];
        cur = next;
    }
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(N, std::move(data));
    return *it->second;
}

inline const std::vector<std::int64_t>& cyclotomic_polynomial(int N) {
    static std::mutex mu;
    static std::map<int, std::vector<std::int64_t>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(N);
        if (it != cache.end()) return it->second;
    }
    std::vector<std::int64_t> a(N + 1, 0);
    a[0] = -1;
    a[N] = 1;
    for (int d = 1; d < N; ++d) {
        if (N % d != 0) continue;
        a = poly_exact_div(a, cyclotomic_polynomial(d));
    }
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(N, std::move(a));
    return it->second;
}

}  // namespace detail

class CycloNumber {
   public:
    CycloNumber() : CycloNumber(1) {}
    explicit CycloNumber(int N) : N_(N), num_(detail::cyclo_data(N).phi), den_(1) {}

    static CycloNumber zero(int N) { return CycloNumber(N); }
    static CycloNumber one(int N) { return from_rational(N, mpq_class(1)); }
    static CycloNumber from_int(int N, std::int64_t v) { return from_rational(N, mpq_class(static_cast<long>(v))); }
    static CycloNumber from_rational(int N, const mpq_class& v) {
        CycloNumber r(N);
        mpq_class c = v;
        c.canonicalize();
        r.num_[0] = c.get_num();
        r.den_ = c.get_den();
        return r;
    }
    /// zeta_N^k for any integer k.
    static CycloNumber root_of_unity(int N, std::int64_t k) {
        const auto& d = detail::cyclo_data(N);
        CycloNumber r(N);
        const auto& row = d.pow_table[mod(k, N)];
        for (int i = 0; i < d.phi; ++i) r.num_[i] = static_cast<long>(row[i]);
        return r;
    }
    /// sum_k counts[k] zeta_N^k, counts indexed by exponent mod N.
    static CycloNumber from_exponent_counts(int N, const std::vector<std::int64_t>& counts) {
        const auto& d = detail::cyclo_data(N);
        require(static_cast<int>(counts.size()) == N, ErrorKind::InconsistentInput, "histogram size must equal level");
        std::vector<std::int64_t> acc(d.phi, 0);
        for (int k = 0; k < N; ++k) {
            if (counts[k] == 0) continue;
            const auto& row = d.pow_table[k];
            for (int i = 0; i < d.phi; ++i) acc[i] += counts[k] * row[i];
        }
        CycloNumber r(N);
        for (int i = 0; i < d.phi; ++i) r.num_[i] = static_cast<long>(acc[i]);
        return r;
    }
    /// Build from rational coefficients in the power basis of level N.
    static CycloNumber from_coeffs(int N, const std::vector<mpq_class>& coeffs) {
        const auto& d = detail::cyclo_data(N);
        require(static_cast<int>(coeffs.size()) == d.phi, ErrorKind::SchemaError,
                "cyclotomic coefficient vector must have length phi(N)");
        mpz_class den = 1;
        for (const auto& c : coeffs) {
            mpz_class g;
            mpz_lcm(g.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
            den = g;
        }
        CycloNumber r(N);
        r.den_ = den;
        for (int i = 0; i < d.phi; ++i) r.num_[i] = coeffs[i].get_num() * (den / coeffs[i].get_den());
        r.normalize();
        return r;
    }

    int level() const { return N_; }
    std::vector<mpq_class> coeffs() const {
        std::vector<mpq_class> out;
        out.reserve(num_.size());
        for (const auto& n : num_) {
            mpq_class c(n, den_);
            c.canonicalize();
            out.push_back(c);
        }
        return out;
    }

    bool is_zero() const {
        for (const auto& n : num_)
            if (n != 0) return false;
        return true;
    }

    /// Image under Q(zeta_N) -> Q(zeta_M), zeta_N -> zeta_M^{M/N}; requires N | M.
    CycloNumber embed(int M) const {
        require(M % N_ == 0, ErrorKind::IncompatibleLevels,
                "cannot embed level " + std::to_string(N_) + " into level " + std::to_string(M));
        if (M == N_) return *this;
        const auto& d = detail::cyclo_data(M);
        int step = M / N_;
        CycloNumber r(M);
        for (std::size_t k = 0; k < num_.size(); ++k) {
            if (num_[k] == 0) continue;
            const auto& row = d.pow_table[(k * step) % M];
            for (int i = 0; i < d.phi; ++i)
                if (row[i] != 0) r.num_[i] += num_[k] * static_cast<long>(row[i]);
        }
        r.den_ = den_;
        r.normalize();
        return r;
    }

    /// Galois automorphism zeta_N -> zeta_N^a, gcd(a, N) = 1.
    CycloNumber galois(std::int64_t a) const {
        require(std::gcd(mod(a, N_), static_cast<std::int64_t>(N_)) == 1, ErrorKind::InconsistentInput,
                "Galois exponent must be prime to the level");
        const auto& d = detail::cyclo_data(N_);
        CycloNumber r(N_);
        for (std::size_t k = 0; k < num_.size(); ++k) {
            if (num_[k] == 0) continue;
            const auto& row = d.pow_table[mod(static_cast<std::int64_t>(k) * a, N_)];
            for (int i = 0; i < d.phi; ++i)
                if (row[i] != 0) r.num_[i] += num_[k] * static_cast<long>(row[i]);
        }
        r.den_ = den_;
        r.normalize();
        return r;
    }

    friend CycloNumber operator+(const CycloNumber& a, const CycloNumber& b) {
        int L = std::lcm(a.N_, b.N_);
        if (a.N_ != L || b.N_ != L) return a.embed(L) + b.embed(L);
        CycloNumber r(L);
        for (std::size_t i = 0; i < r.num_.size(); ++i) r.num_[i] = a.num_[i] * b.den_ + b.num_[i] * a.den_;
        r.den_ = a.den_ * b.den_;
        r.normalize();
        return r;
    }
    friend CycloNumber operator-(const CycloNumber& a) {
        CycloNumber r = a;
        for (auto& n : r.num_) n = -n;
        return r;
    }
    friend CycloNumber operator-(const CycloNumber& a, const CycloNumber& b) { return a + (-b); }

    friend CycloNumber operator*(const CycloNumber& a, const CycloNumber& b) {
        int L = std::lcm(a.N_, b.N_);
        if (a.N_ != L || b.N_ != L) return a.embed(L) * b.embed(L);
        const auto& d = detail::cyclo_data(L);
        int phi = d.phi;
        std::vector<mpz_class> conv(phi == 0 ? 0 : 2 * phi - 1);
        for (int i = 0; i < phi; ++i) {
            if (a.num_[i] == 0) continue;
            for (int j = 0; j < phi; ++j)
                if (b.num_[j] != 0) conv[i + j] += a.num_[i] * b.num_[j];
        }
        CycloNumber r(L);
        for (int k = 0; k < static_cast<int>(conv.size()); ++k) {
            if (conv[k] == 0) continue;
            if (k < phi) {
                r.num_[k] += conv[k];
                continue;
            }
            const auto& row = d.pow_table[k % L];
            for (int i = 0; i < phi; ++i)
                if (row[i] != 0) r.num_[i] += conv[k] * static_cast<long>(row[i]);
        }
        r.den_ = a.den_ * b.den_;
        r.normalize();
        return r;
    }

    CycloNumber scaled(const mpq_class& s) const {
        CycloNumber r = *this;
        mpq_class c = s;
        c.canonicalize();
        for (auto& n : r.num_) n *= c.get_num();
        r.den_ *= c.get_den();
        if (r.den_ < 0) {
            r.den_ = -r.den_;
            for (auto& n : r.num_) n = -n;
        }
        r.normalize();
        return r;
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Phi_N.
    CycloNumber inv() const {
        require(!is_zero(), ErrorKind::DivisionByZero, "inverse of zero cyclotomic number");
        using Poly = std::vector<mpq_class>;
        const auto& d = detail::cyclo_data(N_);
        auto trim = [](Poly& p) {
            while (!p.empty() && p.back() == 0) p.pop_back();
        };
        auto sub_mul = [&](Poly a, const Poly& b, const mpq_class& c, int shift) {
            if (a.size() < b.size() + shift) a.resize(b.size() + shift, 0);
            for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
            trim(a);
            return a;
        };
        Poly r0, r1, s0, s1;
        for (auto v : d.Phi) r0.push_back(mpq_class(static_cast<long>(v)));
        for (const auto& n : num_) r1.push_back(mpq_class(n, den_));
        for (auto& c : r1) c.canonicalize();
        trim(r0);
        trim(r1);
        s0 = {};      // coefficient of a in r0
        s1 = {1};     // coefficient of a in r1
        while (r1.size() > 1) {
            Poly q;
            Poly rem = r0;
            q.assign(rem.size() >= r1.size() ? rem.size() - r1.size() + 1 : 0, 0);
            while (rem.size() >= r1.size() && !rem.empty()) {
                int shift = static_cast<int>(rem.size() - r1.size());
                mpq_class c = rem.back() / r1.back();
                q[shift] = c;
                rem = sub_mul(rem, r1, c, shift);
            }
            // s_new = s0 - q*s1
            Poly qs(q.size() + s1.size(), 0);
            for (std::size_t i = 0; i < q.size(); ++i)
                for (std::size_t j = 0; j < s1.size(); ++j) qs[i + j] += q[i] * s1[j];
            Poly snew = s0;
            if (snew.size() < qs.size()) snew.resize(qs.size(), 0);
            for (std::size_t i = 0; i < qs.size(); ++i) snew[i] -= qs[i];
            trim(snew);
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = snew;
            if (r1.empty()) fail(ErrorKind::DivisionByZero, "element is not invertible");
        }
        // r1 is a nonzero constant c: s1 * a = c mod Phi
        mpq_class c = r1[0];
        std::vector<mpq_class> coeffs(d.phi, 0);
        // reduce s1 mod Phi via the power table
        for (std::size_t k = 0; k < s1.size(); ++k) {
            if (s1[k] == 0) continue;
            const auto& row = d.pow_table[k % N_];
            for (int i = 0; i < d.phi; ++i)
                if (row[i] != 0) coeffs[i] += s1[k] * static_cast<long>(row[i]);
        }
        for (auto& x : coeffs) x /= c;
        return from_coeffs(N_, coeffs);
    }

    CycloNumber pow(std::int64_t e) const {
        if (e < 0) return inv().pow(-e);
        CycloNumber r = one(N_), b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e > 0) b = b * b;
        }
        return r;
    }

    friend bool operator==(const CycloNumber& a, const CycloNumber& b) {
        int L = std::lcm(a.N_, b.N_);
        if (a.N_ != L || b.N_ != L) return a.embed(L) == b.embed(L);
        return a.den_ == b.den_ && a.num_ == b.num_;
    }
    friend bool operator!=(const CycloNumber& a, const CycloNumber& b) { return !(a == b); }

    /// Numerical value with zeta_N = exp(2 pi i / N).
    std::complex<double> to_complex() const {
        std::complex<double> acc = 0;
        double den = den_.get_d();
        for (std::size_t k = 0; k < num_.size(); ++k) {
            if (num_[k] == 0) continue;
            double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / N_;
            acc += num_[k].get_d() / den * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        return acc;
    }

    /// Smallest M | N such that the number lies in Q(zeta_M).
    int minimal_level() const {
        for (int M = 1; M <= N_; ++M) {
            if (N_ % M != 0) continue;
            bool fixed = true;
            for (std::int64_t a = 1 + M; a < N_ + 1 && fixed; a += M) {
                if (std::gcd(a, static_cast<std::int64_t>(N_)) != 1) continue;
                fixed = (galois(a) == *this);
            }
            if (fixed) return M;
        }
        return N_;
    }

    /// Coordinates in the power basis of Q(zeta_M) for M = minimal_level().
    std::pair<int, std::vector<mpq_class>> minimal_coeffs() const {
        int M = minimal_level();
        if (M == N_) return {M, coeffs()};
        const auto& dN = detail::cyclo_data(N_);
        const auto& dM = detail::cyclo_data(M);
        int rows = dN.phi, cols = dM.phi, step = N_ / M;
        // Augmented system E y = x with E[i][j] = coefficient i of zeta_N^{j*step}.
        std::vector<std::vector<mpq_class>> A(rows, std::vector<mpq_class>(cols + 1));
        auto x = coeffs();
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) A[i][j] = static_cast<long>(dN.pow_table[(j * step) % N_][i]);
            A[i][cols] = x[i];
        }
        int r = 0;
        std::vector<int> pivcol;
        for (int c = 0; c < cols && r < rows; ++c) {
            int piv = -1;
            for (int i = r; i < rows; ++i)
                if (A[i][c] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) continue;
            std::swap(A[r], A[piv]);
            for (int i = 0; i < rows; ++i) {
                if (i == r || A[i][c] == 0) continue;
                mpq_class f = A[i][c] / A[r][c];
                for (int j = c; j <= cols; ++j) A[i][j] -= f * A[r][j];
            }
            pivcol.push_back(c);
            ++r;
        }
        std::vector<mpq_class> y(cols, 0);
        for (int i = 0; i < r; ++i) y[pivcol[i]] = A[i][cols] / A[i][pivcol[i]];
        return {M, y};
    }

    /// Human-readable form at the minimal level, e.g. "1+2*z3" for 1 + 2 zeta_3.
    std::string to_string() const {
        auto [M, y] = minimal_coeffs();
        std::ostringstream os;
        bool first = true;
        for (std::size_t k = 0; k < y.size(); ++k) {
            if (y[k] == 0) continue;
            mpq_class c = y[k];
            bool neg = c < 0;
            if (neg) c = -c;
            if (!first || neg) os << (neg ? "-" : "+");
            first = false;
            if (k == 0) {
                os << c.get_str();
                continue;
            }
            if (c != 1) os << c.get_str() << "*";
            os << "z" << M;
            if (k > 1) os << "^" << k;
        }
        if (first) os << "0";
        return os.str();
    }

   private:
    void normalize() {
        if (den_ < 0) {
            den_ = -den_;
            for (auto& n : num_) n = -n;
        }
        mpz_class g = den_;
        for (const auto& n : num_) {
            if (g == 1) break;
            if (n != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
        }
        if (is_zero()) {
            den_ = 1;
            return;
        }
        if (g != 1) {
            for (auto& n : num_) n /= g;
            den_ /= g;
        }
    }

    int N_;
    std::vector<mpz_class> num_;
    mpz_class den_;
};

inline std::ostream& operator<<(std::ostream& os, const CycloNumber& x) { return os << x.to_string(); }

/// Value level used for a character datum over F_q with Witt length m+1.
inline int value_level(std::int64_t p, std::int64_t q, int m) {
    return static_cast<int>(2 * ipow(p, m + 1) * (q - 1));
}

/// psi_m(x) = zeta_{p^{m+1}}^x, expressed at level N (p^{m+1} | N).
inline CycloNumber psi_m_value(std::int64_t p, int m, std::int64_t x, int N) {
    std::int64_t pm = ipow(p, m + 1);
    require(N % pm == 0, ErrorKind::IncompatibleLevels, "level does not contain p^{m+1}-th roots of unity");
    return CycloNumber::root_of_unity(N, mod(x, pm) * (N / pm));
}

}  // namespace lftcalc
