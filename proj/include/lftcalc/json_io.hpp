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
 * @file json_io.hpp
 * @brief JSON encoding of field elements, series, Witt vectors, characters and cyclotomic numbers.
 *
 * Field elements are written with FiniteField::to_string: a residue "k" over a prime field and a
 * polynomial such as "2*X^2+X+1" in the root X of the field modulus otherwise. On input an element
 * may also be an integer or an array of F_p coefficients listed from the constant term upward.
 *
 * Objects are validated strictly. An unknown key raises SchemaError. Output keeps insertion order.
 */

#pragma once

#include <cctype>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lftcalc/characters.hpp"
#include "lftcalc/cyclo.hpp"
#include "lftcalc/error.hpp"
#include "lftcalc/fields.hpp"
#include "lftcalc/series.hpp"
#include "lftcalc/witt.hpp"

namespace lftcalc::json_io {

using json = nlohmann::ordered_json;

inline void schema(bool ok, const std::string& what) { require(ok, ErrorKind::SchemaError, what); }

/// Reject keys outside the allowed list.
inline void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& context) {
    schema(j.is_object(), context + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        schema(known, context + ": unknown field \"" + key + "\"");
    }
}

inline std::int64_t get_int(const json& j, const std::string& what) {
    schema(j.is_number_integer(), what + ": expected an integer");
    return j.get<std::int64_t>();
}

// ---------------------------------------------------------------- fields

inline FieldPtr field_from_json(const json& j) {
    check_keys(j, {"p", "f"}, "field");
    schema(j.contains("p"), "field: missing \"p\"");
    std::int64_t p = get_int(j.at("p"), "field.p");
    std::int64_t f = j.contains("f") ? get_int(j.at("f"), "field.f") : 1;
    schema(f >= 1 && f <= 32, "field.f must be a positive integer");
    return FiniteField::make(p, static_cast<int>(f));
}

inline json field_to_json(const FieldPtr& F) { return {{"p", F->p()}, {"f", F->f()}}; }

inline json fq_to_json(const FieldPtr& F, Fq x) { return F->to_string(x); }

namespace detail {

/// Parse "c0 + c1*X + ... " with optional signs; every coefficient is reduced mod p.
inline Fq parse_fq_string(const FieldPtr& F, const std::string& text) {
    std::vector<int> acc(F->f(), 0);
    std::int64_t p = F->p();
    std::size_t i = 0, n = text.size();
    auto skip = [&] {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto read_int = [&](std::int64_t& out) {
        std::size_t start = i;
        std::int64_t v = 0;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
            v = (v * 10 + (text[i] - '0')) % (p * 1000003);
            ++i;
        }
        if (i > start) out = v;
        return i > start;
    };
    skip();
    schema(i < n, "empty field element");
    bool first = true;
    while (true) {
        skip();
        if (i >= n) break;
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip();
        } else {
            schema(first, "field element \"" + text + "\": expected + or -");
        }
        first = false;
        std::int64_t coef = 1, deg = 0;
        bool have_coef = read_int(coef);
        skip();
        if (have_coef && i < n && text[i] == '*') {
            ++i;
            skip();
        }
        if (i < n && (text[i] == 'X' || text[i] == 'x')) {
            ++i;
            deg = 1;
            skip();
            if (i < n && text[i] == '^') {
                ++i;
                skip();
                schema(read_int(deg), "field element \"" + text + "\": bad exponent");
            }
        } else {
            schema(have_coef, "field element \"" + text + "\": expected a coefficient or X");
        }
        schema(deg < F->f(), "field element \"" + text + "\": degree must stay below f = " + std::to_string(F->f()));
        acc[deg] = static_cast<int>(mod(acc[deg] + sign * coef, p));
    }
    return F->from_coeffs(acc);
}

}  // namespace detail

inline Fq fq_from_json(const FieldPtr& F, const json& j) {
    if (j.is_number_integer()) return F->from_int(j.get<std::int64_t>());
    if (j.is_string()) return detail::parse_fq_string(F, j.get<std::string>());
    if (j.is_array()) {
        schema(static_cast<int>(j.size()) <= F->f(), "field element array longer than f");
        std::vector<int> c(F->f(), 0);
        for (std::size_t k = 0; k < j.size(); ++k)
            c[k] = static_cast<int>(mod(get_int(j[k], "field element coefficient"), F->p()));
        return F->from_coeffs(c);
    }
    throw Error(ErrorKind::SchemaError, "field element must be an integer, string or coefficient array");
}

// ---------------------------------------------------------------- series

inline json series_to_json(const FqSeries& s) {
    const auto& F = s.ring();
    json j;
    j["val"] = s.is_zero() ? json(nullptr) : json(s.valuation());
    json coeffs = json::array();
    for (Fq c : s.raw_coeffs()) coeffs.push_back(fq_to_json(F, c));
    j["coeffs"] = coeffs;
    j["prec"] = s.is_exact() ? json(nullptr) : json(s.prec());
    return j;
}

/// Dense object {"val","coeffs","prec"} or sparse [[exp, coeff], ...]. A missing or null prec means exact.
inline FqSeries series_from_json(const FieldPtr& F, const json& j) {
    if (j.is_array()) {
        std::map<std::int64_t, Fq> terms;
        for (const auto& term : j) {
            schema(term.is_array() && term.size() == 2, "sparse series terms must be [exponent, coefficient]");
            std::int64_t e = get_int(term[0], "sparse series exponent");
            Fq c = F->add(terms.count(e) ? terms[e] : F->zero(), fq_from_json(F, term[1]));
            terms[e] = c;
        }
        return FqSeries::from_terms(F, terms);
    }
    check_keys(j, {"val", "coeffs", "prec"}, "series");
    std::int64_t prec = kExact;
    if (j.contains("prec") && !j.at("prec").is_null()) prec = get_int(j.at("prec"), "series.prec");
    schema(j.contains("coeffs") && j.at("coeffs").is_array(), "series: \"coeffs\" must be an array");
    const auto& arr = j.at("coeffs");
    if (arr.empty()) return FqSeries(F, prec);
    schema(j.contains("val") && j.at("val").is_number_integer(), "series: nonzero series needs an integer \"val\"");
    std::int64_t val = j.at("val").get<std::int64_t>();
    std::vector<Fq> c;
    c.reserve(arr.size());
    for (const auto& x : arr) c.push_back(fq_from_json(F, x));
    schema(prec >= kExact || val + static_cast<std::int64_t>(c.size()) <= prec,
           "series: coefficients listed at or beyond the stated precision");
    return FqSeries::from_coeffs(F, val, std::move(c), prec);
}

// ---------------------------------------------------------------- Witt vectors

inline json witt_to_json(const WittVector& a) {
    json entries = json::array();
    for (const auto& e : a.entries) entries.push_back(series_to_json(e));
    return {{"m", a.m()}, {"entries", entries}};
}

inline WittVector witt_from_json(const FieldPtr& F, const json& j) {
    check_keys(j, {"m", "entries"}, "witt");
    schema(j.contains("entries") && j.at("entries").is_array() && !j.at("entries").empty(),
           "witt: \"entries\" must be a nonempty array");
    WittVector w;
    for (const auto& e : j.at("entries")) w.entries.push_back(series_from_json(F, e));
    if (j.contains("m"))
        require(get_int(j.at("m"), "witt.m") == w.m(), ErrorKind::LengthMismatch, "witt: m + 1 must equal the entry count");
    return w;
}

// ---------------------------------------------------------------- cyclotomic numbers

inline json cyclo_to_json(const CycloNumber& x) {
    auto [M, y] = x.minimal_coeffs();
    json coeffs = json::array();
    for (const auto& c : y) coeffs.push_back(c.get_str());
    return {{"N", M}, {"coeffs", coeffs}};
}

inline CycloNumber cyclo_from_json(const json& j) {
    if (j.is_number_integer()) return CycloNumber::from_int(1, j.get<std::int64_t>());
    check_keys(j, {"N", "coeffs"}, "cyclo");
    schema(j.contains("N") && j.contains("coeffs") && j.at("coeffs").is_array(), "cyclo: needs \"N\" and \"coeffs\"");
    std::int64_t N = get_int(j.at("N"), "cyclo.N");
    schema(N >= 1 && N <= 1 << 20, "cyclo.N out of range");
    std::vector<mpq_class> c;
    for (const auto& x : j.at("coeffs")) {
        mpq_class v;
        if (x.is_number_integer()) {
            v = mpq_class(static_cast<long>(x.get<std::int64_t>()));
        } else {
            schema(x.is_string(), "cyclo coefficient must be a rational string");
            schema(v.set_str(x.get<std::string>(), 10) == 0, "cyclo coefficient \"" + x.get<std::string>() + "\" is not a rational");
            v.canonicalize();
            schema(v.get_den() != 0, "cyclo coefficient has zero denominator");
        }
        c.push_back(v);
    }
    return CycloNumber::from_coeffs(static_cast<int>(N), c);
}

// ---------------------------------------------------------------- characters

inline json character_to_json(const QuasiCharacter& chi) {
    return {{"tame_exponent", chi.tame_exponent()},
            {"uniformizer_value", cyclo_to_json(chi.uniformizer_value())},
            {"wild", witt_to_json(chi.wild_part())}};
}

/// Missing parts default to the trivial ones: exponent 0, value 1 at t, zero wild vector.
inline QuasiCharacter character_from_json(const FieldPtr& F, const json& j) {
    check_keys(j, {"tame_exponent", "uniformizer_value", "wild"}, "character");
    std::int64_t e = j.contains("tame_exponent") ? get_int(j.at("tame_exponent"), "character.tame_exponent") : 0;
    CycloNumber s = j.contains("uniformizer_value") ? cyclo_from_json(j.at("uniformizer_value")) : CycloNumber::one(1);
    WittVector w = j.contains("wild") ? witt_from_json(F, j.at("wild")) : WittVector::zero(F, 0);
    return QuasiCharacter(F, e, s, w);
}

inline json additive_to_json(const AdditiveCharacter& psi) { return {{"omega", series_to_json(psi.g())}}; }

inline AdditiveCharacter additive_from_json(const FieldPtr& F, const json& j) {
    check_keys(j, {"omega"}, "additive character");
    schema(j.contains("omega"), "additive character: missing \"omega\"");
    auto g = series_from_json(F, j.at("omega"));
    require(!g.is_zero(), ErrorKind::ZeroInput, "additive character needs a nonzero omega");
    return AdditiveCharacter(g);
}

}  // namespace lftcalc::json_io
