#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace tip {

// Exact arbitrary-precision rational. Thin layer over GMP's mpq_class that
// pins down the conventions used throughout this project: values are always
// canonical (lowest terms, positive denominator) and the text form is always
// "<num>/<den>", e.g. "5/1".
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Accepts "p/q" or a bare integer "p". No decimal-point forms.
inline std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::string s = text;
    if (s.find('/') == std::string::npos) s += "/1";
    Rational q;
    if (q.set_str(s, 10) != 0) return std::nullopt;
    if (q.get_den() == 0) return std::nullopt;
    q.canonicalize();
    return q;
}

// base^exp with integer exponent, negative allowed; base must be nonzero for
// negative exponents.
inline Rational pow_int(const Rational& base, long exp) {
    if (exp == 0) return rat(1);
    Rational b = base;
    long e = exp;
    if (e < 0) {
        if (b == 0) throw std::domain_error("0 raised to negative power");
        b = 1 / b;
        e = -e;
    }
    Rational acc = rat(1);
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Smallest integer >= q, as a rational.
inline Rational rat_ceil(const Rational& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return Rational(r);
}

inline long to_long(const Rational& q) {
    if (q.get_den() != 1 || !q.get_num().fits_slong_p())
        throw std::domain_error("rational is not a machine integer: " + to_string(q));
    return q.get_num().get_si();
}

}  // namespace tip
