#pragma once

// Exact rational arithmetic used throughout the analysis pipeline, plus a
// small value type that carries an optional exact representation alongside
// the double it always has.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace ibvp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

inline Rational make_rational(long long num, long long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational& r) {
    return r.numerator().convert_to<double>() / r.denominator().convert_to<double>();
}

inline Rational rational_abs(const Rational& r) { return r < Rational(0) ? -r : r; }

inline Rational rational_min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational rational_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// Integer power with negative exponents allowed; 0^negative is a domain error.
inline Rational rational_pow(const Rational& base, long long exp) {
    if (exp == 0) return Rational(1);
    bool invert = exp < 0;
    unsigned long long n = invert ? static_cast<unsigned long long>(-(exp + 1)) + 1ull
                                  : static_cast<unsigned long long>(exp);
    Rational acc(1), b = base;
    while (n > 0) {
        if (n & 1ull) acc *= b;
        b *= b;
        n >>= 1;
    }
    if (invert) {
        if (acc.numerator() == 0) throw std::domain_error("zero raised to negative power");
        return Rational(1) / acc;
    }
    return acc;
}

/// Exact square root if the (normalized) value is a perfect square, else nullopt.
/// Negative input is a domain error, matching sqrt's real-valued contract.
inline std::optional<Rational> rational_sqrt_exact(const Rational& r) {
    if (r < Rational(0)) throw std::domain_error("sqrt of negative value");
    const BigInt num = r.numerator(), den = r.denominator();
    const BigInt sn = boost::multiprecision::sqrt(num);
    const BigInt sd = boost::multiprecision::sqrt(den);
    if (sn * sn == num && sd * sd == den) return Rational(sn, sd);
    return std::nullopt;
}

/// "p/q" (or just "p" when q == 1).
inline std::string to_string(const Rational& r) {
    std::string s = r.numerator().str();
    if (r.denominator() != 1) s += "/" + r.denominator().str();
    return s;
}

/// Parses "p/q", "p", or a plain decimal like "0.25" / "-1.5".
inline Rational parse_rational(const std::string& text) {
    auto fail = [&] { throw std::invalid_argument("cannot parse rational: '" + text + "'"); };
    std::string s = text;
    if (s.empty()) fail();
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string ns = s.substr(0, slash), ds = s.substr(slash + 1);
        if (ns.empty() || ds.empty()) fail();
        try {
            BigInt n(ns), d(ds);
            if (d == 0) fail();
            return Rational(n, d);
        } catch (const std::exception&) {
            fail();
        }
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (fp.empty()) fail();
        bool neg = !ip.empty() && ip[0] == '-';
        if (neg) ip = ip.substr(1);
        if (ip.empty()) ip = "0";
        try {
            BigInt whole(ip), frac(fp);
            BigInt den = 1;
            for (size_t i = 0; i < fp.size(); ++i) den *= 10;
            BigInt num = whole * den + frac;
            if (neg) num = -num;
            return Rational(num, den);
        } catch (const std::exception&) {
            fail();
        }
    }
    try {
        return Rational(BigInt(s), BigInt(1));
    } catch (const std::exception&) {
        fail();
    }
    return Rational(0);  // unreachable
}

// ---------------------------------------------------------------------------

/// A real number that remembers its exact rational value when the whole
/// computation producing it stayed in the rational domain. Arithmetic
/// propagates exactness; mixing with a plain double drops it.
struct Scalar {
    double value = 0.0;
    std::optional<Rational> exact;

    Scalar() = default;
    Scalar(double v) : value(v) {}  // numeric-only
    Scalar(const Rational& r) : value(to_double(r)), exact(r) {}
    Scalar(long long n) : Scalar(Rational(BigInt(n))) {}

    bool is_exact() const { return exact.has_value(); }
};

inline Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.exact && b.exact) return Scalar(*a.exact + *b.exact);
    return Scalar(a.value + b.value);
}
inline Scalar operator-(const Scalar& a, const Scalar& b) {
    if (a.exact && b.exact) return Scalar(*a.exact - *b.exact);
    return Scalar(a.value - b.value);
}
inline Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.exact && b.exact) return Scalar(*a.exact * *b.exact);
    return Scalar(a.value * b.value);
}
inline Scalar operator/(const Scalar& a, const Scalar& b) {
    if (a.exact && b.exact) {
        if (b.exact->numerator() == 0) throw std::domain_error("division by zero");
        return Scalar(*a.exact / *b.exact);
    }
    return Scalar(a.value / b.value);
}

inline Scalar scalar_min(const Scalar& a, const Scalar& b) {
    if (a.exact && b.exact) return Scalar(rational_min(*a.exact, *b.exact));
    return Scalar(std::min(a.value, b.value));
}
inline Scalar scalar_max(const Scalar& a, const Scalar& b) {
    if (a.exact && b.exact) return Scalar(rational_max(*a.exact, *b.exact));
    return Scalar(std::max(a.value, b.value));
}

}  // namespace ibvp
