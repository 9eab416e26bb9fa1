#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "dimforge/error.hpp"

namespace dimforge {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }
inline Rat abs_rat(const Rat& a) { return a < 0 ? Rat(-a) : a; }

inline int sign_of(const Int& a) { return a.sign(); }
inline int sign_of(const Rat& a) { return a.sign(); }

inline Int gcd_int(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm_int(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

inline Int numer(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int denom(const Rat& q) { return boost::multiprecision::denominator(q); }

// Rational p/q with sign normalization (cpp_rational requires q > 0).
inline Rat make_rat(const Int& p, const Int& q) {
    require(q != 0, errc::invalid_modulus, "rational with zero denominator");
    return q < 0 ? Rat(-p, -q) : Rat(p, q);
}

// Quotient of an exact division; checks the remainder.
inline Int div_exact(const Int& a, const Int& b, const char* where) {
    require(b != 0, errc::invalid_modulus, std::string("division by zero in ") + where);
    Int q = a / b;
    require(q * b == a, errc::check_failed, std::string("inexact division in ") + where);
    return q;
}

// Floor division toward negative infinity (cpp_int / truncates toward zero).
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if (q * b != a && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Int mod_floor(const Int& a, const Int& b) { return a - floor_div(a, b) * b; }

// Symmetric representative in (-m/2, m/2].
inline Int mod_symmetric(const Int& a, const Int& m) {
    Int r = mod_floor(a, m);
    if (2 * r > m) r -= m;
    return r;
}

inline Int pow_int(Int base, unsigned long e) {
    Int r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline Rat pow_rat(const Rat& base, unsigned long e) {
    return Rat(pow_int(numer(base), e), pow_int(denom(base), e));
}

inline Int parse_int(const std::string& s) {
    try {
        return Int(s);
    } catch (const std::exception&) {
        throw usage_error("expected a decimal integer string, got '" + s + "'");
    }
}

// Accepts "p" or "p/q" with q > 0 after normalization.
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int p(s.substr(0, slash));
        Int q(s.substr(slash + 1));
        if (q == 0) throw std::invalid_argument("zero denominator");
        return q < 0 ? Rat(-p, -q) : Rat(p, q);
    } catch (const std::exception&) {
        throw usage_error("expected 'p' or 'p/q' rational string, got '" + s + "'");
    }
}

inline std::string to_string(const Int& a) { return a.str(); }

inline std::string to_string(const Rat& q) {
    if (denom(q) == 1) return numer(q).str();
    return numer(q).str() + "/" + denom(q).str();
}

} // namespace dimforge
