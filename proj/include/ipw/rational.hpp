#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "ipw/errors.hpp"

namespace ipw {

// Exact rational arithmetic. Model counts stay below 2^20 but simplex
// pivoting grows numerators and denominators, so an arbitrary-precision
// backend is used throughout.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

// Renders "p/q", or just "p" when the value is integral.
inline std::string to_fraction_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Parses a plain decimal literal ("0.8", ".5", "1") into an exact rational.
// No exponent form; this is the NUM token of the knowledge-base grammar.
inline Rational rational_from_decimal(std::string_view text) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    BigInt numer = 0;
    BigInt denom = 1;
    bool any_digit = false;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        numer = numer * 10 + (text[pos] - '0');
        any_digit = true;
        ++pos;
    }
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            numer = numer * 10 + (text[pos] - '0');
            denom *= 10;
            any_digit = true;
            ++pos;
        }
    }
    if (!any_digit || pos != text.size())
        throw ParseError("malformed number '" + std::string(text) + "'", pos);
    Rational value(numer, denom);
    return negative ? -value : value;
}

// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double value) {
    if (value == 0.0) return Rational(0);
    int exp = 0;
    double mant = std::frexp(value, &exp);  // value = mant * 2^exp, |mant| in [0.5, 1)
    // 53 doublings make the mantissa integral.
    std::int64_t scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r(scaled);
    if (exp > 0)
        r *= Rational(BigInt(1) << exp);
    else if (exp < 0)
        r /= Rational(BigInt(1) << -exp);
    return r;
}

}  // namespace ipw
