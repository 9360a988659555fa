#ifndef TORSIONKIT_RATIONAL_HPP
#define TORSIONKIT_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace torsionkit {

/// Exact rational scalar. Arbitrary-precision integers, always reduced to
/// lowest terms with a positive denominator (the backing type maintains the
/// canonical form on every operation). No floating point anywhere in the
/// library.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// Integer power with negative exponents allowed. pow(0, e<0) throws.
inline Rational pow(const Rational& base, long exponent) {
    if (exponent == 0) return Rational(1);
    if (base.is_zero()) {
        if (exponent < 0) throw std::domain_error("pow: zero base with negative exponent");
        return Rational(0);
    }
    Rational b = exponent < 0 ? Rational(denominator(base), numerator(base)) : base;
    unsigned long n = exponent < 0 ? -static_cast<unsigned long>(exponent) : exponent;
    Rational acc(1);
    while (n > 0) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

/// Serialized form used in every JSON payload: "p/q", with "/q" omitted when
/// the denominator is 1.
inline std::string to_string(const Rational& q) { return q.str(); }

/// Parse "p" or "p/q". Accepts an optional leading '-' on either component
/// and normalizes; rejects empty input, a zero denominator, and stray
/// characters.
Rational parse_rational(const std::string& text);

}  // namespace torsionkit

#endif  // TORSIONKIT_RATIONAL_HPP
