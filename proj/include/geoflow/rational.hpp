#ifndef GEOFLOW_RATIONAL_HPP
#define GEOFLOW_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace geoflow {

// Exact coefficient field. cpp_rational keeps gcd(num, den) = 1 and den >= 1
// after every operation, so structural equality is mathematical equality.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer intGcd(const Integer& a, const Integer& b) {
    return boost::multiprecision::gcd(a, b);
}

inline Integer intLcm(const Integer& a, const Integer& b) {
    return boost::multiprecision::lcm(a, b);
}

inline Rational ratPow(const Rational& base, unsigned exp) {
    Rational r(1), b(base);
    while (exp) {
        if (exp & 1u) r *= b;
        exp >>= 1u;
        if (exp) b *= b;
    }
    return r;
}

inline double toDouble(const Rational& q) {
    return q.template convert_to<double>();
}

// Accepts "a" or "a/b" with optional leading '-'.
inline Rational parseRational(const std::string& text) {
    try {
        Rational q(text);
        return q;
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational literal: '" + text + "'");
    }
}

inline std::string toString(const Rational& q) {
    return q.str();
}

} // namespace geoflow

#endif
