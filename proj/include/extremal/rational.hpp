#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace extremal {

using Integer  = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Parse "p", "-p" or "p/q". GMP does not canonicalize string input, so we do.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
    Rational q;
    try {
        q.assign(text);
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_rational: bad rational '" + text + "'");
    }
    if (denominator(q) == 0) throw std::invalid_argument("parse_rational: zero denominator in '" + text + "'");
    mpq_canonicalize(q.backend().data());
    return q;
}

inline std::string rational_to_string(const Rational& q) {
    return q.str();
}

inline Integer factorial(std::uint32_t n) {
    Integer f = 1;
    for (std::uint32_t k = 2; k <= n; ++k) f *= k;
    return f;
}

inline Rational rational_pow(const Rational& base, std::uint32_t e) {
    Rational p = 1;
    Rational b = base;
    while (e > 0) {
        if (e & 1u) p *= b;
        b *= b;
        e >>= 1u;
    }
    return p;
}

inline double to_double(const Rational& q) {
    return q.convert_to<double>();
}

} // namespace extremal
