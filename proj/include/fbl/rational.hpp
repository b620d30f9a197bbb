#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "fbl/errors.hpp"

namespace fbl {

// Exact rational scalar. cpp_rational keeps itself in lowest terms with a
// positive denominator, which is exactly the invariant the analyzer needs:
// rank decisions must be tolerance-free.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(long long num, long long den) {
    if (den == 0) throw ParseError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(BigInt(num), BigInt(den));
}

inline int sign(const Rational& r) {
    if (r > 0) return 1;
    if (r < 0) return -1;
    return 0;
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Accepts "p", "-p", "p/q" with optional surrounding whitespace.
inline Rational parse_rational(const std::string& text) {
    auto first = text.find_first_not_of(" \t");
    auto last = text.find_last_not_of(" \t");
    if (first == std::string::npos) throw ParseError("empty rational literal");
    std::string body = text.substr(first, last - first + 1);
    try {
        auto slash = body.find('/');
        if (slash == std::string::npos) return Rational(BigInt(body));
        BigInt num(body.substr(0, slash));
        BigInt den(body.substr(slash + 1));
        if (den == 0) throw ParseError("rational with zero denominator: " + body);
        if (den < 0) {
            num = -num;
            den = -den;
        }
        return Rational(num, den);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("malformed rational literal: '" + body + "'");
    }
}

inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace fbl
