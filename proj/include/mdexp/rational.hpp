#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "mdexp/errors.hpp"

namespace mdexp {

// Exact arbitrary-precision integer, used for matching counts.
using BigInt = boost::multiprecision::cpp_int;

// Exact arbitrary-precision rational. Always stored in lowest terms with a
// positive denominator; all arithmetic is exact.
using Rat = boost::multiprecision::cpp_rational;

// Parses "num/den" or "num". Throws DomainError on malformed input or a zero
// denominator.
inline Rat rat_from_string(const std::string& text) {
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos) {
            return Rat(BigInt(text));
        }
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) {
            throw DomainError("rational with zero denominator: " + text);
        }
        return Rat(num, den);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw DomainError("malformed rational: " + text);
    }
}

// Lowest-terms rendering: "num/den", or just "num" when the denominator is 1.
inline std::string rat_to_string(const Rat& value) { return value.str(); }

inline double rat_to_double(const Rat& value) {
    return value.convert_to<double>();
}

inline Rat rat_pow(const Rat& base, unsigned exponent) {
    using boost::multiprecision::pow;
    return Rat(pow(numerator(base), exponent), pow(denominator(base), exponent));
}

inline Rat rat_abs(const Rat& value) { return value < 0 ? Rat(-value) : value; }

} // namespace mdexp
