#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace ropg {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "num/den" with the denominator omitted when it is 1.
inline std::string to_fraction_string(const Rational& q) {
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline double to_double(const Rational& q) {
    return q.convert_to<double>();
}

}  // namespace ropg
