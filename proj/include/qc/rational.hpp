#ifndef QC_RATIONAL_HPP
#define QC_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace qc {

// Arbitrary-precision integers and rationals. Factorial ratios inside the
// Racah formulas overflow 64-bit integers already around j = 10, so these
// are big types throughout.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

Rational parse_rational(const std::string& text);

} // namespace qc

#endif
