#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <string>

namespace charlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational rational_of(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

// Renders "p/q" (or just "p" when the denominator is 1), the CSV convention.
inline std::string rational_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// Exact complex rational, used for coefficients of group algebra elements.
struct RationalComplex {
  Rational re;
  Rational im;

  RationalComplex() = default;
  RationalComplex(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}

  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
  RationalComplex conj() const { return {re, -im}; }
  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  RationalComplex operator+(const RationalComplex& o) const { return {re + o.re, im + o.im}; }
  RationalComplex operator-(const RationalComplex& o) const { return {re - o.re, im - o.im}; }
  RationalComplex operator*(const RationalComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  bool operator==(const RationalComplex& o) const { return re == o.re && im == o.im; }
};

}  // namespace charlab
