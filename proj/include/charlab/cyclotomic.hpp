#pragma once

#include "charlab/rational.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace charlab {

// Exact element of Q(zeta_n), stored as a coefficient vector on the power
// basis 1, zeta, ..., zeta^{n-1} (not unique).  Equality and zero tests go
// through a canonical form: exponents are split by CRT across the prime-power
// factors of n and each factor is reduced to the basis
// zeta_q^0..zeta_q^{phi(q)-1} using the prime-power cyclotomic relation.
// Coefficients are exact rationals throughout.
class Cyclotomic {
 public:
  Cyclotomic() : order_(1), coeff_(1, Rational(0)) {}
  explicit Cyclotomic(Rational r) : order_(1), coeff_{std::move(r)} {}
  Cyclotomic(std::uint32_t order, std::vector<Rational> coeff);

  static Cyclotomic zero() { return Cyclotomic(); }
  static Cyclotomic one() { return Cyclotomic(Rational(1)); }
  // coeff * zeta_order^power
  static Cyclotomic root_power(std::uint32_t order, std::uint64_t power,
                               Rational coeff = Rational(1));

  std::uint32_t order() const { return order_; }
  const std::vector<Rational>& coeffs() const { return coeff_; }

  // Re-express in Q(zeta_N); N must be a multiple of order().
  Cyclotomic lifted(std::uint32_t N) const;

  Cyclotomic operator+(const Cyclotomic& o) const;
  Cyclotomic operator-(const Cyclotomic& o) const;
  Cyclotomic operator*(const Cyclotomic& o) const;
  Cyclotomic operator-() const;
  Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
  Cyclotomic& operator-=(const Cyclotomic& o) { return *this = *this - o; }

  Cyclotomic scaled(const Rational& s) const;
  Cyclotomic conj() const;
  // |z|^2 = z * conj(z); real, but returned as a Cyclotomic.
  Cyclotomic abs_squared() const { return *this * conj(); }

  bool is_zero() const;
  bool operator==(const Cyclotomic& o) const;
  bool operator!=(const Cyclotomic& o) const { return !(*this == o); }

  // Canonical coefficients in the tensor basis for Q(zeta_order); length
  // phi(order).  Two values are equal iff their canonical vectors at a common
  // order agree.
  std::vector<Rational> canonical() const;

  std::complex<double> to_complex() const;
  // Exact rational value if the element lies in Q.
  std::optional<Rational> as_rational() const;

  std::string to_string() const;  // coefficient-list rendering

 private:
  std::uint32_t order_;
  std::vector<Rational> coeff_;
};

std::uint32_t euler_phi(std::uint32_t n);
std::vector<std::pair<std::uint32_t, std::uint32_t>> factorize(std::uint32_t n);  // (p, p^a)

// Integer fast path of the canonical form: reduces a power-basis coefficient
// vector over Z (length = order) to the canonical tensor basis, length
// phi(order).  Zero test for integer cyclotomics without rational overhead.
std::vector<std::int64_t> canonical_int(std::uint32_t order, const std::vector<std::int64_t>& coeff);

}  // namespace charlab
