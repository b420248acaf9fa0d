#pragma once

#include <cstdint>
#include <vector>

namespace charlab {

// Arithmetic in F_p for word-sized odd primes.  Everything is deterministic;
// the polynomial root finder takes an explicit seed for its splitting trials.
namespace fp {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t invmod(std::uint64_t a, std::uint64_t p);
// Square root mod an odd prime via Tonelli-Shanks; requires a to be a QR.
std::uint64_t sqrtmod(std::uint64_t a, std::uint64_t p);
bool is_prime(std::uint64_t n);
// Least primitive root mod prime p.
std::uint64_t primitive_root(std::uint64_t p);
// Least prime l with l ≡ 1 (mod e) and l > lower_bound.
std::uint64_t least_prime_1_mod(std::uint64_t e, std::uint64_t lower_bound);

// Dense polynomials over F_p, coefficient vector low-to-high, no trailing zeros.
using Poly = std::vector<std::uint64_t>;

Poly poly_trim(Poly f);
Poly poly_mul(const Poly& f, const Poly& g, std::uint64_t p);
Poly poly_mod(Poly f, const Poly& g, std::uint64_t p);
Poly poly_gcd(Poly f, Poly g, std::uint64_t p);
// x^e mod f.
Poly poly_xpow_mod(std::uint64_t e, const Poly& f, std::uint64_t p);
std::uint64_t poly_eval(const Poly& f, std::uint64_t x, std::uint64_t p);

// All roots in F_p of a polynomial that splits into linear factors over F_p
// (with multiplicity stripped).  Returns roots sorted ascending.
std::vector<std::uint64_t> poly_roots(const Poly& f, std::uint64_t p, std::uint64_t seed);

}  // namespace fp

}  // namespace charlab
