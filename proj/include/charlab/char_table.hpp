#pragma once

#include "charlab/cyclotomic.hpp"
#include "charlab/group.hpp"

#include <cstdint>
#include <vector>

namespace charlab {

// Structure constants of the class algebra: coeff[i][j][l] counts pairs
// (x, y) in C_i x C_j with x*y = rep(C_l).
std::vector<std::vector<std::vector<std::uint64_t>>> class_coefficients(const GroupHandle& G,
                                                                        const ConjClasses& cls);

// Least prime l with l ≡ 1 (mod exponent), l > 2*sqrt(order), and l > above.
// Such l never divides the group order (every prime divisor of the order
// divides the exponent, and l ≡ 1 mod exponent forces l > exponent).
std::uint64_t admissible_prime(std::uint32_t exponent, std::uint64_t order,
                               std::uint64_t above = 0);

// Complete list of irreducible characters, computed by splitting the common
// eigenvectors of the class matrices over F_l and lifting each value to an
// exact cyclotomic integer through its eigenvalue multiplicities.  A value on
// a class with representative of order n is stored as the multiset counts
// (m_0, ..., m_{n-1}): chi(C) = sum_c m_c zeta_n^c.  The counts are intrinsic
// (multiplicities of representation eigenvalues), so tables computed with
// different admissible primes coincide entry for entry.
//
// Rows are sorted by degree ascending, ties broken by comparing count vectors
// column by column, lexicographically descending; the trivial character is
// always row 0.  Columns follow conjugacy-class enumeration order (class 0 is
// the identity).
struct CharacterTable {
  std::string group;
  std::uint64_t order = 0;
  std::uint32_t exponent = 1;
  std::uint64_t prime = 0;  // witness prime the table was computed with
  std::vector<std::uint32_t> class_rep;
  std::vector<std::uint32_t> class_size;
  std::vector<std::uint32_t> class_rep_order;
  std::vector<std::uint32_t> inverse_class;
  std::vector<std::uint32_t> degree;                          // per row
  std::vector<std::vector<std::vector<std::uint32_t>>> counts;  // [row][class][c]

  std::uint32_t rows() const { return static_cast<std::uint32_t>(degree.size()); }
  std::uint32_t cols() const { return static_cast<std::uint32_t>(class_rep.size()); }
  Cyclotomic value(std::uint32_t row, std::uint32_t cls) const;
  // value / degree (entries of the normalized row, a trace at the class rep).
  Cyclotomic normalized_value(std::uint32_t row, std::uint32_t cls) const;
};

CharacterTable compute_character_table(const GroupHandle& G, const ConjClasses& cls,
                                       std::uint64_t prime_override = 0);

// Exact check of sum_l |C_l| chi_r(l) conj(chi_s(l)) = delta_{rs} |G| for all
// row pairs, in integer cyclotomic arithmetic.
bool verify_row_orthogonality(const CharacterTable& T);

// Exact check of |C_j| sum_r chi_r(j) conj(chi_r(l)) = delta_{jl} |G| for all
// class pairs (second orthogonality relation).
bool verify_column_orthogonality(const CharacterTable& T);

// Classes on which the row attains its degree (all representation eigenvalues
// equal 1) — the kernel of the representation, as a sorted class list.
std::vector<std::uint32_t> row_kernel_classes(const CharacterTable& T, std::uint32_t row);

// True when the kernel is just the identity class.
bool is_row_faithful(const CharacterTable& T, std::uint32_t row);

}  // namespace charlab
