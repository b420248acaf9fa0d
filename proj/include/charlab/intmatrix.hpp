#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace charlab {

// Unimodular integer matrix (entries row-major).  Used for elements of
// SL_d(Z) and for the (d+1)x(d+1) block embedding of affine transformations;
// the determinant is verified to be exactly +1 or -1 at construction.
struct IntegerMatrixElement {
  std::uint32_t d = 0;
  std::vector<std::int64_t> a;  // row-major, size d*d

  IntegerMatrixElement() = default;
  IntegerMatrixElement(std::uint32_t dim, std::vector<std::int64_t> entries);

  static IntegerMatrixElement identity(std::uint32_t dim);
  // Elementary matrix Id + c * E_{ij} (i != j, 0-based).
  static IntegerMatrixElement elementary(std::uint32_t dim, std::uint32_t i, std::uint32_t j,
                                         std::int64_t c);

  std::int64_t at(std::uint32_t i, std::uint32_t j) const { return a[i * d + j]; }
  IntegerMatrixElement mul(const IntegerMatrixElement& o) const;
  IntegerMatrixElement transpose() const;
  // Exact inverse (adjugate over the +-1 determinant).
  IntegerMatrixElement inverse() const;
  std::int64_t det() const;
  bool operator==(const IntegerMatrixElement& o) const { return d == o.d && a == o.a; }
  std::string key() const;  // canonical text key for hashing / sorting
  std::string to_string() const;
};

// The elementary generators E_{ij}(+1), E_{ij}(-1) of SL_d(Z), ordered by
// (i, j) lexicographically with +1 before -1.
std::vector<IntegerMatrixElement> sl_elementary_generators(std::uint32_t d);

// Word-length ball of given radius over the provided generators, starting at
// the identity; BFS insertion order (deterministic).
std::vector<IntegerMatrixElement> word_ball(const std::vector<IntegerMatrixElement>& gens,
                                            std::uint32_t radius);

}  // namespace charlab
