#pragma once

#include "charlab/intmatrix.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace charlab {

struct BuildOptions {
  std::uint64_t budget = 500000;  // maximum group order enumerated
};

// Immutable finite group with elements indexed 0..size-1 in BFS insertion
// order (identity = 0, then closure over the generators in their given
// order, right multiplication).  Backends: cyclic (index arithmetic),
// explicit multiplication table, and matrices over Z/m.
class GroupHandle : public std::enable_shared_from_this<GroupHandle> {
 public:
  using Ptr = std::shared_ptr<const GroupHandle>;

  // Descriptors: "cyclic(n)", "q8", "sl(d,m)", "aff(d,p)" (= SL_d(F_p) |x F_p^d,
  // embedded as (d+1)x(d+1) matrices), "vec(p,d)" (= (Z/p)^d additive).
  static Ptr build(const std::string& descriptor, BuildOptions opts = {});
  // Matrix group over Z/m generated by the given matrices (row-major entries).
  static Ptr build_matrix_group(const std::string& descriptor, std::uint32_t dim,
                                std::uint32_t modulus,
                                const std::vector<std::vector<std::int64_t>>& generators,
                                BuildOptions opts = {});
  // Explicit finite group from a multiplication table (table[i][j] = i*j,
  // identity must be index 0).
  static Ptr from_table(const std::string& descriptor,
                        std::vector<std::vector<std::uint32_t>> table,
                        std::vector<std::uint32_t> generator_indices);

  const std::string& descriptor() const { return descriptor_; }
  std::uint32_t size() const { return size_; }
  std::uint32_t identity() const { return 0; }
  std::uint32_t mul(std::uint32_t x, std::uint32_t y) const;
  std::uint32_t inv(std::uint32_t x) const { return inv_[x]; }
  std::uint32_t conjugate(std::uint32_t s, std::uint32_t x) const {  // s x s^{-1}
    return mul(mul(s, x), inv_[s]);
  }
  const std::vector<std::uint32_t>& generators() const { return gens_; }
  // g as a product of generators, left to right (generator positions).
  std::vector<std::uint32_t> word(std::uint32_t g) const;
  std::uint32_t order_of(std::uint32_t g) const;

  bool is_matrix_backend() const { return backend_ == Backend::Matrix; }
  std::uint32_t mat_dim() const { return mat_d_; }
  std::uint32_t modulus() const { return mat_m_; }
  // Entries (row-major, reduced mod m) of element i; matrix backend only.
  const std::uint8_t* entries(std::uint32_t i) const { return flat_.data() + std::size_t(i) * mat_d_ * mat_d_; }
  std::optional<std::uint32_t> index_of_entries(const std::uint8_t* e) const;

  // Reduction Z-matrix -> element index (entry-wise mod m); errors if the
  // shape mismatches or the image is not in the enumerated group.
  std::uint32_t reduce(const IntegerMatrixElement& M) const;

 private:
  GroupHandle() = default;
  enum class Backend { Cyclic, Table, Matrix };
  Backend backend_ = Backend::Cyclic;
  std::string descriptor_;
  std::uint32_t size_ = 0;

  // Cyclic
  std::uint32_t cyc_n_ = 0;
  // Table
  std::vector<std::vector<std::uint32_t>> table_;
  // Matrix
  std::uint32_t mat_d_ = 0, mat_m_ = 0, mat_bits_ = 0;
  std::vector<std::uint8_t> flat_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;

  std::vector<std::uint32_t> gens_;
  std::vector<std::uint32_t> inv_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> parent_;  // (element, gen position)

  std::uint64_t pack(const std::uint8_t* e) const;
  void bfs_close(const std::vector<std::vector<std::uint8_t>>& gen_entries, std::uint64_t budget);
  void finish_build();
};

// Conjugacy class data: class of each element, sizes, least-index
// representatives, and the involution mapping a class to the class of
// inverses.
struct ConjClasses {
  std::vector<std::uint32_t> class_of;   // per element
  std::vector<std::uint32_t> size;      // per class
  std::vector<std::uint32_t> rep;       // least element index in the class
  std::vector<std::uint32_t> inverse_class;
  std::uint32_t count() const { return static_cast<std::uint32_t>(size.size()); }
};

ConjClasses conjugacy_classes(const GroupHandle& G);

// lcm of element orders (computed over class representatives).
std::uint32_t group_exponent(const GroupHandle& G, const ConjClasses& cls);

// All subgroups as sorted element-index sets, by closing the cyclic
// subgroups under join; brute force, guarded by a size budget.
std::vector<std::vector<std::uint32_t>> enumerate_subgroups(const GroupHandle& G,
                                                            std::uint32_t budget = 500);

}  // namespace charlab
