#pragma once

#include "charlab/char_table.hpp"
#include "charlab/cyclotomic.hpp"
#include "charlab/group.hpp"
#include "charlab/intmatrix.hpp"
#include "charlab/linalg.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace charlab {

// A trace: a normalized, conjugation-invariant, positive-definite function.
// Finite backend: one value per conjugacy class of a finite group, exact
// (cyclotomic) when available, always with a float mirror.  Pulled-back
// backend: a normalized character row of a finite matrix-group quotient,
// evaluated on integer matrices by reduction mod m, so the same object acts
// as a trace on the infinite matrix group.
class Trace {
 public:
  enum class Backend { FiniteClassFunction, PulledBack };

  // Exact class-function trace; values are per conjugacy class, class 0 = e.
  static Trace class_function(GroupHandle::Ptr G, ConjClasses cls,
                              std::vector<Cyclotomic> values, std::string label);
  // Float-valued variant (no exact layer).
  static Trace class_function_float(GroupHandle::Ptr G, ConjClasses cls, std::vector<Cx> values,
                                    std::string label);
  // Normalized irreducible row chi_row / degree of the table's group.
  static Trace character_row(GroupHandle::Ptr G, ConjClasses cls,
                             std::shared_ptr<const CharacterTable> table, std::uint32_t row);
  // Same, but tagged as pulled back through reduce(.) mod the group modulus;
  // quotient must be a matrix-backend group.
  static Trace pulled_back(GroupHandle::Ptr quotient, ConjClasses cls,
                           std::shared_ptr<const CharacterTable> table, std::uint32_t row);
  static Trace delta_e(GroupHandle::Ptr G, ConjClasses cls);
  static Trace constant_one(GroupHandle::Ptr G, ConjClasses cls);

  Backend backend() const { return backend_; }
  const std::string& label() const { return label_; }
  const GroupHandle::Ptr& group() const { return group_; }
  const ConjClasses& classes() const { return cls_; }
  bool exact() const { return exact_.has_value(); }
  // Row provenance (character_row / pulled_back); Validation if unknown.
  std::uint32_t row() const;
  std::optional<std::uint32_t> row_provenance() const { return row_; }
  // Modulus of the quotient (PulledBack only).
  std::uint32_t modulus() const;

  Cx class_value(std::uint32_t cls) const { return values_.at(cls); }
  std::optional<Cyclotomic> exact_class_value(std::uint32_t cls) const;
  Cx value_at(std::uint32_t g) const { return values_[cls_.class_of.at(g)]; }
  // Evaluation on an integer matrix via reduce; group must be matrix-backend.
  Cx value_at(const IntegerMatrixElement& gamma) const;
  Cyclotomic exact_value_at(const IntegerMatrixElement& gamma) const;

  // Forget pulled-back provenance: the same values as a plain class function.
  Trace as_class_function() const;

 private:
  Trace() = default;
  friend Trace trace_from_json(const nlohmann::json& j);

  Backend backend_ = Backend::FiniteClassFunction;
  std::string label_;
  GroupHandle::Ptr group_;
  ConjClasses cls_;
  std::optional<std::vector<Cyclotomic>> exact_;
  std::vector<Cx> values_;  // float mirror, always populated
  std::shared_ptr<const CharacterTable> table_;  // provenance, may be null
  std::optional<std::uint32_t> row_;
};

// Outcome of the three-axiom check.  When tol == 0 positivity is decided by
// an exact pivoted LDL of the Gram matrix (rational or Gaussian-rational
// values only) and exact_certificate is set; otherwise the minimal eigenvalue
// of the float Gram decides, compared against -tol.
struct TraceCheckReport {
  bool normalized = false;
  bool conjugation_invariant = false;
  bool positive = false;
  double min_gram_eigenvalue = 0.0;
  bool exact_certificate = false;
  std::uint32_t gram_rank = 0;  // exact path only (complex rank)
  std::string regime;
  bool all_pass() const { return normalized && conjugation_invariant && positive; }
};

// Gram check on an explicit element subset (must contain the identity).
TraceCheckReport is_trace(const Trace& phi, const std::vector<std::uint32_t>& S,
                          double tol = 1e-9);
// Regime-selecting variant: full group when |G| <= 2000, else random subsets
// plus the cyclic subgroups of all class representatives; regime is recorded.
TraceCheckReport is_trace(const Trace& phi, double tol = 1e-9, std::uint64_t seed = 0);
// Pulled-back variant on a set of integer matrices (must contain Id); also
// samples conjugation invariance with integer-matrix conjugators.
TraceCheckReport is_trace(const Trace& phi, const std::vector<IntegerMatrixElement>& S,
                          double tol = 1e-9, std::uint64_t seed = 0);

// Pointwise convex combination of class-function traces on a common group.
Trace convex_combine(const std::vector<Rational>& weights, const std::vector<Trace>& traces);

// True iff phi - alpha * psi is positive definite, decided over the whole
// group through the character decomposition: the difference is positive
// definite iff every irreducible coefficient is nonnegative.  Exact when both
// traces are exact (signs of provably nonzero coefficients are resolved in
// floating point after an exact zero test).
bool dominates(const Trace& phi, const Trace& psi, const Rational& alpha,
               std::shared_ptr<const CharacterTable> table = nullptr);

// Tail values of a trace sequence on an evaluation set.
struct LimitReport {
  std::vector<Cx> values;    // values of the last trace on S
  double achieved_tol = 0.0; // max deviation between the last two traces on S
};

// Limit of a trace sequence on S; throws Numeric when the last step still
// moves some value by more than declared_tol.
LimitReport pointwise_limit(const std::vector<Trace>& seq, const std::vector<std::uint32_t>& S,
                            double declared_tol);
LimitReport pointwise_limit(const std::vector<Trace>& seq,
                            const std::vector<IntegerMatrixElement>& S, double declared_tol);

// Finitely supported invariant random subgroup: distinct subgroups (sorted
// element-index lists) with weights constant on conjugation orbits.
struct InvariantRandomSubgroup {
  GroupHandle::Ptr group;
  std::vector<std::vector<std::uint32_t>> subgroups;
  std::vector<Rational> weights;
};

// Throws Validation unless every atom is a subgroup, atoms are distinct,
// weights are nonnegative and sum to 1, and the support is closed under
// conjugation with orbit-constant weights.
void validate_irs(const InvariantRandomSubgroup& mu);

// phi(g) = total weight of subgroups containing g.  Restricted to |G| <= 500.
Trace irs_to_trace(const InvariantRandomSubgroup& mu);

// JSON forms: backend tag, group descriptor, label, and values (exact
// cyclotomics as order + rational coefficient strings, floats as [re, im]).
// Round-trips exactly for groups rebuildable from their descriptor.
nlohmann::json trace_to_json(const Trace& t);
Trace trace_from_json(const nlohmann::json& j);

nlohmann::json cyclotomic_to_json(const Cyclotomic& z);
Cyclotomic cyclotomic_from_json(const nlohmann::json& j);

// Ball files: integer matrices row-major, with the dimension alongside.
void write_ball_file(const std::string& path, std::uint32_t dim,
                     const std::vector<IntegerMatrixElement>& ball);
std::vector<IntegerMatrixElement> read_ball_file(const std::string& path);

}  // namespace charlab
