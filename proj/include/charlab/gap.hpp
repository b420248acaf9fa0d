#pragma once

#include "charlab/gns.hpp"
#include "charlab/intmatrix.hpp"
#include "charlab/trace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace charlab {

// Finitely supported element of the group algebra, either over an enumerated
// finite group (element ids) or over integer matrices.  Coefficients carry an
// exact rational-complex layer when constructed from one.
class GroupAlgebraElement {
 public:
  enum class Backend { Finite, IntegerMatrix };

  static GroupAlgebraElement on_group(GroupHandle::Ptr G,
                                      std::vector<std::pair<std::uint32_t, RationalComplex>> terms);
  static GroupAlgebraElement on_group_float(GroupHandle::Ptr G,
                                            std::vector<std::pair<std::uint32_t, Cx>> terms);
  static GroupAlgebraElement delta(GroupHandle::Ptr G, std::uint32_t g);
  // Uniform weights on the symmetrized generating set gens + inverses.
  static GroupAlgebraElement uniform_on_gens(GroupHandle::Ptr G);

  static GroupAlgebraElement on_integer_group(
      std::uint32_t dim, std::vector<std::pair<IntegerMatrixElement, RationalComplex>> terms);
  // Uniform weights on the elementary generators of the degree-d integer
  // special linear group (the set is already inverse-closed).
  static GroupAlgebraElement uniform_on_elementary(std::uint32_t dim);

  Backend backend() const { return backend_; }
  bool exact() const { return exact_.has_value(); }
  std::size_t size() const { return coeffs_.size(); }
  const GroupHandle::Ptr& group() const;                    // Finite backend
  const std::vector<std::uint32_t>& elements() const;       // Finite backend
  const std::vector<IntegerMatrixElement>& matrices() const;  // IntegerMatrix backend
  std::uint32_t dim() const;                                // IntegerMatrix backend
  const std::vector<Cx>& coefficients() const { return coeffs_; }
  std::optional<RationalComplex> exact_coefficient(std::size_t i) const;

  double l1() const;
  // Exact l1 norm; Validation if there is no exact layer or some coefficient
  // modulus is irrational.
  Rational l1_exact() const;

  GroupAlgebraElement star() const;
  GroupAlgebraElement scaled(const RationalComplex& c) const;
  // Push an integer-matrix element into a finite matrix-group quotient.
  GroupAlgebraElement reduce_to(GroupHandle::Ptr G) const;

 private:
  GroupAlgebraElement() = default;
  Backend backend_ = Backend::Finite;
  GroupHandle::Ptr group_;
  std::uint32_t dim_ = 0;
  std::vector<std::uint32_t> ids_;
  std::vector<IntegerMatrixElement> mats_;
  std::vector<Cx> coeffs_;
  std::optional<std::vector<RationalComplex>> exact_;

  friend GroupAlgebraElement mul(const GroupAlgebraElement&, const GroupAlgebraElement&);
  friend GroupAlgebraElement add(const GroupAlgebraElement&, const GroupAlgebraElement&);
};

GroupAlgebraElement star(const GroupAlgebraElement& a);
GroupAlgebraElement mul(const GroupAlgebraElement& a, const GroupAlgebraElement& b);
GroupAlgebraElement add(const GroupAlgebraElement& a, const GroupAlgebraElement& b);

// phi evaluated on an element: sum of coeff * phi(g).
Cx trace_of(const Trace& phi, const GroupAlgebraElement& a);
// phi(x^* z x), evaluated purely from trace values.
Cx trace_quadratic(const Trace& phi, const GroupAlgebraElement& z, const GroupAlgebraElement& x);
// phi(sum_gamma z_gamma gamma^* x^* gamma x).
Cx trace_conj_quadratic(const Trace& phi, const GroupAlgebraElement& z,
                        const GroupAlgebraElement& x);

// pi_phi(a), c_phi(a) = sum coeff * pi(g) rho(g) as matrices on the model.
MatC algebra_image_pi(const GnsModel& m, const GroupAlgebraElement& a);
MatC algebra_image_conj(const GnsModel& m, const GroupAlgebraElement& a);

// --- two-sided gap checks ----------------------------------------------------

struct GapTestPolicy {
  std::uint32_t random_vectors = 1000;
  std::uint32_t support_cap = 24;  // support size of random test vectors
  std::uint64_t seed = 0;
  bool pair_combinations = true;  // all pairwise sums/differences of basis deltas
  bool analytic_witness = true;   // lift the top singular vector to a test vector
};

// Sparse vector in the group algebra used by inequality-side sweeps.
struct SparseVector {
  std::vector<std::uint32_t> ids;
  std::vector<Cx> cs;
  std::string name;
};
// Test set per the policy: full standard basis, all pairwise sums and
// differences on small groups, and seeded random sparse vectors.
std::vector<SparseVector> gap_test_vectors(const GnsModel& m, const GapTestPolicy& pol,
                                           std::string& description);
// Test vector supported on the pivots whose model image is w.
SparseVector pivot_lift(const GnsModel& m, const VecC& w, std::string name);
// Orthonormal basis of the orthocomplement of a unit vector (n x (n-1)).
MatC complement_basis(const VecC& v);
// Unit right-singular vector for the largest singular value.
VecC top_right_singular_vector(const MatC& A);

// One beta row: the exact-norm side against the trace-inequality side.
struct GapReport {
  std::string kind;  // "translation", "conjugation", or "relative"
  double beta = 0.0;
  double norm = 0.0;         // operator norm (restricted for conjugation)
  double norm_radius = 0.0;  // certified error bound on the norm
  bool norm_side = false;    // norm <= sqrt(beta)
  bool inequality_side = true;  // no test vector violates the trace inequality
  double worst_residual = 0.0;  // max inequality excess over the test set
  std::vector<std::string> witnesses;  // up to 3 violating test vectors
  std::string test_set;
  bool borderline = false;  // |norm^2 - beta| within tolerance: sides may differ
  bool agree() const { return borderline || norm_side == inequality_side; }
};

// Translation criterion: |pi(a)| <= sqrt(beta)  iff  phi(x*(b - beta)x) <= 0
// for all x, with b = a*a.
GapReport norm_pi(const GnsModel& m, const GroupAlgebraElement& a, double beta,
                  const GapTestPolicy& pol = {});
std::vector<GapReport> norm_pi_sweep(const GnsModel& m, const GroupAlgebraElement& a,
                                     const std::vector<double>& betas,
                                     const GapTestPolicy& pol = {});

// Conjugation criterion: |c(a) restricted to the orthocomplement of the cyclic
// vector| <= sqrt(beta)  iff  phi(sum b_g g*x*gx - beta x*x) <= (1-beta)|phi(x)|^2.
GapReport norm_conj(const GnsModel& m, const GroupAlgebraElement& a, double beta,
                    const GapTestPolicy& pol = {});
std::vector<GapReport> norm_conj_sweep(const GnsModel& m, const GroupAlgebraElement& a,
                                       const std::vector<double>& betas,
                                       const GapTestPolicy& pol = {});

// Exact restricted norm of c(a) on the orthocomplement of the cyclic vector
// (the quantity the conjugation criterion bounds), with a certified radius.
NormCert conj_restricted_norm(const GnsModel& m, const GroupAlgebraElement& a);

// Tensor-square criterion: full and Id-restricted norms of (pi (x) pi*)(a),
// the inner-product identities rewriting both in trace terms, and the one-way
// finite-dimensional bound with the cubed-dimension right-hand side.
struct TensorReport {
  double beta = 0.0;
  double full_norm = 0.0, full_radius = 0.0;
  double restricted_norm = 0.0, restricted_radius = 0.0;
  bool identities_ok = false;   // trace-side formulas reproduce matrix inner products
  double identity_error = 0.0;  // worst identity deviation
  bool norm_side = false;       // restricted norm <= sqrt(beta)
  bool oneway_ok = true;        // no sampled family beats the cubed-dimension bound
  double worst_excess = 0.0;    // max LHS - RHS over sampled families
  std::string test_set;
};
TensorReport norm_tensor(const GnsModel& m, const GroupAlgebraElement& a, double beta,
                         const GapTestPolicy& pol = {});

// Matrix form of the complement-norm criterion: for A with Av = v, |v| = 1 and
// 0 < beta < 1, |A restricted to the orthocomplement of v| <= sqrt(beta) iff
// beta|w|^2 - |Aw|^2 >= (beta - 1)|<w,v>|^2 for all w.
struct ComplementNormReport {
  double restricted_norm = 0.0;
  double norm_radius = 0.0;
  bool norm_side = false;
  bool inequality_side = true;
  double worst_excess = 0.0;
  bool borderline = false;
  bool agree() const { return borderline || norm_side == inequality_side; }
};
ComplementNormReport complement_norm_lemma(const MatC& A, const VecC& v, double beta,
                                           std::uint32_t samples = 200, std::uint64_t seed = 0);

// --- certificate propagation along trace sequences ----------------------------

enum class GapKind { Translation, Conjugation };

struct PropagationPolicy {
  double tol = 1e-8;
  std::uint32_t random_vectors = 200;
  std::uint32_t support_cap = 6;
  std::uint64_t seed = 0;
  double declared_limit_tol = 1e-6;
};

struct PropagationReport {
  bool common_beta = false;   // every member satisfies the inequality at beta on the ball
  double member_worst = 0.0;  // max member residual
  double limit_worst = 0.0;   // max residual of the limit values
  bool propagated = false;
  std::uint32_t tested_vectors = 0;
  double achieved_tol = 0.0;  // convergence quality from the pointwise limit
  std::string note;
};

// Evaluates the chosen inequality for every member trace and for the
// pointwise-limit values on the ball; test vectors are supported on elements
// whose relevant products stay inside the ball.
PropagationReport certificate_propagation(const std::vector<Trace>& seq,
                                          const GroupAlgebraElement& a, double beta,
                                          const std::vector<IntegerMatrixElement>& ball,
                                          GapKind kind, const PropagationPolicy& pol = {});

// --- reporting ------------------------------------------------------------------

nlohmann::json gap_report_to_json(const GapReport& r);
nlohmann::json tensor_report_to_json(const TensorReport& r);
nlohmann::json propagation_report_to_json(const PropagationReport& r);
// One fixed-width line per report: beta, norm, residual, verdict, witnesses.
std::string gap_table(const std::vector<GapReport>& rows);

}  // namespace charlab
