#pragma once

#include "charlab/cyclotomic.hpp"
#include "charlab/gap.hpp"
#include "charlab/gns.hpp"
#include "charlab/intmatrix.hpp"
#include "charlab/trace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace charlab {

// --- automorphisms of a finite group --------------------------------------------

// Bijective homomorphism stored as the image of every element index.
// Construction checks both properties exhaustively.
class Automorphism {
 public:
  Automorphism(GroupHandle::Ptr G, std::vector<std::uint32_t> image);

  static Automorphism identity(GroupHandle::Ptr G);
  // g -> s g s^{-1}
  static Automorphism inner(GroupHandle::Ptr G, std::uint32_t s);
  // v -> M v mod p on a vec(p,d) group (M is d x d).
  static Automorphism linear(GroupHandle::Ptr vec_group, const IntegerMatrixElement& M);

  const GroupHandle::Ptr& group() const { return group_; }
  std::uint32_t operator()(std::uint32_t g) const { return image_[g]; }
  const std::vector<std::uint32_t>& image() const { return image_; }

  Automorphism compose(const Automorphism& o) const;  // this after o
  Automorphism inverse() const;
  bool operator==(const Automorphism& o) const { return image_ == o.image_; }
  // Dedupe key (images packed as bytes).
  std::string key() const;

 private:
  struct Unchecked {};
  Automorphism(GroupHandle::Ptr G, std::vector<std::uint32_t> image, Unchecked);
  GroupHandle::Ptr group_;
  std::vector<std::uint32_t> image_;
};

// Acting group presented by generator automorphisms.  Construction closes the
// generated subgroup of Aut(Gamma) (within the budget) and records whether it
// contains every inner automorphism.
struct AutomorphismAction {
  GroupHandle::Ptr gamma;
  std::vector<Automorphism> generators;
  std::uint32_t closure_size = 0;
  bool inner_contained = false;
};
AutomorphismAction automorphism_action(GroupHandle::Ptr G, std::vector<Automorphism> gens,
                                       std::uint32_t closure_budget = 20000);
// Conjugations by the group generators (the inner action; flag always true).
AutomorphismAction inner_action(GroupHandle::Ptr G);

// phi composed with every generator equals phi (hence invariance under the
// whole acting group).  Exact when the trace carries exact values.
bool relative_invariance(const Trace& phi, const AutomorphismAction& action);

// --- the extended unitary and its spectral gap ----------------------------------

// The unitary on the model sending the translate of g to the translate of
// lam(g); fixes the cyclic vector and intertwines pi(g) with pi(lam(g)).
// Validation if phi is not invariant under lam (the map is not isometric).
MatC relative_unitary(const GnsModel& m, const Automorphism& lam);

// l1 element on the acting group: (automorphism, coefficient) terms.
using ActingElement = std::vector<std::pair<Automorphism, RationalComplex>>;

// Two-sided check of the relative gap criterion: the extended image of a
// restricted to the orthocomplement of the cyclic vector has norm <= sqrt(beta)
// iff phi(sum_l b_l x* x^l - beta x*x) <= (1-beta)|phi(x)|^2 for all x, where
// b = a* a over the acting group.  Coefficients of a must sum to 1 (the
// criterion needs the extended image of a to fix the cyclic vector).
GapReport alpha_gap(const GnsModel& m, const AutomorphismAction& action, const ActingElement& a,
                    double beta, const GapTestPolicy& pol = {});

// Exact restricted norm of the extended image of a (certified).
NormCert alpha_restricted_norm(const GnsModel& m, const ActingElement& a);

// --- the relative-character criterion --------------------------------------------

struct RelativeCharacterReport {
  std::uint32_t dim_invariant = 0;  // invariant vectors of the extended unitaries
  std::uint32_t dim_central = 0;    // central projections joined by the action
  bool routes_agree = false;
  bool relative_character = false;  // both routes say dimension 1
};

// Decides extremality among invariant traces by the dimension of the invariant
// subspace, computed two ways: the common fixed space of the extended
// unitaries, and the orbit count of the action on the minimal central
// projections.  Validation unless the action is flagged as containing all
// inner automorphisms.
RelativeCharacterReport is_relative_character(const GnsModel& m, const AutomorphismAction& action,
                                              std::uint64_t seed = 0);

// --- rational torus orbits --------------------------------------------------------

// Point of (Q/Z)^d: numerators over a common denominator q, reduced to [0, q).
struct RationalPoint {
  std::uint32_t q = 1;
  std::vector<std::uint32_t> num;
};

// Orbit of a rational point under integer matrices acting mod 1; all points
// keep the starting denominator (numerators mod q), BFS insertion order.
struct RationalOrbit {
  std::uint32_t d = 0;
  std::uint32_t q = 1;
  std::vector<std::vector<std::uint32_t>> points;
};

// BFS closure under the generators and their inverses.  Budget error when the
// orbit exceeds the cap.
RationalOrbit orbit(const RationalPoint& v, const std::vector<IntegerMatrixElement>& gens,
                    std::uint64_t budget = std::uint64_t(1) << 22);

// Fourier transform of the uniform measure on a finite orbit: a positive
// definite function on the integer lattice, phi(m) = avg of exp(2 pi i <x, m>).
class TorusTrace {
 public:
  explicit TorusTrace(RationalOrbit O);

  std::uint32_t dim() const { return orbit_.d; }
  std::uint32_t denominator() const { return orbit_.q; }
  const RationalOrbit& support_orbit() const { return orbit_; }

  Cx value(const std::vector<std::int64_t>& m) const;
  // Exact element of Q(zeta_q); Validation when q > 64.
  Cyclotomic exact_value(const std::vector<std::int64_t>& m) const;
  std::optional<Rational> rational_value(const std::vector<std::int64_t>& m) const;
  // Coarse bound on the float accumulation error of value().
  double eval_error_bound() const;

 private:
  RationalOrbit orbit_;
  std::vector<Cx> roots_;  // zeta_q powers
};

TorusTrace orbit_trace(RationalOrbit O);

// phi(A^T m) == phi(m) for every generator and every 0 < |m|_inf <= ball,
// checked exactly when the denominator permits.
bool relative_invariance(const TorusTrace& phi, const std::vector<IntegerMatrixElement>& gens,
                         std::int64_t ball);

// Positive-definiteness of the Fourier trace on the lattice ball: Gram matrix
// [phi(m_i - m_j)] over |m|_inf <= ball must be Hermitian PSD.
struct TorusTraceCheck {
  bool hermitian = false;
  bool positive = false;
  double min_gram_eigenvalue = 0.0;
  bool pass() const { return hermitian && positive; }
};
TorusTraceCheck torus_trace_check(const TorusTrace& phi, std::int64_t ball, double tol = 1e-9);

// --- the denominator scan ---------------------------------------------------------

struct TorusOrbitRow {
  std::uint32_t orbit_id = 0;
  std::uint64_t orbit_size = 0;
  std::vector<std::int64_t> argmax_m;
  double max_abs = 0.0;
  std::optional<Rational> max_abs_exact;  // when the trace value there is rational
};

struct TorusScanRow {
  std::uint32_t q = 1;
  std::vector<TorusOrbitRow> orbits;
  double max_abs = 0.0;
  std::string flag;  // "", "trivial denominator", or the d = 2 regime note
};

struct TorusScanSeries {
  std::uint32_t d = 0;
  std::int64_t ball = 0;
  std::vector<TorusScanRow> rows;
};

// For each q: split the points of denominator exactly q into orbits under the
// elementary generators, build each orbit trace, and take the max of |phi(m)|
// over 0 < |m|_inf <= ball.  q = 1 contributes the constant trace, flagged.
TorusScanSeries torus_limit_scan(std::uint32_t d, const std::vector<std::uint32_t>& denominators,
                                 std::int64_t ball,
                                 std::uint64_t orbit_budget = std::uint64_t(1) << 22);

// One line per (q, orbit): q, orbit id, orbit size, argmax m, |phi| exact or float.
std::string torus_scan_csv(const TorusScanSeries& s);
nlohmann::json torus_scan_to_json(const TorusScanSeries& s);

}  // namespace charlab
