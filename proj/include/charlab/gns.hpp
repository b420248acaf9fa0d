#pragma once

#include "charlab/char_table.hpp"
#include "charlab/linalg.hpp"
#include "charlab/trace.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace charlab {

struct GnsOptions {
  // Residual-diagonal cutoff for the pivoted rank factorization.  Gram
  // diagonals are phi(e) = 1, so relative and absolute agree.
  double rank_tol = 1e-8;
  // Determine rank and pivot order by exact rational elimination instead of
  // floating point.  Needs rational or Gaussian-rational trace values and
  // |G| <= 200.
  bool exact = false;
  std::uint32_t dim_budget = 1500;        // largest Hilbert space dimension built
  std::uint32_t candidate_budget = 4096;  // pivot candidates examined directly
  // When the candidate set is sampled, a caller who knows the rank in advance
  // can pass it here; matching it certifies the sampled span is complete.
  std::optional<std::uint32_t> expected_rank;
  std::uint64_t seed = 0;
  // Re-run the trace axioms before building (skip only if the same trace was
  // already checked).
  bool validate_trace = true;
};

// Finite-dimensional model of the cyclic representation attached to a trace:
// coordinates live on the span of the pivot translates, pivot Gram = L L^*.
struct GnsModel {
  GroupHandle::Ptr group;
  ConjClasses cls;
  std::vector<Cx> phi_class;  // trace value per conjugacy class
  std::string trace_label;

  std::uint32_t n = 0;                  // Hilbert space dimension
  std::vector<std::uint32_t> pivots;    // element ids p_i spanning the model
  MatC L;                               // lower triangular factor of the pivot Gram
  VecC v;                               // coordinates of the cyclic vector (delta_e)
  std::vector<MatC> pi_gen, rho_gen;    // generator images (left / right translation)
  bool exact_rank = false;              // rank came from exact elimination
  std::string certification;            // how completeness of the span was established
  double reconstruction_error = 0.0;    // max |<pi(g)v,v> - phi(g)| over the sweep

  Cx phi_of(std::uint32_t g) const { return phi_class[cls.class_of[g]]; }
  // Coordinates of the translate delta_g.
  VecC coords(std::uint32_t g) const;
  // Left translation pi(g), right translation rho(g): delta_x -> delta_{x g^{-1}},
  // and the conjugation image c(g) = pi(g) rho(g).
  MatC pi_of(std::uint32_t g) const;
  MatC rho_of(std::uint32_t g) const;
  MatC conj_of(std::uint32_t g) const;
  // Matrix-free application through the generator word of g.
  VecC apply_pi(std::uint32_t g, const VecC& x) const;
  VecC apply_rho(std::uint32_t g, const VecC& x) const;
  VecC apply_conj(std::uint32_t g, const VecC& x) const;
};

GnsModel gns(const Trace& phi, const GnsOptions& opt = {});

// Conjugation representation c(s) on the model, one matrix per group
// generator, and the dimension of its joint fixed space.
std::vector<MatC> conjugation_rep(const GnsModel& m);
std::uint32_t conjugation_invariant_dim(const GnsModel& m);

// A trace is extreme iff the conjugation-fixed space is a line.
bool is_character(const Trace& phi, const GnsOptions& opt = {});

// Orthonormal (Hilbert-Schmidt) basis of the commutant of pi on the model,
// of the algebra generated by pi (= commutant of rho), and of its center,
// plus the minimal central projections.
struct CenterData {
  std::vector<MatC> commutant;
  std::vector<MatC> algebra;
  std::vector<MatC> center;
  std::vector<MatC> projections;
};
CenterData center(const GnsModel& m, std::uint64_t seed = 0);

// Minimal central projections only (no basis matrices materialized); this is
// what the decomposition needs and it scales to larger models.
std::vector<MatC> central_projections(const GnsModel& m, std::uint64_t seed = 0);

// dim of the intertwiner space {X : X pi(g) = pi(g) X}; equals the sum of the
// squared multiplicities of the irreducible constituents.
std::uint32_t fd_subrep_detector(const GnsModel& m);

// Convex decomposition of a trace into character rows: weight = |P v|^2 per
// minimal central projection P, values recovered by matrix-free translation
// of P v and matched against the table.
struct TraceComponent {
  double weight;
  std::uint32_t table_row;
  Trace character;     // exact normalized table row
  double match_error;  // max deviation between recovered values and the row
};
std::vector<TraceComponent> decompose_trace(
    const Trace& phi, std::shared_ptr<const CharacterTable> table = nullptr,
    const GnsOptions& opt = {});

// Diagnostic dump (row-major [re,im] matrices); layout is not a stability
// guarantee.
nlohmann::json gns_to_json(const GnsModel& m);

}  // namespace charlab
