#pragma once

#include "charlab/char_table.hpp"
#include "charlab/intmatrix.hpp"
#include "charlab/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace charlab {

// Which table rows a vanishing scan maximizes over.  The trivial row is
// always excluded; "faithful" additionally requires a trivial kernel.
enum class CharacterFilter { AllNontrivial, FaithfulOnly };

// A reproducible scan: one group family evaluated at a growing modulus list,
// probing fixed integer matrices through the reduction maps.
struct ScanPlan {
  std::string family;  // "sl(2)", "sl(3)", or "aff(d)"
  std::vector<std::uint32_t> moduli;  // strictly increasing, each >= 2
  std::vector<IntegerMatrixElement> probes;
  CharacterFilter filter = CharacterFilter::AllNontrivial;
  std::string output_path;     // used by the command line driver
  std::uint64_t budget = 500000;  // element budget per quotient group
  std::uint64_t seed = 0;         // echoed into manifests
};

// "sl(2)" at 7 -> "sl(2,7)"; validates the family shape.
std::string family_descriptor(const std::string& family, std::uint32_t modulus);
// Matrix dimension the probes of a family must have (sl(d) -> d, aff(d) -> d+1).
std::uint32_t family_probe_dim(const std::string& family);

nlohmann::json scan_plan_to_json(const ScanPlan& plan);
ScanPlan scan_plan_from_json(const nlohmann::json& j);

// One scan sample: the largest normalized character magnitude at the reduced
// probe, with the row that attains it.
struct VanishingPoint {
  std::uint32_t modulus = 0;
  std::uint32_t probe = 0;  // index into the plan's probe list
  double max_abs = 0.0;
  // |value|^2 of the witness row, exact when it is rational.
  std::optional<Rational> max_abs_squared;
  std::uint32_t witness_row = 0;
  std::uint32_t witness_degree = 0;
  std::string flag;  // "central probe: vanishing not expected" or empty
};

struct VanishingSeries {
  std::string family;
  std::vector<std::uint32_t> moduli;  // moduli actually completed
  std::vector<VanishingPoint> points;  // ordered by (modulus, probe)
  bool truncated = false;  // a modulus exceeded the budget; later ones skipped
  std::string note;
  std::uint32_t cache_hits = 0;  // table cache traffic (cache-aware runs only)
  std::uint32_t cache_misses = 0;
};

// Max of |normalized character| at each reduced probe over the filtered rows,
// per modulus.  Central probes are reported but flagged (their magnitude is
// identically 1, so no vanishing can occur).  A modulus whose quotient blows
// the budget truncates the series and is recorded in the note.  A non-empty
// cache_dir serves tables from the on-disk cache and stores fresh ones.
VanishingSeries vanishing_scan(const ScanPlan& plan);
VanishingSeries vanishing_scan(const ScanPlan& plan, const std::string& cache_dir);

// The same scan over the affine quotients, probing the pair (A, v) embedded
// as a block matrix.  d = 2 runs are labeled in the note; the supported
// regime is d >= 3.
VanishingSeries semidirect_scan(std::uint32_t d, const std::vector<std::uint32_t>& primes,
                                const IntegerMatrixElement& A, const std::vector<std::int64_t>& v,
                                std::uint64_t budget = 500000,
                                const std::string& cache_dir = "");

// Irreducible degree multisets per modulus, with per-degree counts aggregated
// across the scan (fixed small degrees stop appearing as the modulus grows).
struct DimensionCensusRow {
  std::uint32_t modulus = 0;
  std::vector<std::uint32_t> degrees;  // ascending (table row order)
};
struct DimensionCensus {
  std::string family;
  std::vector<DimensionCensusRow> rows;
  // degree -> count per modulus, aligned with rows
  std::map<std::uint32_t, std::vector<std::uint32_t>> counts;
  std::uint32_t cache_hits = 0;
  std::uint32_t cache_misses = 0;
};
DimensionCensus dimension_census(const std::vector<std::uint32_t>& moduli,
                                 const std::string& family, std::uint64_t budget = 500000,
                                 const std::string& cache_dir = "");

std::string vanishing_csv(const VanishingSeries& s);
nlohmann::json vanishing_to_json(const VanishingSeries& s);
std::string census_csv(const DimensionCensus& c);
nlohmann::json census_to_json(const DimensionCensus& c);

}  // namespace charlab
