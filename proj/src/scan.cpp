#include "charlab/scan.hpp"

#include "charlab/cache.hpp"

#include "charlab/error.hpp"
#include "charlab/group.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>

namespace charlab {

namespace {

std::string shortest_double(double x) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, p);
}

// Parses "sl(d)" or "aff(d)" and returns {kind, d}.
std::pair<std::string, std::uint32_t> parse_family(const std::string& family) {
  const auto open = family.find('(');
  const auto close = family.find(')');
  require(open != std::string::npos && close == family.size() - 1 && close > open + 1,
          ErrorKind::Validation, "scan family must look like sl(d) or aff(d): " + family);
  const std::string kind = family.substr(0, open);
  require(kind == "sl" || kind == "aff", ErrorKind::Validation,
          "scan family must be sl(d) or aff(d): " + family);
  std::uint32_t d = 0;
  const char* b = family.data() + open + 1;
  const char* e = family.data() + close;
  const auto res = std::from_chars(b, e, d);
  require(res.ec == std::errc() && res.ptr == e && d >= 1, ErrorKind::Validation,
          "scan family has a malformed dimension: " + family);
  require(kind != "sl" || d >= 2, ErrorKind::Validation, "sl family needs dimension >= 2");
  return {kind, d};
}

void validate_plan(const ScanPlan& plan) {
  const std::uint32_t dim = family_probe_dim(plan.family);
  require(!plan.moduli.empty(), ErrorKind::Validation, "scan plan: empty modulus list");
  for (std::size_t i = 0; i < plan.moduli.size(); ++i) {
    require(plan.moduli[i] >= 2, ErrorKind::Validation, "scan plan: modulus must be at least 2");
    require(i == 0 || plan.moduli[i - 1] < plan.moduli[i], ErrorKind::Validation,
            "scan plan: moduli must be strictly increasing");
  }
  require(!plan.probes.empty(), ErrorKind::Validation, "scan plan: no probe elements");
  for (const IntegerMatrixElement& g : plan.probes)
    require(g.d == dim, ErrorKind::Validation,
            "scan plan: probe dimension does not match the family");
}

// Max of |normalized value| at the class over the given rows, with the first
// attaining row (rows are sorted by degree, so ties pick the lowest degree).
struct RowMax {
  double max_abs = -1.0;
  std::uint32_t row = 0;
};

RowMax filtered_max(const CharacterTable& T, std::uint32_t cls,
                    const std::vector<std::uint32_t>& rows) {
  RowMax best;
  for (std::uint32_t r : rows) {
    const double v = std::abs(T.normalized_value(r, cls).to_complex());
    if (v > best.max_abs) {
      best.max_abs = v;
      best.row = r;
    }
  }
  return best;
}

}  // namespace

std::string family_descriptor(const std::string& family, std::uint32_t modulus) {
  const auto [kind, d] = parse_family(family);
  return kind + "(" + std::to_string(d) + "," + std::to_string(modulus) + ")";
}

std::uint32_t family_probe_dim(const std::string& family) {
  const auto [kind, d] = parse_family(family);
  return kind == "aff" ? d + 1 : d;
}

nlohmann::json scan_plan_to_json(const ScanPlan& plan) {
  nlohmann::json probes = nlohmann::json::array();
  for (const IntegerMatrixElement& g : plan.probes)
    probes.push_back(nlohmann::json{{"d", g.d}, {"a", g.a}});
  return nlohmann::json{
      {"schema", "charlab.scan-plan.v1"},
      {"family", plan.family},
      {"moduli", plan.moduli},
      {"probes", std::move(probes)},
      {"filter", plan.filter == CharacterFilter::FaithfulOnly ? "faithful" : "all-nontrivial"},
      {"output", plan.output_path},
      {"budget", plan.budget},
      {"seed", plan.seed}};
}

ScanPlan scan_plan_from_json(const nlohmann::json& j) {
  require(j.value("schema", "") == "charlab.scan-plan.v1", ErrorKind::Validation,
          "scan plan: unknown schema");
  ScanPlan plan;
  plan.family = j.at("family").get<std::string>();
  plan.moduli = j.at("moduli").get<std::vector<std::uint32_t>>();
  for (const nlohmann::json& p : j.at("probes"))
    plan.probes.emplace_back(p.at("d").get<std::uint32_t>(),
                             p.at("a").get<std::vector<std::int64_t>>());
  const std::string f = j.at("filter").get<std::string>();
  require(f == "all-nontrivial" || f == "faithful", ErrorKind::Validation,
          "scan plan: unknown filter " + f);
  plan.filter = f == "faithful" ? CharacterFilter::FaithfulOnly : CharacterFilter::AllNontrivial;
  plan.output_path = j.value("output", "");
  plan.budget = j.value("budget", std::uint64_t(500000));
  plan.seed = j.value("seed", std::uint64_t(0));
  validate_plan(plan);
  return plan;
}

namespace {

// Table for an already-built group, via the on-disk cache when a directory is
// given.  A cached entry that does not match the group's class data (stale
// semantics behind a valid digest) is recomputed and overwritten.
CharacterTable scan_table(const GroupHandle& G, const ConjClasses& cls,
                          const std::string& descriptor, const std::string& cache_dir,
                          std::uint32_t& hits, std::uint32_t& misses) {
  if (!cache_dir.empty()) {
    if (std::optional<CharacterTable> hit = cache_get(cache_dir, descriptor)) {
      if (hit->order == G.size() && hit->cols() == cls.count() && hit->class_size == cls.size) {
        ++hits;
        return std::move(*hit);
      }
    }
    ++misses;
    CharacterTable t = compute_character_table(G, cls);
    cache_put(cache_dir, descriptor, t);
    return t;
  }
  return compute_character_table(G, cls);
}

}  // namespace

VanishingSeries vanishing_scan(const ScanPlan& plan) { return vanishing_scan(plan, ""); }

VanishingSeries vanishing_scan(const ScanPlan& plan, const std::string& cache_dir) {
  validate_plan(plan);
  VanishingSeries series;
  series.family = plan.family;

  for (std::uint32_t m : plan.moduli) {
    const std::string descriptor = family_descriptor(plan.family, m);
    GroupHandle::Ptr G;
    try {
      BuildOptions opts;
      opts.budget = plan.budget;
      G = GroupHandle::build(descriptor, opts);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Budget) throw;
      series.truncated = true;
      series.note = "budget exceeded at modulus " + std::to_string(m) + "; series truncated";
      break;
    }
    const ConjClasses cls = conjugacy_classes(*G);
    const CharacterTable T =
        scan_table(*G, cls, descriptor, cache_dir, series.cache_hits, series.cache_misses);

    // Trivial row excluded always; the faithful filter keeps trivial kernels.
    std::vector<std::uint32_t> rows;
    for (std::uint32_t r = 1; r < T.rows(); ++r)
      if (plan.filter == CharacterFilter::AllNontrivial || is_row_faithful(T, r))
        rows.push_back(r);
    require(!rows.empty(), ErrorKind::Validation,
            "vanishing scan: no rows pass the filter for " + descriptor);

    for (std::uint32_t pi = 0; pi < plan.probes.size(); ++pi) {
      const std::uint32_t gid = G->reduce(plan.probes[pi]);
      const std::uint32_t cls_id = cls.class_of[gid];

      VanishingPoint pt;
      pt.modulus = m;
      pt.probe = pi;
      const RowMax best = filtered_max(T, cls_id, rows);
      pt.max_abs = best.max_abs;
      pt.witness_row = best.row;
      pt.witness_degree = T.degree[best.row];
      pt.max_abs_squared = T.normalized_value(best.row, cls_id).abs_squared().as_rational();
      if (cls.size[cls_id] == 1) pt.flag = "central probe: vanishing not expected";

      // Double entry: an independent reverse sweep over every row, applying
      // the filter inline, must land on the same maximum.
      {
        double check = -1.0;
        for (std::uint32_t r = T.rows(); r-- > 1;) {
          if (plan.filter == CharacterFilter::FaithfulOnly && !is_row_faithful(T, r)) continue;
          check = std::max(check, std::abs(T.normalized_value(r, cls_id).to_complex()));
        }
        require(check == pt.max_abs, ErrorKind::Internal,
                "vanishing scan: double-entry sweep disagrees at modulus " + std::to_string(m));
      }
      series.points.push_back(std::move(pt));
    }
    series.moduli.push_back(m);
  }

  // Running minimum per probe never increases (guards assembly mix-ups).
  for (std::uint32_t pi = 0; pi < plan.probes.size(); ++pi) {
    double running = std::numeric_limits<double>::infinity();
    double prev = std::numeric_limits<double>::infinity();
    for (const VanishingPoint& pt : series.points) {
      if (pt.probe != pi) continue;
      running = std::min(running, pt.max_abs);
      require(running <= prev, ErrorKind::Internal, "vanishing scan: running minimum increased");
      prev = running;
    }
  }
  return series;
}

VanishingSeries semidirect_scan(std::uint32_t d, const std::vector<std::uint32_t>& primes,
                                const IntegerMatrixElement& A, const std::vector<std::int64_t>& v,
                                std::uint64_t budget, const std::string& cache_dir) {
  require(d >= 2, ErrorKind::Validation, "semidirect scan: dimension must be at least 2");
  require(A.d == d, ErrorKind::Validation, "semidirect scan: linear part dimension mismatch");
  require(v.size() == d, ErrorKind::Validation,
          "semidirect scan: translation part dimension mismatch");

  // Embed (A, v) as the block matrix [A v; 0 1].
  std::vector<std::int64_t> e((std::size_t(d) + 1) * (d + 1), 0);
  for (std::uint32_t i = 0; i < d; ++i) {
    for (std::uint32_t j = 0; j < d; ++j) e[std::size_t(i) * (d + 1) + j] = A.at(i, j);
    e[std::size_t(i) * (d + 1) + d] = v[i];
  }
  e[std::size_t(d) * (d + 1) + d] = 1;

  ScanPlan plan;
  plan.family = "aff(" + std::to_string(d) + ")";
  plan.moduli = primes;
  plan.probes.emplace_back(d + 1, std::move(e));
  plan.budget = budget;
  VanishingSeries series = vanishing_scan(plan, cache_dir);
  if (d == 2) {
    if (!series.note.empty()) series.note += "; ";
    series.note += "d = 2: outside the theorem regime";
  }
  return series;
}

DimensionCensus dimension_census(const std::vector<std::uint32_t>& moduli,
                                 const std::string& family, std::uint64_t budget,
                                 const std::string& cache_dir) {
  require(!moduli.empty(), ErrorKind::Validation, "census: empty modulus list");
  family_probe_dim(family);  // validates the family shape
  DimensionCensus census;
  census.family = family;

  for (std::uint32_t m : moduli) {
    BuildOptions opts;
    opts.budget = budget;
    const std::string descriptor = family_descriptor(family, m);
    const GroupHandle::Ptr G = GroupHandle::build(descriptor, opts);
    const ConjClasses cls = conjugacy_classes(*G);
    const CharacterTable T =
        scan_table(*G, cls, descriptor, cache_dir, census.cache_hits, census.cache_misses);
    DimensionCensusRow row;
    row.modulus = m;
    row.degrees.assign(T.degree.begin(), T.degree.end());
    census.rows.push_back(std::move(row));
  }

  for (std::size_t k = 0; k < census.rows.size(); ++k)
    for (std::uint32_t deg : census.rows[k].degrees) {
      auto& counts = census.counts[deg];
      counts.resize(census.rows.size(), 0);
      ++counts[k];
    }
  // Degrees absent at some moduli still get zero-filled columns.
  for (auto& [deg, counts] : census.counts) counts.resize(census.rows.size(), 0);
  return census;
}

std::string vanishing_csv(const VanishingSeries& s) {
  std::string out = "modulus,probe,max_abs,max_abs_squared_exact,witness_row,witness_degree,flag\n";
  for (const VanishingPoint& pt : s.points) {
    out += std::to_string(pt.modulus) + "," + std::to_string(pt.probe) + "," +
           shortest_double(pt.max_abs) + ",";
    if (pt.max_abs_squared) out += rational_string(*pt.max_abs_squared);
    out += "," + std::to_string(pt.witness_row) + "," + std::to_string(pt.witness_degree) + "," +
           pt.flag + "\n";
  }
  return out;
}

nlohmann::json vanishing_to_json(const VanishingSeries& s) {
  nlohmann::json points = nlohmann::json::array();
  for (const VanishingPoint& pt : s.points) {
    nlohmann::json jp{{"modulus", pt.modulus},       {"probe", pt.probe},
                      {"max_abs", pt.max_abs},       {"witness_row", pt.witness_row},
                      {"witness_degree", pt.witness_degree}, {"flag", pt.flag}};
    if (pt.max_abs_squared)
      jp["max_abs_squared_exact"] = rational_string(*pt.max_abs_squared);
    else
      jp["max_abs_squared_exact"] = nullptr;
    points.push_back(std::move(jp));
  }
  return nlohmann::json{{"schema", "charlab.vanishing.v1"},
                        {"family", s.family},
                        {"moduli", s.moduli},
                        {"points", std::move(points)},
                        {"truncated", s.truncated},
                        {"note", s.note},
                        {"cache", {{"hits", s.cache_hits}, {"misses", s.cache_misses}}}};
}

std::string census_csv(const DimensionCensus& c) {
  std::string out = "modulus,degree,count\n";
  for (std::size_t k = 0; k < c.rows.size(); ++k)
    for (const auto& [deg, counts] : c.counts)
      if (counts[k] > 0)
        out += std::to_string(c.rows[k].modulus) + "," + std::to_string(deg) + "," +
               std::to_string(counts[k]) + "\n";
  return out;
}

nlohmann::json census_to_json(const DimensionCensus& c) {
  nlohmann::json rows = nlohmann::json::array();
  for (const DimensionCensusRow& r : c.rows)
    rows.push_back(nlohmann::json{{"modulus", r.modulus}, {"degrees", r.degrees}});
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [deg, per] : c.counts) counts[std::to_string(deg)] = per;
  return nlohmann::json{{"schema", "charlab.census.v1"},
                        {"family", c.family},
                        {"rows", std::move(rows)},
                        {"counts_per_degree", std::move(counts)},
                        {"cache", {{"hits", c.cache_hits}, {"misses", c.cache_misses}}}};
}

}  // namespace charlab
