// charlab: command-line front end for the exact trace laboratory.
//
// Subcommands compute character tables (cached on disk), validate traces,
// inspect GNS models, certify spectral gaps, and run the vanishing /
// semidirect / torus scans.  Every run writes a JSON manifest echoing the
// configuration, the seed, and digests of its inputs.
//
// Exit codes: 0 success, 1 validation error, 2 budget exceeded, 64 usage.

#include <CLI11.hpp>

#include "charlab/cache.hpp"
#include "charlab/char_table.hpp"
#include "charlab/error.hpp"
#include "charlab/gap.hpp"
#include "charlab/gns.hpp"
#include "charlab/group.hpp"
#include "charlab/intmatrix.hpp"
#include "charlab/rational.hpp"
#include "charlab/relative.hpp"
#include "charlab/scan.hpp"
#include "charlab/trace.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace charlab;
namespace fs = std::filesystem;

namespace {

// Distinct from library Validation: these exit 64 with the usage message.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string shortest_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string slug(const std::string& s) {
  std::string out;
  for (char ch : s) out += (std::isalnum(static_cast<unsigned char>(ch)) ? ch : '-');
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorKind::Validation, what + ": not an integer: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<std::int64_t> parse_int_list(const std::string& s, const std::string& what) {
  std::vector<std::int64_t> out;
  for (const std::string& p : split(s, ',')) out.push_back(parse_int(p, what));
  return out;
}

std::vector<std::uint32_t> parse_u32_list(const std::string& s, const std::string& what) {
  std::vector<std::uint32_t> out;
  for (std::int64_t v : parse_int_list(s, what)) {
    if (v < 0) throw Error(ErrorKind::Validation, what + ": negative value");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

Rational parse_rational(const std::string& s) {
  const std::vector<std::string> parts = split(s, '/');
  if (parts.size() == 1) return rational_of(parse_int(parts[0], "rational"), 1);
  if (parts.size() == 2)
    return rational_of(parse_int(parts[0], "rational"), parse_int(parts[1], "rational"));
  throw Error(ErrorKind::Validation, "rational: expected p or p/q, got '" + s + "'");
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in.good()) throw UsageError("cannot read " + p.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  require(out.good(), ErrorKind::Validation, "cannot write " + p.string());
}

fs::path resolve(const std::string& out_dir, const std::string& name) {
  const fs::path p(name);
  return p.is_absolute() ? p : fs::path(out_dir) / p;
}

// ---------------------------------------------------------------------------
// Manifests

struct Manifest {
  nlohmann::json j;
  Manifest(const Config& cfg, const std::string& subcommand) {
    j["schema"] = "charlab.manifest.v1";
    j["subcommand"] = subcommand;
    j["tool_version"] = kCharlabVersion;
    j["table_cache_version"] = kTableCacheVersion;
    j["config"] = config_to_json(cfg);
    j["seed"] = cfg.seed;
    j["inputs"] = nlohmann::json::object();
    j["outputs"] = nlohmann::json::array();
  }
  void input(const std::string& name, const std::string& value) {
    j["inputs"][name] = {{"value", value}, {"digest", fnv1a_hex(value)}};
  }
  void input_file(const std::string& name, const fs::path& path, const std::string& bytes) {
    j["inputs"][name] = {{"value", path.string()}, {"digest", fnv1a_hex(bytes)}};
  }
  void write(const std::string& out_dir, const std::string& name) {
    j["outputs"].push_back(name);
    write_text(resolve(out_dir, name), j.dump(1) + "\n");
    std::cout << "wrote " << resolve(out_dir, name).string() << "\n";
  }
};

// Writes an artifact next to the manifest and records it there.
void emit(Manifest& m, const std::string& out_dir, const std::string& name,
          const std::string& content) {
  write_text(resolve(out_dir, name), content);
  m.j["outputs"].push_back(name);
  std::cout << "wrote " << resolve(out_dir, name).string() << "\n";
}

// ---------------------------------------------------------------------------
// Shared builders

struct TraceContext {
  GroupHandle::Ptr G;
  ConjClasses cls;
  std::shared_ptr<const CharacterTable> table;
  bool cache_hit = false;
};

TraceContext make_context(const Config& cfg, const std::string& descriptor) {
  TraceContext ctx;
  TableFetch f = fetch_character_table(cfg, descriptor);
  BuildOptions opts;
  opts.budget = cfg.group_budget;
  ctx.G = GroupHandle::build(descriptor, opts);
  ctx.cls = conjugacy_classes(*ctx.G);
  ctx.table = std::make_shared<CharacterTable>(std::move(f.table));
  ctx.cache_hit = f.cache_hit;
  return ctx;
}

// Trace specs: "irr:K" (normalized table row K), "delta-e", "one".
Trace build_trace_atom(const TraceContext& ctx, const std::string& spec) {
  if (spec == "delta-e") return Trace::delta_e(ctx.G, ctx.cls);
  if (spec == "one") return Trace::constant_one(ctx.G, ctx.cls);
  if (spec.rfind("irr:", 0) == 0) {
    const std::int64_t row = parse_int(spec.substr(4), "trace row");
    require(row >= 0 && row < ctx.table->rows(), ErrorKind::Validation,
            "trace spec: row out of range: " + spec);
    return Trace::character_row(ctx.G, ctx.cls, ctx.table, static_cast<std::uint32_t>(row));
  }
  throw Error(ErrorKind::Validation,
              "unknown trace spec '" + spec + "' (use irr:K, delta-e, or one)");
}

Trace build_trace(const TraceContext& ctx, const std::vector<std::string>& specs,
                  const std::vector<std::string>& weights) {
  require(!specs.empty(), ErrorKind::Validation, "no trace given");
  if (specs.size() == 1 && weights.empty()) return build_trace_atom(ctx, specs[0]);

  std::vector<Trace> parts;
  for (const std::string& s : specs) parts.push_back(build_trace_atom(ctx, s));
  std::vector<Rational> w;
  if (weights.empty()) {
    w.assign(specs.size(), rational_of(1, static_cast<std::int64_t>(specs.size())));
  } else {
    require(weights.size() == specs.size(), ErrorKind::Validation,
            "need exactly one --weight per --trace");
    for (const std::string& s : weights) w.push_back(parse_rational(s));
  }
  return convex_combine(w, parts);
}

// Acting elements: "uniform-gens" or "elements:i,j,k" (uniform weights).
GroupAlgebraElement build_acting(const TraceContext& ctx, const std::string& spec) {
  if (spec == "uniform-gens") return GroupAlgebraElement::uniform_on_gens(ctx.G);
  if (spec.rfind("elements:", 0) == 0) {
    const std::vector<std::int64_t> ids = parse_int_list(spec.substr(9), "element id");
    require(!ids.empty(), ErrorKind::Validation, "elements: empty list");
    std::vector<std::pair<std::uint32_t, RationalComplex>> terms;
    const Rational w = rational_of(1, static_cast<std::int64_t>(ids.size()));
    for (std::int64_t id : ids) {
      require(id >= 0 && static_cast<std::uint64_t>(id) < ctx.G->size(), ErrorKind::Validation,
              "elements: id out of range");
      terms.emplace_back(static_cast<std::uint32_t>(id), RationalComplex(w));
    }
    return GroupAlgebraElement::on_group(ctx.G, std::move(terms));
  }
  throw Error(ErrorKind::Validation,
              "unknown acting element '" + spec + "' (use uniform-gens or elements:i,j,...)");
}

std::string degrees_multiset(const std::vector<std::uint32_t>& degrees) {
  std::string out = "{";
  for (std::size_t k = 0; k < degrees.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(degrees[k]);
  }
  return out + "}";
}

nlohmann::json gap_report_to_json(const GapReport& r) {
  return nlohmann::json{{"kind", r.kind},
                        {"beta", r.beta},
                        {"norm", r.norm},
                        {"norm_radius", r.norm_radius},
                        {"norm_side", r.norm_side},
                        {"inequality_side", r.inequality_side},
                        {"worst_residual", r.worst_residual},
                        {"witnesses", r.witnesses},
                        {"test_set", r.test_set},
                        {"borderline", r.borderline},
                        {"agree", r.agree()}};
}

// ---------------------------------------------------------------------------
// Subcommand handlers

void run_chartable(const Config& cfg, const std::string& out_dir, const std::string& group) {
  const TraceContext ctx = make_context(cfg, group);
  std::cout << group << ": order " << ctx.table->order << ", " << ctx.table->cols()
            << " classes, degrees " << degrees_multiset(ctx.table->degree)
            << (ctx.cache_hit ? " (cache hit)" : " (computed)") << "\n";

  Manifest m(cfg, "chartable");
  m.input("group", group);
  m.j["result"] = {{"order", ctx.table->order},
                   {"classes", ctx.table->cols()},
                   {"degrees", ctx.table->degree},
                   {"exponent", ctx.table->exponent},
                   {"cache_hit", ctx.cache_hit}};
  m.write(out_dir, "chartable-" + slug(group) + ".manifest.json");
}

int run_trace_check(const Config& cfg, const std::string& out_dir, const std::string& group,
                    const std::vector<std::string>& specs,
                    const std::vector<std::string>& weights) {
  const TraceContext ctx = make_context(cfg, group);
  const Trace phi = build_trace(ctx, specs, weights);
  const TraceCheckReport rep = is_trace(phi, cfg.tolerance, cfg.seed);
  const bool extreme = rep.all_pass() && is_character(phi);

  std::cout << "trace '" << phi.label() << "' on " << group << "\n"
            << "  normalized:            " << (rep.normalized ? "yes" : "NO") << "\n"
            << "  conjugation invariant: " << (rep.conjugation_invariant ? "yes" : "NO") << "\n"
            << "  positive definite:     " << (rep.positive ? "yes" : "NO") << " ("
            << rep.regime << ")\n";
  if (rep.all_pass())
    std::cout << "  extreme (character):   " << (extreme ? "yes" : "no") << "\n";

  Manifest m(cfg, "trace-check");
  m.input("group", group);
  for (std::size_t k = 0; k < specs.size(); ++k)
    m.input("trace[" + std::to_string(k) + "]", specs[k]);
  m.j["result"] = {{"label", phi.label()},
                   {"normalized", rep.normalized},
                   {"conjugation_invariant", rep.conjugation_invariant},
                   {"positive", rep.positive},
                   {"min_gram_eigenvalue", rep.min_gram_eigenvalue},
                   {"exact_certificate", rep.exact_certificate},
                   {"regime", rep.regime},
                   {"all_pass", rep.all_pass()},
                   {"extreme", extreme}};
  m.write(out_dir, "trace-check-" + slug(group) + ".manifest.json");
  return rep.all_pass() ? 0 : 1;
}

void run_gns(const Config& cfg, const std::string& out_dir, const std::string& group,
             const std::vector<std::string>& specs, const std::vector<std::string>& weights,
             bool dump) {
  const TraceContext ctx = make_context(cfg, group);
  const Trace phi = build_trace(ctx, specs, weights);
  const GnsModel model = gns(phi);
  const std::uint32_t fixed = conjugation_invariant_dim(model);
  const std::vector<MatC> projections = central_projections(model, cfg.seed);

  std::cout << "GNS model of '" << phi.label() << "' on " << group << "\n"
            << "  dim H = " << model.n << "\n"
            << "  conjugation-fixed dim = " << fixed << "\n"
            << "  minimal central projections = " << projections.size() << "\n";

  Manifest m(cfg, "gns");
  m.input("group", group);
  for (std::size_t k = 0; k < specs.size(); ++k)
    m.input("trace[" + std::to_string(k) + "]", specs[k]);
  m.j["result"] = {{"label", phi.label()},
                   {"dim", model.n},
                   {"conjugation_fixed_dim", fixed},
                   {"central_projections", projections.size()}};
  if (dump) emit(m, out_dir, "gns-" + slug(group) + ".json", gns_to_json(model).dump(1) + "\n");
  m.write(out_dir, "gns-" + slug(group) + ".manifest.json");
}

void run_gap(const Config& cfg, const std::string& out_dir, const std::string& group,
             const std::vector<std::string>& specs, const std::vector<std::string>& weights,
             const std::string& a_spec, double beta, const std::string& criterion) {
  const TraceContext ctx = make_context(cfg, group);
  const Trace phi = build_trace(ctx, specs, weights);
  const GroupAlgebraElement a = build_acting(ctx, a_spec);
  const GnsModel model = gns(phi);

  GapTestPolicy pol;
  pol.seed = cfg.seed;
  GapReport rep;
  if (criterion == "conjugation") {
    rep = norm_conj(model, a, beta, pol);
  } else if (criterion == "translation") {
    rep = norm_pi(model, a, beta, pol);
  } else {
    throw Error(ErrorKind::Validation,
                "unknown criterion '" + criterion + "' (use conjugation or translation)");
  }

  std::cout << rep.kind << " criterion at beta = " << shortest_double(rep.beta) << "\n"
            << "  norm = " << shortest_double(rep.norm) << " (radius "
            << shortest_double(rep.norm_radius) << "), norm side "
            << (rep.norm_side ? "holds" : "fails") << "\n"
            << "  inequality side " << (rep.inequality_side ? "holds" : "fails")
            << " (worst residual " << shortest_double(rep.worst_residual) << ", "
            << rep.test_set << ")\n"
            << "  " << (rep.agree() ? (rep.borderline ? "borderline" : "sides agree")
                                    : "SIDES DISAGREE")
            << "\n";
  for (const std::string& w : rep.witnesses) std::cout << "  witness: " << w << "\n";

  Manifest m(cfg, "gap");
  m.input("group", group);
  for (std::size_t k = 0; k < specs.size(); ++k)
    m.input("trace[" + std::to_string(k) + "]", specs[k]);
  m.input("a", a_spec);
  m.input("beta", shortest_double(beta));
  m.j["result"] = gap_report_to_json(rep);
  emit(m, out_dir, "gap-" + slug(group) + ".json",
       gap_report_to_json(rep).dump(1) + "\n");
  m.write(out_dir, "gap-" + slug(group) + ".manifest.json");
}

int run_scan_vanishing(const Config& cfg, const std::string& out_dir,
                       const std::string& plan_path) {
  const std::string bytes = read_text(plan_path);
  ScanPlan plan;
  try {
    plan = scan_plan_from_json(nlohmann::json::parse(bytes));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("malformed plan " + plan_path + ": " + e.what());
  } catch (const Error& e) {
    throw UsageError("malformed plan " + plan_path + ": " + e.what());
  }

  const std::string dir = cfg.cache_dir.empty() ? default_cache_dir() : cfg.cache_dir;
  const VanishingSeries series = vanishing_scan(plan, dir);
  for (const VanishingPoint& pt : series.points) {
    std::cout << "m=" << pt.modulus << " probe=" << pt.probe
              << " max=" << shortest_double(pt.max_abs) << " (row " << pt.witness_row
              << ", degree " << pt.witness_degree << ")"
              << (pt.flag.empty() ? "" : " [" + pt.flag + "]") << "\n";
  }
  if (series.truncated) std::cout << "note: " << series.note << "\n";

  Manifest m(cfg, "scan-vanishing");
  m.input_file("plan", plan_path, bytes);
  m.j["result"] = vanishing_to_json(series);
  const std::string csv_name = plan.output_path.empty()
                                   ? "vanishing-" + slug(plan.family) + ".csv"
                                   : plan.output_path;
  emit(m, out_dir, csv_name, vanishing_csv(series));
  m.write(out_dir, "scan-vanishing-" + slug(plan.family) + ".manifest.json");
  return series.truncated ? 2 : 0;
}

int run_scan_semidirect(const Config& cfg, const std::string& out_dir, std::uint32_t d,
                        const std::string& primes_csv, const std::string& a_csv,
                        const std::string& v_csv) {
  const std::vector<std::uint32_t> primes = parse_u32_list(primes_csv, "primes");
  const std::vector<std::int64_t> entries = parse_int_list(a_csv, "linear part");
  require(entries.size() == std::size_t(d) * d, ErrorKind::Validation,
          "linear part: expected d*d entries");
  const IntegerMatrixElement A(d, entries);
  const std::vector<std::int64_t> v = parse_int_list(v_csv, "translation part");

  const std::string dir = cfg.cache_dir.empty() ? default_cache_dir() : cfg.cache_dir;
  const VanishingSeries series = semidirect_scan(d, primes, A, v, cfg.group_budget, dir);
  for (const VanishingPoint& pt : series.points)
    std::cout << "m=" << pt.modulus << " max=" << shortest_double(pt.max_abs) << " (row "
              << pt.witness_row << ", degree " << pt.witness_degree << ")"
              << (pt.flag.empty() ? "" : " [" + pt.flag + "]") << "\n";
  if (!series.note.empty()) std::cout << "note: " << series.note << "\n";

  Manifest m(cfg, "scan-semidirect");
  m.input("d", std::to_string(d));
  m.input("primes", primes_csv);
  m.input("A", a_csv);
  m.input("v", v_csv);
  m.j["result"] = vanishing_to_json(series);
  emit(m, out_dir, "semidirect-d" + std::to_string(d) + ".csv", vanishing_csv(series));
  m.write(out_dir, "scan-semidirect-d" + std::to_string(d) + ".manifest.json");
  return series.truncated ? 2 : 0;
}

void run_scan_torus(const Config& cfg, const std::string& out_dir, std::uint32_t d,
                    std::uint32_t qmax, const std::string& q_csv, std::int64_t ball) {
  std::vector<std::uint32_t> denominators;
  if (!q_csv.empty()) {
    denominators = parse_u32_list(q_csv, "denominators");
  } else {
    require(qmax >= 2, ErrorKind::Validation, "torus scan: need --qmax >= 2 or --q list");
    for (std::uint32_t q = 2; q <= qmax; ++q) denominators.push_back(q);
  }

  const TorusScanSeries series = torus_limit_scan(d, denominators, ball, cfg.orbit_budget);
  for (const TorusScanRow& row : series.rows) {
    std::cout << "q=" << row.q << ": " << row.orbits.size()
              << (row.orbits.size() == 1 ? " orbit" : " orbits")
              << ", max |phi| = " << shortest_double(row.max_abs);
    for (const TorusOrbitRow& orb : row.orbits)
      if (orb.max_abs_exact && orb.max_abs == row.max_abs) {
        std::cout << " = " << rational_string(*orb.max_abs_exact);
        break;
      }
    std::cout << (row.flag.empty() ? "" : " [" + row.flag + "]") << "\n";
  }

  Manifest m(cfg, "scan-torus");
  m.input("d", std::to_string(d));
  m.input("ball", std::to_string(ball));
  m.input("denominators", [&] {
    std::string s;
    for (std::size_t k = 0; k < denominators.size(); ++k)
      s += (k ? "," : "") + std::to_string(denominators[k]);
    return s;
  }());
  m.j["result"] = torus_scan_to_json(series);
  const std::string base = "torus-d" + std::to_string(d) + "-ball" + std::to_string(ball);
  emit(m, out_dir, base + ".csv", torus_scan_csv(series));
  m.write(out_dir, "scan-" + base + ".manifest.json");
}

void run_decompose(const Config& cfg, const std::string& out_dir, const std::string& group,
                   const std::vector<std::string>& specs,
                   const std::vector<std::string>& weights) {
  const TraceContext ctx = make_context(cfg, group);
  const Trace phi = build_trace(ctx, specs, weights);
  const std::vector<TraceComponent> comps = decompose_trace(phi, ctx.table);

  std::string csv = "row,degree,weight,match_error\n";
  for (const TraceComponent& c : comps) {
    std::cout << "row " << c.table_row << " (degree " << ctx.table->degree[c.table_row]
              << "): weight " << shortest_double(c.weight) << ", match error "
              << shortest_double(c.match_error) << "\n";
    csv += std::to_string(c.table_row) + "," + std::to_string(ctx.table->degree[c.table_row]) +
           "," + shortest_double(c.weight) + "," + shortest_double(c.match_error) + "\n";
  }

  Manifest m(cfg, "decompose");
  m.input("group", group);
  for (std::size_t k = 0; k < specs.size(); ++k)
    m.input("trace[" + std::to_string(k) + "]", specs[k]);
  nlohmann::json comps_j = nlohmann::json::array();
  for (const TraceComponent& c : comps)
    comps_j.push_back({{"row", c.table_row},
                       {"degree", ctx.table->degree[c.table_row]},
                       {"weight", c.weight},
                       {"match_error", c.match_error}});
  m.j["result"] = {{"label", phi.label()}, {"components", std::move(comps_j)}};
  emit(m, out_dir, "decompose-" + slug(group) + ".csv", csv);
  m.write(out_dir, "decompose-" + slug(group) + ".manifest.json");
}

void run_census(const Config& cfg, const std::string& out_dir, const std::string& family,
                const std::string& moduli_csv) {
  const std::vector<std::uint32_t> moduli = parse_u32_list(moduli_csv, "moduli");
  const std::string dir = cfg.cache_dir.empty() ? default_cache_dir() : cfg.cache_dir;
  const DimensionCensus census = dimension_census(moduli, family, cfg.group_budget, dir);
  for (const DimensionCensusRow& row : census.rows)
    std::cout << "m=" << row.modulus << ": degrees " << degrees_multiset(row.degrees) << "\n";

  Manifest m(cfg, "census");
  m.input("family", family);
  m.input("moduli", moduli_csv);
  m.j["result"] = census_to_json(census);
  emit(m, out_dir, "census-" + slug(family) + ".csv", census_csv(census));
  m.write(out_dir, "census-" + slug(family) + ".manifest.json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"charlab: exact character tables, traces, and gap certificates"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  std::string out_dir = ".";
  app.add_option("--cache-dir", cfg.cache_dir,
                 "table cache directory (default: CHARLAB_CACHE_DIR or user cache)");
  app.add_option("--out", out_dir, "output directory for artifacts (default: .)");
  app.add_option("--group-budget", cfg.group_budget, "maximum group order enumerated");
  app.add_option("--class-budget", cfg.class_budget, "maximum conjugacy class count");
  app.add_option("--orbit-budget", cfg.orbit_budget, "maximum lattice orbit size");
  app.add_option("--tol", cfg.tolerance, "float tolerance, in (0, 1e-3]");
  app.add_option("--seed", cfg.seed, "seed for all randomized internals");
  app.add_option("--jobs", cfg.parallelism, "worker pool size");

  int exit_code = 0;

  // chartable <group>
  std::string ct_group;
  CLI::App* ct = app.add_subcommand("chartable", "compute and cache a character table");
  ct->add_option("group", ct_group, "group descriptor, e.g. sl(2,5)")->required();
  ct->callback([&] { run_chartable(cfg, out_dir, ct_group); });

  // trace-check --group G --trace S [--trace S --weight p/q ...]
  std::string tc_group;
  std::vector<std::string> tc_traces, tc_weights;
  CLI::App* tc = app.add_subcommand("trace-check", "validate the trace axioms");
  tc->add_option("--group", tc_group, "group descriptor")->required();
  tc->add_option("--trace", tc_traces, "trace spec: irr:K, delta-e, one")->required();
  tc->add_option("--weight", tc_weights, "mixture weight p/q per --trace");
  tc->callback([&] { exit_code = run_trace_check(cfg, out_dir, tc_group, tc_traces, tc_weights); });

  // gns --group G --trace S [--dump]
  std::string gns_group;
  std::vector<std::string> gns_traces, gns_weights;
  bool gns_dump = false;
  CLI::App* gn = app.add_subcommand("gns", "inspect the GNS model of a trace");
  gn->add_option("--group", gns_group, "group descriptor")->required();
  gn->add_option("--trace", gns_traces, "trace spec: irr:K, delta-e, one")->required();
  gn->add_option("--weight", gns_weights, "mixture weight p/q per --trace");
  gn->add_flag("--dump", gns_dump, "also write the model matrices as JSON");
  gn->callback([&] { run_gns(cfg, out_dir, gns_group, gns_traces, gns_weights, gns_dump); });

  // gap --group G --trace S --a A --beta B [--criterion C]
  std::string gap_group, gap_a = "uniform-gens", gap_criterion = "conjugation";
  std::vector<std::string> gap_traces, gap_weights;
  double gap_beta = 0.0;
  CLI::App* gp = app.add_subcommand("gap", "two-sided spectral gap certificate");
  gp->add_option("--group", gap_group, "group descriptor")->required();
  gp->add_option("--trace", gap_traces, "trace spec: irr:K, delta-e, one")->required();
  gp->add_option("--weight", gap_weights, "mixture weight p/q per --trace");
  gp->add_option("--a", gap_a, "acting element: uniform-gens or elements:i,j,...");
  gp->add_option("--beta", gap_beta, "gap level in (0, 1]")->required();
  gp->add_option("--criterion", gap_criterion, "conjugation (default) or translation");
  gp->callback(
      [&] { run_gap(cfg, out_dir, gap_group, gap_traces, gap_weights, gap_a, gap_beta,
                    gap_criterion); });

  // scan-vanishing --plan FILE
  std::string sv_plan;
  CLI::App* sv = app.add_subcommand("scan-vanishing", "probe scan from a JSON plan file");
  sv->add_option("--plan", sv_plan, "scan plan JSON file")->required();
  sv->callback([&] { exit_code = run_scan_vanishing(cfg, out_dir, sv_plan); });

  // scan-semidirect --d D --primes P --A M --v V
  std::uint32_t sd_d = 3;
  std::string sd_primes, sd_a, sd_v;
  CLI::App* sd = app.add_subcommand("scan-semidirect", "probe scan over affine quotients");
  sd->add_option("--d", sd_d, "dimension of the translation lattice")->required();
  sd->add_option("--primes", sd_primes, "comma-separated moduli, increasing")->required();
  sd->add_option("--A", sd_a, "row-major d*d integer matrix, comma-separated")->required();
  sd->add_option("--v", sd_v, "translation vector, comma-separated")->required();
  sd->callback(
      [&] { exit_code = run_scan_semidirect(cfg, out_dir, sd_d, sd_primes, sd_a, sd_v); });

  // scan-torus --d D (--qmax Q | --q LIST) [--ball B]
  std::uint32_t st_d = 3, st_qmax = 0;
  std::string st_q;
  std::int64_t st_ball = 2;
  CLI::App* st = app.add_subcommand("scan-torus", "rational orbit scan on the torus dual");
  st->add_option("--d", st_d, "torus dimension (certified regime: d >= 3)")->required();
  st->add_option("--qmax", st_qmax, "scan denominators 2..qmax");
  st->add_option("--q", st_q, "explicit comma-separated denominator list");
  st->add_option("--ball", st_ball, "sup-norm radius of the evaluation ball");
  st->callback([&] { run_scan_torus(cfg, out_dir, st_d, st_qmax, st_q, st_ball); });

  // decompose --group G --trace S [--trace S --weight p/q ...]
  std::string dc_group;
  std::vector<std::string> dc_traces, dc_weights;
  CLI::App* dc = app.add_subcommand("decompose", "decompose a trace into characters");
  dc->add_option("--group", dc_group, "group descriptor")->required();
  dc->add_option("--trace", dc_traces, "trace spec: irr:K, delta-e, one")->required();
  dc->add_option("--weight", dc_weights, "mixture weight p/q per --trace");
  dc->callback([&] { run_decompose(cfg, out_dir, dc_group, dc_traces, dc_weights); });

  // census --family F --moduli M
  std::string cs_family, cs_moduli;
  CLI::App* cs = app.add_subcommand("census", "irreducible degree census over a family");
  cs->add_option("--family", cs_family, "sl(2), sl(3), or aff(d)")->required();
  cs->add_option("--moduli", cs_moduli, "comma-separated moduli, increasing")->required();
  cs->callback([&] { run_census(cfg, out_dir, cs_family, cs_moduli); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 64;  // help is success; anything else is usage
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Budget:
        return 2;
      case ErrorKind::Internal:
        return 70;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
  return exit_code;
}
