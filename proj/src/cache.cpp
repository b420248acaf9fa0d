#include "charlab/cache.hpp"

#include "charlab/error.hpp"
#include "charlab/group.hpp"

#include <unistd.h>

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace charlab {

namespace {

std::string sanitize(const std::string& descriptor) {
  std::string s;
  for (char ch : descriptor)
    s += (std::isalnum(static_cast<unsigned char>(ch)) ? ch : '-');
  while (!s.empty() && s.back() == '-') s.pop_back();
  return s;
}

fs::path entry_path(const std::string& cache_dir, const std::string& descriptor) {
  return fs::path(cache_dir) / (sanitize(descriptor) + ".table.json");
}

// The digest covers the canonical dump of every other field (nlohmann sorts
// keys), so any content mutation is caught on load.
nlohmann::json table_to_json(const CharacterTable& t) {
  nlohmann::json j{{"version", kTableCacheVersion},
                   {"group", t.group},
                   {"order", t.order},
                   {"exponent", t.exponent},
                   {"prime", t.prime},
                   {"class_rep", t.class_rep},
                   {"class_size", t.class_size},
                   {"class_rep_order", t.class_rep_order},
                   {"inverse_class", t.inverse_class},
                   {"degree", t.degree},
                   {"counts", t.counts}};
  j["digest"] = fnv1a_hex(j.dump());
  return j;
}

// Throws on any structural damage; the caller quarantines.
CharacterTable table_from_json(const nlohmann::json& j) {
  CharacterTable t;
  t.group = j.at("group").get<std::string>();
  t.order = j.at("order").get<std::uint64_t>();
  t.exponent = j.at("exponent").get<std::uint32_t>();
  t.prime = j.at("prime").get<std::uint64_t>();
  t.class_rep = j.at("class_rep").get<std::vector<std::uint32_t>>();
  t.class_size = j.at("class_size").get<std::vector<std::uint32_t>>();
  t.class_rep_order = j.at("class_rep_order").get<std::vector<std::uint32_t>>();
  t.inverse_class = j.at("inverse_class").get<std::vector<std::uint32_t>>();
  t.degree = j.at("degree").get<std::vector<std::uint32_t>>();
  t.counts = j.at("counts").get<std::vector<std::vector<std::vector<std::uint32_t>>>>();

  const std::size_t cols = t.class_rep.size();
  const std::size_t rows = t.degree.size();
  auto check = [](bool ok) {
    require(ok, ErrorKind::Validation, "cache: stored table fails validation");
  };
  check(t.order > 0 && cols > 0 && rows > 0);
  check(t.class_size.size() == cols && t.class_rep_order.size() == cols &&
        t.inverse_class.size() == cols && t.counts.size() == rows);
  std::uint64_t order_sum = 0, degree_sum = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    check(t.inverse_class[c] < cols && t.inverse_class[t.inverse_class[c]] == c);
    check(t.class_rep_order[c] > 0);
    order_sum += t.class_size[c];
  }
  for (std::size_t r = 0; r < rows; ++r) {
    check(t.counts[r].size() == cols);
    for (std::size_t c = 0; c < cols; ++c) check(t.counts[r][c].size() == t.class_rep_order[c]);
    degree_sum += std::uint64_t(t.degree[r]) * t.degree[r];
  }
  check(order_sum == t.order && degree_sum == t.order);
  return t;
}

// Moves a damaged entry into <dir>/quarantine under the first free name.
void quarantine(const fs::path& file) {
  std::error_code ec;
  const fs::path qdir = file.parent_path() / "quarantine";
  fs::create_directories(qdir, ec);
  for (int n = 1; n < 10000; ++n) {
    const fs::path target = qdir / (file.filename().string() + "." + std::to_string(n));
    if (fs::exists(target, ec)) continue;
    fs::rename(file, target, ec);
    if (!ec) return;
  }
  fs::remove(file, ec);  // last resort: never re-read a damaged entry
}

}  // namespace

void validate_config(const Config& cfg) {
  require(cfg.group_budget > 0, ErrorKind::Validation, "config: group budget must be positive");
  require(cfg.class_budget > 0, ErrorKind::Validation, "config: class budget must be positive");
  require(cfg.orbit_budget > 0, ErrorKind::Validation, "config: orbit budget must be positive");
  require(cfg.tolerance > 0 && cfg.tolerance <= 1e-3, ErrorKind::Validation,
          "config: tolerance must lie in (0, 1e-3]");
  require(cfg.parallelism >= 1, ErrorKind::Validation, "config: parallelism must be positive");
}

nlohmann::json config_to_json(const Config& cfg) {
  return nlohmann::json{{"cache_dir", cfg.cache_dir.empty() ? default_cache_dir() : cfg.cache_dir},
                        {"group_budget", cfg.group_budget},
                        {"class_budget", cfg.class_budget},
                        {"orbit_budget", cfg.orbit_budget},
                        {"tolerance", cfg.tolerance},
                        {"seed", cfg.seed},
                        {"parallelism", cfg.parallelism}};
}

std::string default_cache_dir() {
  if (const char* env = std::getenv("CHARLAB_CACHE_DIR"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
    return (fs::path(xdg) / "charlab").string();
  if (const char* home = std::getenv("HOME"); home && *home)
    return (fs::path(home) / ".cache" / "charlab").string();
  return "charlab-cache";
}

std::optional<CharacterTable> cache_get(const std::string& cache_dir,
                                        const std::string& descriptor) {
  const fs::path file = entry_path(cache_dir, descriptor);
  std::error_code ec;
  if (!fs::exists(file, ec)) return std::nullopt;

  std::ifstream in(file, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) return std::nullopt;

  try {
    nlohmann::json j = nlohmann::json::parse(buf.str());
    const auto& v = j.at("version");
    if (!v.is_number_unsigned()) throw Error(ErrorKind::Validation, "cache: bad version field");
    if (v.get<std::uint32_t>() != kTableCacheVersion) return std::nullopt;  // stale, not corrupt

    const std::string digest = j.at("digest").get<std::string>();
    j.erase("digest");
    require(digest == fnv1a_hex(j.dump()), ErrorKind::Validation, "cache: digest mismatch");

    CharacterTable t = table_from_json(j);
    require(t.group == descriptor, ErrorKind::Validation, "cache: entry names another group");
    return t;
  } catch (...) {
    quarantine(file);
    return std::nullopt;
  }
}

void cache_put(const std::string& cache_dir, const std::string& descriptor,
               const CharacterTable& table) {
  const fs::path file = entry_path(cache_dir, descriptor);
  std::error_code ec;
  fs::create_directories(file.parent_path(), ec);

  const fs::path tmp = file.string() + ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << table_to_json(table).dump(1) << '\n';
    require(out.good(), ErrorKind::Validation, "cache: cannot write " + tmp.string());
  }
  fs::rename(tmp, file, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Validation, "cache: cannot publish " + file.string());
  }
}

TableFetch fetch_character_table(const Config& cfg, const std::string& descriptor) {
  validate_config(cfg);
  const std::string dir = cfg.cache_dir.empty() ? default_cache_dir() : cfg.cache_dir;

  if (std::optional<CharacterTable> hit = cache_get(dir, descriptor))
    return {std::move(*hit), true};

  BuildOptions opts;
  opts.budget = cfg.group_budget;
  const GroupHandle::Ptr G = GroupHandle::build(descriptor, opts);
  const ConjClasses cls = conjugacy_classes(*G);
  require(cls.count() <= cfg.class_budget, ErrorKind::Budget,
          "fetch: conjugacy class count exceeds the class budget");
  TableFetch out{compute_character_table(*G, cls), false};
  cache_put(dir, descriptor, out.table);
  return out;
}

bool table_equal(const CharacterTable& a, const CharacterTable& b) {
  return a.group == b.group && a.order == b.order && a.exponent == b.exponent &&
         a.prime == b.prime && a.class_rep == b.class_rep && a.class_size == b.class_size &&
         a.class_rep_order == b.class_rep_order && a.inverse_class == b.inverse_class &&
         a.degree == b.degree && a.counts == b.counts;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace charlab
