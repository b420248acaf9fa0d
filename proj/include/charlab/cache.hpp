#pragma once

#include "charlab/char_table.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace charlab {

// Runtime configuration shared by the command-line tools.  The seed feeds
// every randomized internal and is echoed into each output manifest.
struct Config {
  std::string cache_dir;                     // empty: default_cache_dir()
  std::uint64_t group_budget = 500000;       // maximum group order enumerated
  std::uint64_t class_budget = 100000;       // maximum conjugacy class count
  std::uint64_t orbit_budget = 1ull << 22;   // maximum lattice orbit size
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  std::uint32_t parallelism = 1;
};

// Budgets and parallelism must be positive, the tolerance in (0, 1e-3].
void validate_config(const Config& cfg);

// Config echo embedded in every output manifest.
nlohmann::json config_to_json(const Config& cfg);

// CHARLAB_CACHE_DIR if set, else XDG_CACHE_HOME/charlab, else
// ~/.cache/charlab, else ./charlab-cache.
std::string default_cache_dir();

// Library version reported in manifests.
inline constexpr const char* kCharlabVersion = "0.1.0";

// Table cache format; bumping it invalidates previously stored entries.
inline constexpr std::uint32_t kTableCacheVersion = 1;

// Stored table for the descriptor, or nullopt on a miss.  Entries written
// under a different format version are ignored (stale, left in place).
// Files that fail to parse or validate are moved into <dir>/quarantine and
// reported as a miss, so corruption only ever costs a recomputation.
std::optional<CharacterTable> cache_get(const std::string& cache_dir,
                                        const std::string& descriptor);

// Stores the table keyed by descriptor, creating the directory if needed.
// The write goes to a temporary file in the same directory followed by an
// atomic rename, so concurrent readers never observe a partial entry.
void cache_put(const std::string& cache_dir, const std::string& descriptor,
               const CharacterTable& table);

struct TableFetch {
  CharacterTable table;
  bool cache_hit = false;
};

// Get-or-compute: on a miss the group is built within cfg budgets, the table
// computed and stored under the resolved cache directory.
TableFetch fetch_character_table(const Config& cfg, const std::string& descriptor);

// Exact field-by-field equality (round-trip checks).
bool table_equal(const CharacterTable& a, const CharacterTable& b);

// 64-bit FNV-1a digest as 16 hex characters; used for input digests in
// manifests, not for security.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace charlab
