#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace charlab {

// All randomized internals draw from streams derived from one base seed, so a
// run is reproducible from (seed, stream tag) alone.  Tags are short strings
// naming the consumer ("gns.block", "certs.random-x", ...).
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
  // FNV-1a over the tag, then splitmix64 mixing with the base seed.
  std::uint64_t h = 1469598103934665603ull;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull + h;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t base, std::string_view tag) {
  return std::mt19937_64(derive_seed(base, tag));
}

}  // namespace charlab
