#include "charlab/modular.hpp"

#include "charlab/error.hpp"
#include "charlab/rng.hpp"

#include <algorithm>

namespace charlab::fp {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  require(a != 0, ErrorKind::Internal, "invmod of zero");
  return powmod(a, p - 2, p);
}

std::uint64_t sqrtmod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  require(powmod(a, (p - 1) / 2, p) == 1, ErrorKind::Internal, "sqrtmod: not a quadratic residue");
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  // Tonelli-Shanks.
  std::uint64_t q = p - 1, s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  std::uint64_t z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  std::uint64_t m = s;
  std::uint64_t c = powmod(z, q, p);
  std::uint64_t t = powmod(a, q, p);
  std::uint64_t r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    std::uint64_t i = 0, tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
      require(i < m, ErrorKind::Internal, "sqrtmod: loop failed");
    }
    std::uint64_t b = powmod(c, std::uint64_t(1) << (m - i - 1), p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1, s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  // Deterministic Miller-Rabin bases for 64-bit inputs.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a % n, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (std::uint64_t r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::uint64_t primitive_root(std::uint64_t p) {
  if (p == 2) return 1;
  std::uint64_t phi = p - 1;
  std::vector<std::uint64_t> primes;
  std::uint64_t m = phi;
  for (std::uint64_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      primes.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) primes.push_back(m);
  for (std::uint64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (std::uint64_t q : primes) {
      if (powmod(g, phi / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  fail_internal("no primitive root found");
}

std::uint64_t least_prime_1_mod(std::uint64_t e, std::uint64_t lower_bound) {
  require(e >= 1, ErrorKind::Internal, "least_prime_1_mod: e must be positive");
  // Candidates are 1 + k*e; least k with 1 + k*e > lower_bound.
  std::uint64_t k = (lower_bound >= 1) ? ((lower_bound - 1) / e + 1) : 1;
  for (;; ++k) {
    std::uint64_t cand = 1 + k * e;
    if (cand <= lower_bound) continue;
    if (cand > 2 && cand % 2 == 0) continue;
    if (is_prime(cand)) return cand;
    require(k < (std::uint64_t(1) << 40), ErrorKind::Internal, "prime search runaway");
  }
}

Poly poly_trim(Poly f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

Poly poly_mul(const Poly& f, const Poly& g, std::uint64_t p) {
  if (f.empty() || g.empty()) return {};
  Poly h(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) {
      h[i + j] = (h[i + j] + static_cast<unsigned __int128>(f[i]) * g[j]) % p;
    }
  }
  return poly_trim(std::move(h));
}

Poly poly_mod(Poly f, const Poly& g, std::uint64_t p) {
  f = poly_trim(std::move(f));
  require(!g.empty(), ErrorKind::Internal, "poly_mod by zero");
  const std::uint64_t lead_inv = invmod(g.back(), p);
  while (f.size() >= g.size()) {
    std::uint64_t c = mulmod(f.back(), lead_inv, p);
    std::size_t shift = f.size() - g.size();
    if (c != 0) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        std::uint64_t sub = mulmod(c, g[i], p);
        f[shift + i] = (f[shift + i] + p - sub) % p;
      }
    }
    f.pop_back();
    while (!f.empty() && f.back() == 0) f.pop_back();
  }
  return f;
}

Poly poly_gcd(Poly f, Poly g, std::uint64_t p) {
  f = poly_trim(std::move(f));
  g = poly_trim(std::move(g));
  while (!g.empty()) {
    Poly r = poly_mod(f, g, p);
    f = std::move(g);
    g = std::move(r);
  }
  if (!f.empty()) {
    // Monic normalization.
    std::uint64_t inv = invmod(f.back(), p);
    for (auto& c : f) c = mulmod(c, inv, p);
  }
  return f;
}

Poly poly_xpow_mod(std::uint64_t e, const Poly& f, std::uint64_t p) {
  Poly result{1};
  Poly base = poly_mod(Poly{0, 1}, f, p);
  while (e) {
    if (e & 1) result = poly_mod(poly_mul(result, base, p), f, p);
    base = poly_mod(poly_mul(base, base, p), f, p);
    e >>= 1;
  }
  return result;
}

std::uint64_t poly_eval(const Poly& f, std::uint64_t x, std::uint64_t p) {
  std::uint64_t acc = 0;
  for (std::size_t i = f.size(); i-- > 0;) acc = (mulmod(acc, x, p) + f[i]) % p;
  return acc;
}

namespace {

// Equal-degree splitting for a squarefree product of linear factors.
void split_linear(const Poly& f, std::uint64_t p, std::mt19937_64& rng,
                  std::vector<std::uint64_t>& out) {
  Poly g = poly_trim(f);
  require(!g.empty(), ErrorKind::Internal, "split_linear: zero polynomial");
  if (g.size() == 1) return;
  if (g.size() == 2) {
    // x + c -> root -c (g is monic).
    out.push_back((p - g[0] % p) % p);
    return;
  }
  for (int attempt = 0; attempt < 256; ++attempt) {
    std::uint64_t delta = rng() % p;
    // gcd(g, (x+delta)^((p-1)/2) - 1) splits the roots into two nonempty parts
    // whenever the shifted roots straddle the QR/QNR boundary.
    Poly shifted{delta, 1};
    Poly h = shifted;
    // (x+delta)^((p-1)/2) mod g
    Poly acc{1};
    std::uint64_t e = (p - 1) / 2;
    Poly base = poly_mod(h, g, p);
    while (e) {
      if (e & 1) acc = poly_mod(poly_mul(acc, base, p), g, p);
      base = poly_mod(poly_mul(base, base, p), g, p);
      e >>= 1;
    }
    if (acc.empty())
      acc = Poly{p - 1};  // treat as -1 so the gcd below is trivial; retry
    else
      acc[0] = (acc[0] + p - 1) % p;
    Poly d = poly_gcd(g, poly_trim(std::move(acc)), p);
    if (d.size() > 1 && d.size() < g.size()) {
      split_linear(d, p, rng, out);
      // Divide g by d to get the complementary factor.
      Poly quot;
      {
        Poly rem = g;
        quot.assign(rem.size() - d.size() + 1, 0);
        std::uint64_t lead_inv = invmod(d.back(), p);
        while (rem.size() >= d.size() && !rem.empty()) {
          std::uint64_t c = mulmod(rem.back(), lead_inv, p);
          std::size_t shift = rem.size() - d.size();
          quot[shift] = c;
          for (std::size_t i = 0; i < d.size(); ++i) {
            std::uint64_t sub = mulmod(c, d[i], p);
            rem[shift + i] = (rem[shift + i] + p - sub) % p;
          }
          while (!rem.empty() && rem.back() == 0) rem.pop_back();
        }
        require(rem.empty(), ErrorKind::Internal, "split_linear: non-exact division");
      }
      split_linear(poly_trim(std::move(quot)), p, rng, out);
      return;
    }
  }
  fail_numeric("root splitting did not converge");
}

}  // namespace

std::vector<std::uint64_t> poly_roots(const Poly& f, std::uint64_t p, std::uint64_t seed) {
  Poly g = poly_trim(f);
  require(!g.empty(), ErrorKind::Internal, "poly_roots of zero polynomial");
  // Strip multiplicities and non-root content: gcd with x^p - x.
  Poly xp = poly_xpow_mod(p, g, p);
  // xp - x
  Poly diff = xp;
  if (diff.size() < 2) diff.resize(2, 0);
  diff[1] = (diff[1] + p - 1) % p;
  Poly sf = poly_gcd(g, poly_trim(std::move(diff)), p);
  std::vector<std::uint64_t> roots;
  if (!sf.empty() && sf.size() > 1) {
    auto rng = make_rng(seed, "fp.poly-roots");
    split_linear(sf, p, rng, roots);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace charlab::fp
