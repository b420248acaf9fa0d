#include "charlab/char_table.hpp"

#include "charlab/error.hpp"
#include "charlab/modular.hpp"
#include "charlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace charlab {

namespace {

constexpr std::uint32_t kClassBudget = 128;  // dense k^3 structure constants

std::uint64_t isqrt_u64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

using FMat = std::vector<std::vector<std::uint64_t>>;

std::uint64_t addm(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}
std::uint64_t subm(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}

// Reduced row echelon form; returns the nonzero rows and their pivot columns.
struct FBasis {
  FMat rows;
  std::vector<std::uint32_t> pivots;
  std::uint32_t dim() const { return static_cast<std::uint32_t>(rows.size()); }
};

FBasis rref(FMat rows, std::uint64_t p) {
  FBasis b;
  if (rows.empty()) return b;
  const std::size_t k = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < k && r < rows.size(); ++c) {
    std::size_t sel = rows.size();
    for (std::size_t i = r; i < rows.size(); ++i)
      if (rows[i][c] != 0) {
        sel = i;
        break;
      }
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const std::uint64_t inv = fp::invmod(rows[r][c], p);
    for (auto& v : rows[r]) v = fp::mulmod(v, inv, p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const std::uint64_t f = rows[i][c];
      for (std::size_t j = c; j < k; ++j) rows[i][j] = subm(rows[i][j], fp::mulmod(f, rows[r][j], p), p);
    }
    b.pivots.push_back(static_cast<std::uint32_t>(c));
    ++r;
  }
  rows.resize(r);
  b.rows = std::move(rows);
  return b;
}

// Characteristic polynomial via Hessenberg reduction; valid over any F_p
// (divides only by subdiagonal pivots).
fp::Poly hessenberg_charpoly(FMat A, std::uint64_t p) {
  const std::size_t n = A.size();
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t piv = n;
    for (std::size_t i = j + 1; i < n; ++i)
      if (A[i][j] != 0) {
        piv = i;
        break;
      }
    if (piv == n) continue;
    if (piv != j + 1) {
      std::swap(A[piv], A[j + 1]);
      for (std::size_t r = 0; r < n; ++r) std::swap(A[r][piv], A[r][j + 1]);
    }
    const std::uint64_t inv = fp::invmod(A[j + 1][j], p);
    for (std::size_t i = j + 2; i < n; ++i) {
      if (A[i][j] == 0) continue;
      const std::uint64_t f = fp::mulmod(A[i][j], inv, p);
      for (std::size_t c = 0; c < n; ++c) A[i][c] = subm(A[i][c], fp::mulmod(f, A[j + 1][c], p), p);
      for (std::size_t r = 0; r < n; ++r) A[r][j + 1] = addm(A[r][j + 1], fp::mulmod(f, A[r][i], p), p);
    }
  }
  // p_m = (x - H[m-1][m-1]) p_{m-1} - sum_i H[i-1][m-1] (prod subdiag) p_{i-1}
  std::vector<fp::Poly> P(n + 1);
  P[0] = {1};
  for (std::size_t m = 1; m <= n; ++m) {
    const fp::Poly& prev = P[m - 1];
    fp::Poly cur(prev.size() + 1, 0);
    for (std::size_t i = 0; i < prev.size(); ++i) {
      cur[i + 1] = addm(cur[i + 1], prev[i], p);
      cur[i] = subm(cur[i], fp::mulmod(A[m - 1][m - 1], prev[i], p), p);
    }
    std::uint64_t prod = 1;
    for (std::size_t i = m - 1; i >= 1; --i) {
      prod = fp::mulmod(prod, A[i][i - 1], p);
      if (prod == 0) break;
      const std::uint64_t f = fp::mulmod(A[i - 1][m - 1], prod, p);
      if (f != 0) {
        const fp::Poly& pi = P[i - 1];
        for (std::size_t t = 0; t < pi.size(); ++t) cur[t] = subm(cur[t], fp::mulmod(f, pi[t], p), p);
      }
    }
    P[m] = std::move(cur);
  }
  return P[n];
}

std::vector<std::vector<std::uint64_t>> nullspace_basis(const FMat& A, std::uint64_t p) {
  const std::size_t n = A.size();
  FBasis R = rref(A, p);
  std::vector<bool> is_piv(n, false);
  for (auto c : R.pivots) is_piv[c] = true;
  std::vector<std::vector<std::uint64_t>> out;
  for (std::size_t c = 0; c < n; ++c) {
    if (is_piv[c]) continue;
    std::vector<std::uint64_t> v(n, 0);
    v[c] = 1;
    for (std::size_t r = 0; r < R.rows.size(); ++r)
      if (R.rows[r][c] != 0) v[R.pivots[r]] = p - R.rows[r][c];
    out.push_back(std::move(v));
  }
  return out;
}

struct RawRow {
  std::uint32_t degree = 0;
  std::vector<std::vector<std::uint32_t>> counts;  // per class
};

// counts comparator: degree ascending, then first differing class column
// compared lexicographically with the larger count vector first.
bool row_less(const RawRow& a, const RawRow& b) {
  if (a.degree != b.degree) return a.degree < b.degree;
  for (std::size_t l = 0; l < a.counts.size(); ++l) {
    if (a.counts[l] != b.counts[l]) return a.counts[l] > b.counts[l];
  }
  return false;
}

}  // namespace

std::vector<std::vector<std::vector<std::uint64_t>>> class_coefficients(const GroupHandle& G,
                                                                        const ConjClasses& cls) {
  const std::uint32_t k = cls.count();
  require(k <= kClassBudget, ErrorKind::Budget, "class count exceeds structure-constant budget");
  std::vector<std::vector<std::vector<std::uint64_t>>> a(
      k, std::vector<std::vector<std::uint64_t>>(k, std::vector<std::uint64_t>(k, 0)));
  for (std::uint32_t l = 0; l < k; ++l) {
    const std::uint32_t z = cls.rep[l];
    for (std::uint32_t x = 0; x < G.size(); ++x) {
      const std::uint32_t y = G.mul(G.inv(x), z);
      a[cls.class_of[x]][cls.class_of[y]][l]++;
    }
  }
  return a;
}

std::uint64_t admissible_prime(std::uint32_t exponent, std::uint64_t order, std::uint64_t above) {
  const std::uint64_t lb = std::max<std::uint64_t>(above, isqrt_u64(4 * order));
  return fp::least_prime_1_mod(exponent, lb);
}

Cyclotomic CharacterTable::value(std::uint32_t row, std::uint32_t cls) const {
  const auto& m = counts[row][cls];
  std::vector<Rational> c(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) c[i] = Rational(m[i]);
  return Cyclotomic(class_rep_order[cls], std::move(c));
}

Cyclotomic CharacterTable::normalized_value(std::uint32_t row, std::uint32_t cls) const {
  return value(row, cls).scaled(Rational(1, degree[row]));
}

namespace {

// One complete Dixon pass at a fixed admissible prime; nullopt on the
// (theoretically impossible, defensively handled) failure to split all
// eigenspaces to dimension one.
std::optional<CharacterTable> dixon_at_prime(const GroupHandle& G, const ConjClasses& cls,
                                             std::uint32_t exponent,
                                             const std::vector<std::vector<std::vector<std::uint64_t>>>& a,
                                             std::uint64_t l) {
  const std::uint32_t k = cls.count();
  const std::uint64_t seed = derive_seed(0x636861726c6162ULL, "dixon.roots");

  // Iteratively split the common eigenspaces of the class matrices.
  std::vector<FBasis> spaces;
  {
    FMat id(k, std::vector<std::uint64_t>(k, 0));
    for (std::uint32_t i = 0; i < k; ++i) id[i][i] = 1;
    spaces.push_back(rref(std::move(id), l));
  }
  for (std::uint32_t t = 1; t < k; ++t) {
    bool all_split = true;
    for (const auto& s : spaces)
      if (s.dim() > 1) all_split = false;
    if (all_split) break;
    FMat Mt(k, std::vector<std::uint64_t>(k, 0));
    for (std::uint32_t j = 0; j < k; ++j)
      for (std::uint32_t l2 = 0; l2 < k; ++l2) Mt[j][l2] = a[t][j][l2] % l;
    std::vector<FBasis> next;
    for (auto& S : spaces) {
      const std::uint32_t r = S.dim();
      if (r == 1) {
        next.push_back(std::move(S));
        continue;
      }
      // Restriction of Mt to the invariant subspace: Mt b_s = sum_t2 R[t2][s] b_t2,
      // coefficients read off at pivot columns of the RREF basis.
      FMat R(r, std::vector<std::uint64_t>(r, 0));
      for (std::uint32_t s = 0; s < r; ++s) {
        std::vector<std::uint64_t> u(k, 0);
        for (std::uint32_t j = 0; j < k; ++j) {
          std::uint64_t acc = 0;
          for (std::uint32_t c = 0; c < k; ++c)
            if (Mt[j][c] != 0 && S.rows[s][c] != 0) acc = addm(acc, fp::mulmod(Mt[j][c], S.rows[s][c], l), l);
          u[j] = acc;
        }
        for (std::uint32_t t2 = 0; t2 < r; ++t2) R[t2][s] = u[S.pivots[t2]];
        // invariance check: the residual must vanish
        for (std::uint32_t j = 0; j < k; ++j) {
          std::uint64_t rec = 0;
          for (std::uint32_t t2 = 0; t2 < r; ++t2)
            rec = addm(rec, fp::mulmod(R[t2][s], S.rows[t2][j], l), l);
          require(rec == u[j], ErrorKind::Internal, "class-matrix subspace not invariant");
        }
      }
      const fp::Poly cp = hessenberg_charpoly(R, l);
      const auto roots = fp::poly_roots(cp, l, seed);
      std::uint32_t found = 0;
      for (const std::uint64_t w : roots) {
        FMat N = R;
        for (std::uint32_t i = 0; i < r; ++i) N[i][i] = subm(N[i][i], w % l, l);
        auto coords = nullspace_basis(N, l);
        if (coords.empty()) continue;
        FMat lifted;
        for (const auto& cvec : coords) {
          std::vector<std::uint64_t> row(k, 0);
          for (std::uint32_t t2 = 0; t2 < r; ++t2) {
            if (cvec[t2] == 0) continue;
            for (std::uint32_t j = 0; j < k; ++j)
              row[j] = addm(row[j], fp::mulmod(cvec[t2], S.rows[t2][j], l), l);
          }
          lifted.push_back(std::move(row));
        }
        found += static_cast<std::uint32_t>(lifted.size());
        next.push_back(rref(std::move(lifted), l));
      }
      if (found != r) return std::nullopt;  // defect eigenbasis: retry at another prime
    }
    spaces = std::move(next);
  }
  for (const auto& s : spaces)
    if (s.dim() != 1) return std::nullopt;
  require(spaces.size() == k, ErrorKind::Internal, "eigenspace count != class count");

  // Normalize w[identity class] = 1 (class 0 is always {e}).
  std::vector<std::vector<std::uint64_t>> w(k);
  for (std::uint32_t t = 0; t < k; ++t) {
    w[t] = spaces[t].rows[0];
    require(w[t][0] != 0, ErrorKind::Internal, "eigenvector vanishes at the identity class");
    const std::uint64_t inv = fp::invmod(w[t][0], l);
    for (auto& v : w[t]) v = fp::mulmod(v, inv, l);
  }

  // Degrees: 1/d^2 = (1/|G|) sum_l w_l w_{inv(l)} / |C_l| over F_l, then the
  // square root in the symmetric range; validated by sum d^2 = |G| over Z.
  const std::uint64_t gord = G.size() % l;
  std::vector<std::uint32_t> degree(k);
  for (std::uint32_t t = 0; t < k; ++t) {
    std::uint64_t s = 0;
    for (std::uint32_t j = 0; j < k; ++j) {
      const std::uint64_t term =
          fp::mulmod(fp::mulmod(w[t][j], w[t][cls.inverse_class[j]], l), fp::invmod(cls.size[j] % l, l), l);
      s = addm(s, term, l);
    }
    require(s != 0, ErrorKind::Internal, "degree functional vanished");
    const std::uint64_t d2 = fp::mulmod(gord, fp::invmod(s, l), l);
    std::uint64_t d = fp::sqrtmod(d2, l);
    if (d > l - d) d = l - d;
    require(d * d <= G.size(), ErrorKind::Internal, "degree exceeds sqrt(|G|)");
    degree[t] = static_cast<std::uint32_t>(d);
  }
  {
    std::uint64_t sum = 0;
    for (auto d : degree) sum += static_cast<std::uint64_t>(d) * d;
    require(sum == G.size(), ErrorKind::Internal, "sum of squared degrees != |G|");
  }

  // Character values mod l.
  std::vector<std::vector<std::uint64_t>> chi(k, std::vector<std::uint64_t>(k));
  for (std::uint32_t t = 0; t < k; ++t)
    for (std::uint32_t j = 0; j < k; ++j)
      chi[t][j] = fp::mulmod(fp::mulmod(degree[t], w[t][j], l), fp::invmod(cls.size[j] % l, l), l);

  // Lift each value through eigenvalue multiplicities: with g of order n and
  // zeta_n |-> z_n in F_l, m_c = n^{-1} sum_j chi(g^j) z_n^{-cj} counts the
  // eigenvalue zeta_n^c of the representing matrix; it is prime-independent.
  const std::uint64_t z = fp::powmod(fp::primitive_root(l), (l - 1) / exponent, l);
  std::vector<std::uint32_t> rep_order(k);
  std::vector<std::vector<std::uint32_t>> power_class(k);
  for (std::uint32_t j = 0; j < k; ++j) {
    const std::uint32_t g = cls.rep[j];
    rep_order[j] = G.order_of(g);
    power_class[j].resize(rep_order[j]);
    std::uint32_t x = G.identity();
    for (std::uint32_t i = 0; i < rep_order[j]; ++i) {
      power_class[j][i] = cls.class_of[x];
      x = G.mul(x, g);
    }
  }
  std::vector<RawRow> rows(k);
  for (std::uint32_t t = 0; t < k; ++t) {
    rows[t].degree = degree[t];
    rows[t].counts.resize(k);
    for (std::uint32_t j = 0; j < k; ++j) {
      const std::uint32_t n = rep_order[j];
      const std::uint64_t zn_inv = fp::invmod(fp::powmod(z, exponent / n, l), l);
      const std::uint64_t n_inv = fp::invmod(n % l, l);
      std::vector<std::uint32_t> m(n);
      std::uint64_t total = 0;
      for (std::uint32_t c = 0; c < n; ++c) {
        std::uint64_t acc = 0, zpow = 1;
        const std::uint64_t step = fp::powmod(zn_inv, c, l);
        for (std::uint32_t i = 0; i < n; ++i) {
          acc = addm(acc, fp::mulmod(chi[t][power_class[j][i]], zpow, l), l);
          zpow = fp::mulmod(zpow, step, l);
        }
        const std::uint64_t mc = fp::mulmod(acc, n_inv, l);
        require(mc <= degree[t], ErrorKind::Internal, "eigenvalue multiplicity out of range");
        m[c] = static_cast<std::uint32_t>(mc);
        total += mc;
      }
      require(total == degree[t], ErrorKind::Internal, "eigenvalue multiplicities do not sum to the degree");
      rows[t].counts[j] = std::move(m);
    }
  }
  std::sort(rows.begin(), rows.end(), row_less);

  CharacterTable T;
  T.group = G.descriptor();
  T.order = G.size();
  T.exponent = exponent;
  T.prime = l;
  T.class_rep = cls.rep;
  T.class_size = cls.size;
  T.class_rep_order = rep_order;
  T.inverse_class = cls.inverse_class;
  for (auto& r : rows) {
    T.degree.push_back(r.degree);
    T.counts.push_back(std::move(r.counts));
  }
  // The trivial character must have sorted to the top.
  require(T.degree[0] == 1, ErrorKind::Internal, "row 0 is not linear");
  for (std::uint32_t j = 0; j < k; ++j) {
    require(T.counts[0][j][0] == 1, ErrorKind::Internal, "row 0 is not the trivial character");
    for (std::uint32_t c = 1; c < rep_order[j]; ++c)
      require(T.counts[0][j][c] == 0, ErrorKind::Internal, "row 0 is not the trivial character");
  }
  return T;
}

}  // namespace

CharacterTable compute_character_table(const GroupHandle& G, const ConjClasses& cls,
                                       std::uint64_t prime_override) {
  const std::uint32_t k = cls.count();
  require(k >= 1 && k <= kClassBudget, ErrorKind::Budget, "class count exceeds table budget");
  const std::uint32_t e = group_exponent(G, cls);
  const auto a = class_coefficients(G, cls);
  if (prime_override != 0) {
    require(fp::is_prime(prime_override), ErrorKind::Validation, "override prime is not prime");
    require(prime_override % e == 1 % e, ErrorKind::Validation,
            "override prime is not 1 mod the group exponent");
    require(prime_override * prime_override > 4 * static_cast<std::uint64_t>(G.size()),
            ErrorKind::Validation, "override prime is not > 2 sqrt(|G|)");
    auto T = dixon_at_prime(G, cls, e, a, prime_override);
    require(T.has_value(), ErrorKind::Numeric, "eigenvector splitting failed at the override prime");
    return *T;
  }
  std::uint64_t l = admissible_prime(e, G.size());
  for (int attempt = 0; attempt < 3; ++attempt) {
    auto T = dixon_at_prime(G, cls, e, a, l);
    if (T.has_value()) return *T;
    l = admissible_prime(e, G.size(), l);  // next admissible prime
  }
  fail_numeric("eigenvector splitting failed at three admissible primes");
}

bool verify_row_orthogonality(const CharacterTable& T) {
  const std::uint32_t k = T.cols();
  const std::uint32_t e = T.exponent;
  {
    std::uint64_t total = 0;
    for (auto s : T.class_size) total += s;
    if (total != T.order) return false;
  }
  for (std::uint32_t r = 0; r < T.rows(); ++r) {
    for (std::uint32_t s = r; s < T.rows(); ++s) {
      std::vector<std::int64_t> acc(e, 0);
      for (std::uint32_t j = 0; j < k; ++j) {
        const std::uint32_t n = T.class_rep_order[j];
        const std::uint32_t stride = e / n;
        const auto& mr = T.counts[r][j];
        const auto& ms = T.counts[s][j];
        const auto w = static_cast<std::int64_t>(T.class_size[j]);
        for (std::uint32_t c1 = 0; c1 < n; ++c1) {
          if (mr[c1] == 0) continue;
          for (std::uint32_t c2 = 0; c2 < n; ++c2) {
            if (ms[c2] == 0) continue;
            const std::uint32_t idx = ((c1 + n - c2) % n) * stride;
            acc[idx] += w * static_cast<std::int64_t>(mr[c1]) * static_cast<std::int64_t>(ms[c2]);
          }
        }
      }
      if (r == s) acc[0] -= static_cast<std::int64_t>(T.order);
      for (const auto v : canonical_int(e, acc))
        if (v != 0) return false;
    }
  }
  return true;
}

bool verify_column_orthogonality(const CharacterTable& T) {
  const std::uint32_t k = T.cols();
  const std::uint32_t e = T.exponent;
  for (std::uint32_t j = 0; j < k; ++j) {
    if (T.order % T.class_size[j] != 0) return false;
    for (std::uint32_t l = j; l < k; ++l) {
      const std::uint32_t nj = T.class_rep_order[j], nl = T.class_rep_order[l];
      const std::uint32_t sj = e / nj, sl = e / nl;
      std::vector<std::int64_t> acc(e, 0);
      for (std::uint32_t r = 0; r < T.rows(); ++r) {
        const auto& mj = T.counts[r][j];
        const auto& ml = T.counts[r][l];
        for (std::uint32_t c1 = 0; c1 < nj; ++c1) {
          if (mj[c1] == 0) continue;
          for (std::uint32_t c2 = 0; c2 < nl; ++c2) {
            if (ml[c2] == 0) continue;
            const std::uint32_t idx = (c1 * sj + e - c2 * sl) % e;
            acc[idx] += static_cast<std::int64_t>(mj[c1]) * static_cast<std::int64_t>(ml[c2]);
          }
        }
      }
      // |C_j| sum_r chi_r(j) conj(chi_r(l)) = delta |G|  <=>  the accumulated
      // sum equals delta * |G| / |C_j| (an integer since |C_j| divides |G|).
      if (j == l) acc[0] -= static_cast<std::int64_t>(T.order / T.class_size[j]);
      for (const auto v : canonical_int(e, acc))
        if (v != 0) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> row_kernel_classes(const CharacterTable& T, std::uint32_t row) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t j = 0; j < T.cols(); ++j) {
    const auto& m = T.counts[row][j];
    bool in_kernel = (m[0] == T.degree[row]);
    for (std::uint32_t c = 1; in_kernel && c < m.size(); ++c)
      if (m[c] != 0) in_kernel = false;
    if (in_kernel) out.push_back(j);
  }
  return out;
}

bool is_row_faithful(const CharacterTable& T, std::uint32_t row) {
  const auto k = row_kernel_classes(T, row);
  return k.size() == 1 && k[0] == 0;
}

}  // namespace charlab
