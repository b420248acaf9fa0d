#include "charlab/group.hpp"

#include "charlab/error.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace charlab {

namespace {

std::uint32_t bits_for(std::uint32_t m) {
  std::uint32_t b = 1;
  while ((1u << b) < m) ++b;
  return b;
}

// Parses "name(a,b,...)" into name + numbers.
bool parse_descriptor(const std::string& text, std::string& name, std::vector<std::int64_t>& args) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto lp = s.find('(');
  if (lp == std::string::npos) {
    name = s;
    args.clear();
    return !name.empty();
  }
  if (s.back() != ')') return false;
  name = s.substr(0, lp);
  args.clear();
  std::string inner = s.substr(lp + 1, s.size() - lp - 2);
  std::istringstream is(inner);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      args.push_back(std::stoll(tok));
    } catch (...) {
      return false;
    }
  }
  return !name.empty();
}

bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; std::uint64_t(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::int64_t> embedded_elementary(std::uint32_t d_full, std::uint32_t i, std::uint32_t j) {
  std::vector<std::int64_t> m(std::size_t(d_full) * d_full, 0);
  for (std::uint32_t k = 0; k < d_full; ++k) m[k * d_full + k] = 1;
  m[i * d_full + j] = 1;
  return m;
}

}  // namespace

std::uint64_t GroupHandle::pack(const std::uint8_t* e) const {
  std::uint64_t key = 0;
  const std::uint32_t n = mat_d_ * mat_d_;
  for (std::uint32_t i = 0; i < n; ++i) key |= std::uint64_t(e[i]) << (i * mat_bits_);
  return key;
}

std::optional<std::uint32_t> GroupHandle::index_of_entries(const std::uint8_t* e) const {
  auto it = index_.find(pack(e));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t GroupHandle::mul(std::uint32_t x, std::uint32_t y) const {
  switch (backend_) {
    case Backend::Cyclic: {
      std::uint64_t s = std::uint64_t(x) + y;
      return static_cast<std::uint32_t>(s >= cyc_n_ ? s - cyc_n_ : s);
    }
    case Backend::Table:
      return table_[x][y];
    case Backend::Matrix: {
      const std::uint32_t d = mat_d_;
      const std::uint8_t* A = entries(x);
      const std::uint8_t* B = entries(y);
      std::uint8_t C[64];
      for (std::uint32_t i = 0; i < d; ++i)
        for (std::uint32_t j = 0; j < d; ++j) {
          std::uint32_t acc = 0;
          for (std::uint32_t k = 0; k < d; ++k) acc += std::uint32_t(A[i * d + k]) * B[k * d + j];
          C[i * d + j] = static_cast<std::uint8_t>(acc % mat_m_);
        }
      auto it = index_.find(pack(C));
      require(it != index_.end(), ErrorKind::Internal, "matrix product escaped the enumerated group");
      return it->second;
    }
  }
  fail_internal("unreachable");
}

void GroupHandle::bfs_close(const std::vector<std::vector<std::uint8_t>>& gen_entries,
                            std::uint64_t budget) {
  const std::uint32_t d = mat_d_;
  const std::uint32_t n2 = d * d;
  // Insert identity.
  std::vector<std::uint8_t> id(n2, 0);
  for (std::uint32_t i = 0; i < d; ++i) id[i * d + i] = 1 % mat_m_;
  flat_.insert(flat_.end(), id.begin(), id.end());
  index_.emplace(pack(id.data()), 0);
  parent_.emplace_back(0, 0);
  size_ = 1;

  // Insert generators as elements first so gens_ is well-defined even when a
  // generator equals the identity or a duplicate.
  gens_.clear();
  std::queue<std::uint32_t> todo;
  todo.push(0);
  auto try_insert = [&](const std::uint8_t* e, std::uint32_t from, std::uint32_t gen_pos) -> std::uint32_t {
    const std::uint64_t key = pack(e);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    require(size_ < budget, ErrorKind::Budget,
            "group enumeration budget exceeded for " + descriptor_);
    const std::uint32_t idx = size_++;
    flat_.insert(flat_.end(), e, e + n2);
    index_.emplace(key, idx);
    parent_.emplace_back(from, gen_pos);
    todo.push(idx);
    return idx;
  };
  for (std::uint32_t gi = 0; gi < gen_entries.size(); ++gi)
    gens_.push_back(try_insert(gen_entries[gi].data(), 0, gi));

  while (!todo.empty()) {
    const std::uint32_t x = todo.front();
    todo.pop();
    for (std::uint32_t gi = 0; gi < gens_.size(); ++gi) {
      // y = x * s
      const std::uint8_t* A = entries(x);
      const std::uint8_t* B = gen_entries[gi].data();
      std::uint8_t C[64];
      for (std::uint32_t i = 0; i < d; ++i)
        for (std::uint32_t j = 0; j < d; ++j) {
          std::uint32_t acc = 0;
          for (std::uint32_t k = 0; k < d; ++k) acc += std::uint32_t(A[i * d + k]) * B[k * d + j];
          C[i * d + j] = static_cast<std::uint8_t>(acc % mat_m_);
        }
      try_insert(C, x, gi);
    }
  }
}

void GroupHandle::finish_build() {
  // Inverses: inv(identity) = identity; for generators use the power cycle;
  // then one product per element along BFS parents: inv(x s) = inv(s) inv(x).
  inv_.assign(size_, 0);
  std::vector<std::uint32_t> gen_inv(gens_.size());
  for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
    const std::uint32_t s = gens_[gi];
    std::uint32_t prev = 0, cur = s;
    while (cur != 0) {
      prev = cur;
      cur = mul(cur, s);
    }
    gen_inv[gi] = prev;  // s^{ord-1}
    inv_[s] = prev;
  }
  for (std::uint32_t x = 1; x < size_; ++x) {
    const auto [par, gi] = parent_[x];
    if (x == gens_[gi] && par == 0) continue;  // generator, already set
    inv_[x] = mul(gen_inv[gi], inv_[par]);
  }
}

GroupHandle::Ptr GroupHandle::build(const std::string& descriptor, BuildOptions opts) {
  std::string name;
  std::vector<std::int64_t> args;
  require(parse_descriptor(descriptor, name, args), ErrorKind::Validation,
          "could not parse group descriptor: " + descriptor);

  if (name == "cyclic") {
    require(args.size() == 1 && args[0] >= 1, ErrorKind::Validation, "cyclic(n) needs n >= 1");
    require(std::uint64_t(args[0]) <= opts.budget, ErrorKind::Budget,
            "group enumeration budget exceeded for " + descriptor);
    auto g = std::shared_ptr<GroupHandle>(new GroupHandle());
    g->backend_ = Backend::Cyclic;
    g->descriptor_ = descriptor;
    g->cyc_n_ = static_cast<std::uint32_t>(args[0]);
    g->size_ = g->cyc_n_;
    g->gens_ = {g->cyc_n_ > 1 ? 1u : 0u};
    g->inv_.resize(g->size_);
    for (std::uint32_t i = 0; i < g->size_; ++i) g->inv_[i] = (g->cyc_n_ - i) % g->cyc_n_;
    g->parent_.resize(g->size_, {0, 0});
    for (std::uint32_t i = 1; i < g->size_; ++i) g->parent_[i] = {i - 1, 0};
    return g;
  }

  if (name == "q8") {
    require(args.empty(), ErrorKind::Validation, "q8 takes no arguments");
    // Axes 1,i,j,k; index = 2*axis + (1 if negative).
    auto axis_mul = [](int a, int b, int& sign) -> int {
      if (a == 0) {
        sign = 1;
        return b;
      }
      if (b == 0) {
        sign = 1;
        return a;
      }
      if (a == b) {
        sign = -1;
        return 0;
      }
      // cyclic i->j->k
      static const int table[4][4] = {{0, 0, 0, 0}, {0, 0, 3, 2}, {0, 3, 0, 1}, {0, 2, 1, 0}};
      static const int signs[4][4] = {{1, 1, 1, 1}, {1, 1, 1, -1}, {1, -1, 1, 1}, {1, 1, -1, 1}};
      sign = signs[a][b];
      return table[a][b];
    };
    std::vector<std::vector<std::uint32_t>> table(8, std::vector<std::uint32_t>(8));
    for (int x = 0; x < 8; ++x)
      for (int y = 0; y < 8; ++y) {
        int ax = x / 2, sx = (x % 2) ? -1 : 1;
        int ay = y / 2, sy = (y % 2) ? -1 : 1;
        int s = 1;
        int az = axis_mul(ax, ay, s);
        int sz = sx * sy * s;
        table[x][y] = static_cast<std::uint32_t>(2 * az + (sz < 0 ? 1 : 0));
      }
    return from_table(descriptor, std::move(table), {2, 4});
  }

  if (name == "sl") {
    require(args.size() == 2 && args[0] >= 2 && args[1] >= 2, ErrorKind::Validation,
            "sl(d,m) needs d >= 2, m >= 2");
    const auto d = static_cast<std::uint32_t>(args[0]);
    const auto m = static_cast<std::uint32_t>(args[1]);
    std::vector<std::vector<std::int64_t>> gens;
    for (std::uint32_t i = 0; i < d; ++i)
      for (std::uint32_t j = 0; j < d; ++j)
        if (i != j) gens.push_back(embedded_elementary(d, i, j));
    return build_matrix_group(descriptor, d, m, gens, opts);
  }

  if (name == "aff") {
    require(args.size() == 2 && args[0] >= 1 && args[1] >= 2, ErrorKind::Validation,
            "aff(d,p) needs d >= 1, p >= 2");
    const auto d = static_cast<std::uint32_t>(args[0]);
    const auto p = static_cast<std::uint32_t>(args[1]);
    require(is_prime_u32(p), ErrorKind::Validation, "aff(d,p) requires p prime");
    const std::uint32_t D = d + 1;
    std::vector<std::vector<std::int64_t>> gens;
    for (std::uint32_t i = 0; i < d; ++i)
      for (std::uint32_t j = 0; j < d; ++j)
        if (i != j) gens.push_back(embedded_elementary(D, i, j));
    for (std::uint32_t i = 0; i < d; ++i) gens.push_back(embedded_elementary(D, i, d));
    return build_matrix_group(descriptor, D, p, gens, opts);
  }

  if (name == "vec") {
    require(args.size() == 2 && args[0] >= 2 && args[1] >= 1, ErrorKind::Validation,
            "vec(p,d) needs p >= 2, d >= 1");
    const auto p = static_cast<std::uint32_t>(args[0]);
    const auto d = static_cast<std::uint32_t>(args[1]);
    const std::uint32_t D = d + 1;
    std::vector<std::vector<std::int64_t>> gens;
    for (std::uint32_t i = 0; i < d; ++i) gens.push_back(embedded_elementary(D, i, d));
    return build_matrix_group(descriptor, D, p, gens, opts);
  }

  fail_validation("unknown group family in descriptor: " + descriptor);
}

GroupHandle::Ptr GroupHandle::build_matrix_group(const std::string& descriptor, std::uint32_t dim,
                                                 std::uint32_t modulus,
                                                 const std::vector<std::vector<std::int64_t>>& generators,
                                                 BuildOptions opts) {
  require(dim >= 1 && dim <= 8, ErrorKind::Validation, "matrix group dimension out of range");
  require(modulus >= 2 && modulus <= 255, ErrorKind::Validation, "matrix group modulus out of range");
  require(!generators.empty(), ErrorKind::Validation, "matrix group needs at least one generator");
  auto g = std::shared_ptr<GroupHandle>(new GroupHandle());
  g->backend_ = Backend::Matrix;
  g->descriptor_ = descriptor;
  g->mat_d_ = dim;
  g->mat_m_ = modulus;
  g->mat_bits_ = bits_for(modulus);
  require(g->mat_bits_ * dim * dim <= 64, ErrorKind::Validation,
          "matrix group too large to key (bits * d^2 > 64)");

  std::vector<std::vector<std::uint8_t>> gen_entries;
  for (const auto& raw : generators) {
    require(raw.size() == std::size_t(dim) * dim, ErrorKind::Validation,
            "generator entry count != d*d");
    std::vector<std::uint8_t> e(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      std::int64_t v = raw[i] % modulus;
      if (v < 0) v += modulus;
      e[i] = static_cast<std::uint8_t>(v);
    }
    // Invertibility over Z/m: det must be a unit.
    std::vector<std::int64_t> lifted(e.begin(), e.end());
    IntegerMatrixElement probe;  // bypass unimodularity check, only need det
    probe.d = dim;
    probe.a = lifted;
    std::int64_t dt = probe.det() % modulus;
    if (dt < 0) dt += modulus;
    require(std::gcd<std::int64_t>(dt, modulus) == 1, ErrorKind::Validation,
            "non-invertible generator for " + descriptor);
    gen_entries.push_back(std::move(e));
  }
  g->bfs_close(gen_entries, opts.budget);
  g->finish_build();
  return g;
}

GroupHandle::Ptr GroupHandle::from_table(const std::string& descriptor,
                                         std::vector<std::vector<std::uint32_t>> table,
                                         std::vector<std::uint32_t> generator_indices) {
  const std::uint32_t n = static_cast<std::uint32_t>(table.size());
  require(n >= 1, ErrorKind::Validation, "empty multiplication table");
  for (const auto& row : table)
    require(row.size() == n, ErrorKind::Validation, "multiplication table is not square");
  for (std::uint32_t i = 0; i < n; ++i) {
    require(table[0][i] == i && table[i][0] == i, ErrorKind::Validation,
            "table identity must be index 0");
    for (std::uint32_t j = 0; j < n; ++j)
      require(table[i][j] < n, ErrorKind::Validation, "table entry out of range");
  }
  if (n <= 256) {
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j)
        for (std::uint32_t k = 0; k < n; ++k)
          require(table[table[i][j]][k] == table[i][table[j][k]], ErrorKind::Validation,
                  "multiplication table is not associative");
  }
  auto g = std::shared_ptr<GroupHandle>(new GroupHandle());
  g->backend_ = Backend::Table;
  g->descriptor_ = descriptor;
  g->size_ = n;
  g->table_ = std::move(table);
  g->inv_.assign(n, n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      if (g->table_[i][j] == 0) g->inv_[i] = j;
  for (std::uint32_t i = 0; i < n; ++i)
    require(g->inv_[i] < n, ErrorKind::Validation, "table element with no inverse");
  if (generator_indices.empty() && n == 1) generator_indices = {0};
  require(!generator_indices.empty(), ErrorKind::Validation, "table group needs generators");
  g->gens_ = std::move(generator_indices);
  for (auto s : g->gens_) require(s < n, ErrorKind::Validation, "generator index out of range");
  // BFS to verify generation and record parent words.
  g->parent_.assign(n, {UINT32_MAX, 0});
  g->parent_[0] = {0, 0};
  std::queue<std::uint32_t> todo;
  todo.push(0);
  std::uint32_t reached = 1;
  while (!todo.empty()) {
    std::uint32_t x = todo.front();
    todo.pop();
    for (std::uint32_t gi = 0; gi < g->gens_.size(); ++gi) {
      std::uint32_t y = g->table_[x][g->gens_[gi]];
      if (y != 0 && g->parent_[y].first == UINT32_MAX) {
        g->parent_[y] = {x, gi};
        ++reached;
        todo.push(y);
      }
    }
  }
  require(reached == n, ErrorKind::Validation, "listed generators do not generate the table group");
  return g;
}

std::vector<std::uint32_t> GroupHandle::word(std::uint32_t g) const {
  std::vector<std::uint32_t> w;
  std::uint32_t x = g;
  while (x != 0) {
    const auto [par, gi] = parent_[x];
    w.push_back(gi);
    x = par;
    require(w.size() <= size_, ErrorKind::Internal, "word extraction cycle");
  }
  std::reverse(w.begin(), w.end());
  return w;
}

std::uint32_t GroupHandle::order_of(std::uint32_t g) const {
  std::uint32_t ord = 1, x = g;
  while (x != 0) {
    x = mul(x, g);
    ++ord;
    require(ord <= size_, ErrorKind::Internal, "order exceeds group size");
  }
  return ord;
}

std::uint32_t GroupHandle::reduce(const IntegerMatrixElement& M) const {
  require(backend_ == Backend::Matrix, ErrorKind::Validation,
          "reduction target group has no matrix form");
  require(M.d == mat_d_, ErrorKind::Validation, "reduction shape mismatch");
  std::uint8_t e[64];
  for (std::uint32_t i = 0; i < mat_d_ * mat_d_; ++i) {
    std::int64_t v = M.a[i] % mat_m_;
    if (v < 0) v += mat_m_;
    e[i] = static_cast<std::uint8_t>(v);
  }
  auto idx = index_of_entries(e);
  require(idx.has_value(), ErrorKind::Validation,
          "reduced matrix is not an element of " + descriptor_);
  return *idx;
}

ConjClasses conjugacy_classes(const GroupHandle& G) {
  const std::uint32_t n = G.size();
  ConjClasses out;
  out.class_of.assign(n, UINT32_MAX);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t x = 0; x < n; ++x) {
    if (out.class_of[x] != UINT32_MAX) continue;
    const std::uint32_t cid = out.count();
    out.rep.push_back(x);
    out.size.push_back(0);
    out.class_of[x] = cid;
    stack.assign(1, x);
    std::uint32_t cnt = 0;
    while (!stack.empty()) {
      const std::uint32_t y = stack.back();
      stack.pop_back();
      ++cnt;
      for (std::uint32_t s : G.generators()) {
        const std::uint32_t z = G.conjugate(s, y);
        if (out.class_of[z] == UINT32_MAX) {
          out.class_of[z] = cid;
          stack.push_back(z);
        }
      }
    }
    out.size[cid] = cnt;
  }
  out.inverse_class.resize(out.count());
  for (std::uint32_t c = 0; c < out.count(); ++c)
    out.inverse_class[c] = out.class_of[G.inv(out.rep[c])];
  return out;
}

std::uint32_t group_exponent(const GroupHandle& G, const ConjClasses& cls) {
  std::uint64_t e = 1;
  for (std::uint32_t c = 0; c < cls.count(); ++c) {
    e = std::lcm<std::uint64_t>(e, G.order_of(cls.rep[c]));
    require(e <= (1u << 30), ErrorKind::Budget, "group exponent too large");
  }
  return static_cast<std::uint32_t>(e);
}

std::vector<std::vector<std::uint32_t>> enumerate_subgroups(const GroupHandle& G,
                                                            std::uint32_t budget) {
  require(G.size() <= budget, ErrorKind::Budget, "subgroup enumeration budget exceeded");
  auto closure = [&](std::vector<std::uint32_t> elems) {
    std::set<std::uint32_t> seen(elems.begin(), elems.end());
    seen.insert(0);
    std::vector<std::uint32_t> todo(seen.begin(), seen.end());
    while (!todo.empty()) {
      std::uint32_t x = todo.back();
      todo.pop_back();
      for (std::uint32_t y : seen) {
        for (std::uint32_t z : {G.mul(x, y), G.mul(y, x)}) {
          if (seen.insert(z).second) todo.push_back(z);
        }
      }
      if (seen.insert(G.inv(x)).second) todo.push_back(G.inv(x));
    }
    return std::vector<std::uint32_t>(seen.begin(), seen.end());
  };
  std::set<std::vector<std::uint32_t>> subs;
  std::vector<std::vector<std::uint32_t>> fresh;
  for (std::uint32_t g = 0; g < G.size(); ++g) {
    auto h = closure({g});
    if (subs.insert(h).second) fresh.push_back(h);
  }
  // Close under join.
  while (!fresh.empty()) {
    std::vector<std::vector<std::uint32_t>> next;
    for (const auto& a : fresh) {
      for (const auto& b : subs) {
        if (a == b) continue;
        std::vector<std::uint32_t> u;
        u.reserve(a.size() + b.size());
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
        if (u.size() == a.size() || u.size() == b.size()) continue;  // containment
        auto h = closure(u);
        if (subs.find(h) == subs.end()) {
          subs.insert(h);
          next.push_back(h);
        }
        require(subs.size() <= 65536, ErrorKind::Budget, "subgroup lattice too large");
      }
    }
    fresh = std::move(next);
  }
  return std::vector<std::vector<std::uint32_t>>(subs.begin(), subs.end());
}

}  // namespace charlab
