#include "charlab/intmatrix.hpp"

#include "charlab/error.hpp"

#include <queue>
#include <sstream>
#include <unordered_set>

namespace charlab {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  require(!__builtin_mul_overflow(a, b, &r), ErrorKind::Validation, "integer matrix overflow");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  require(!__builtin_add_overflow(a, b, &r), ErrorKind::Validation, "integer matrix overflow");
  return r;
}

std::int64_t det_rec(const std::vector<std::int64_t>& a, std::vector<std::uint32_t> rows,
                     std::vector<std::uint32_t> cols, std::uint32_t d) {
  const std::uint32_t n = static_cast<std::uint32_t>(rows.size());
  if (n == 1) return a[rows[0] * d + cols[0]];
  std::int64_t acc = 0;
  std::vector<std::uint32_t> sub_rows(rows.begin() + 1, rows.end());
  for (std::uint32_t k = 0; k < n; ++k) {
    const std::int64_t pivot = a[rows[0] * d + cols[k]];
    if (pivot == 0) continue;
    std::vector<std::uint32_t> sub_cols;
    sub_cols.reserve(n - 1);
    for (std::uint32_t j = 0; j < n; ++j)
      if (j != k) sub_cols.push_back(cols[j]);
    std::int64_t minor = det_rec(a, sub_rows, sub_cols, d);
    std::int64_t term = checked_mul(pivot, minor);
    acc = checked_add(acc, (k % 2 == 0) ? term : -term);
  }
  return acc;
}

}  // namespace

IntegerMatrixElement::IntegerMatrixElement(std::uint32_t dim, std::vector<std::int64_t> entries)
    : d(dim), a(std::move(entries)) {
  require(d >= 1 && a.size() == std::size_t(d) * d, ErrorKind::Validation,
          "integer matrix: entry count != d*d");
  const std::int64_t dt = det();
  require(dt == 1 || dt == -1, ErrorKind::Validation,
          "integer matrix: determinant is not +1 or -1");
}

IntegerMatrixElement IntegerMatrixElement::identity(std::uint32_t dim) {
  std::vector<std::int64_t> e(std::size_t(dim) * dim, 0);
  for (std::uint32_t i = 0; i < dim; ++i) e[i * dim + i] = 1;
  return IntegerMatrixElement(dim, std::move(e));
}

IntegerMatrixElement IntegerMatrixElement::elementary(std::uint32_t dim, std::uint32_t i,
                                                      std::uint32_t j, std::int64_t c) {
  require(i != j && i < dim && j < dim, ErrorKind::Validation, "elementary: bad indices");
  IntegerMatrixElement m = identity(dim);
  m.a[i * dim + j] = c;
  return m;
}

IntegerMatrixElement IntegerMatrixElement::mul(const IntegerMatrixElement& o) const {
  require(d == o.d, ErrorKind::Validation, "integer matrix dimension mismatch");
  IntegerMatrixElement r;
  r.d = d;
  r.a.assign(std::size_t(d) * d, 0);
  for (std::uint32_t i = 0; i < d; ++i)
    for (std::uint32_t k = 0; k < d; ++k) {
      const std::int64_t v = a[i * d + k];
      if (v == 0) continue;
      for (std::uint32_t j = 0; j < d; ++j)
        r.a[i * d + j] = checked_add(r.a[i * d + j], checked_mul(v, o.a[k * d + j]));
    }
  return r;
}

IntegerMatrixElement IntegerMatrixElement::transpose() const {
  IntegerMatrixElement r;
  r.d = d;
  r.a.assign(std::size_t(d) * d, 0);
  for (std::uint32_t i = 0; i < d; ++i)
    for (std::uint32_t j = 0; j < d; ++j) r.a[j * d + i] = a[i * d + j];
  return r;
}

std::int64_t IntegerMatrixElement::det() const {
  std::vector<std::uint32_t> idx(d);
  for (std::uint32_t i = 0; i < d; ++i) idx[i] = i;
  return det_rec(a, idx, idx, d);
}

IntegerMatrixElement IntegerMatrixElement::inverse() const {
  const std::int64_t dt = det();  // +-1 by the construction invariant
  std::vector<std::int64_t> e(std::size_t(d) * d, 0);
  if (d == 1) {
    e[0] = dt;
  } else {
    for (std::uint32_t i = 0; i < d; ++i)
      for (std::uint32_t j = 0; j < d; ++j) {
        std::vector<std::uint32_t> rows, cols;
        for (std::uint32_t r = 0; r < d; ++r)
          if (r != j) rows.push_back(r);
        for (std::uint32_t c = 0; c < d; ++c)
          if (c != i) cols.push_back(c);
        const std::int64_t minor = det_rec(a, rows, cols, d);
        e[i * d + j] = (((i + j) % 2 == 0) ? minor : -minor) * dt;
      }
  }
  return IntegerMatrixElement(d, std::move(e));
}

std::string IntegerMatrixElement::key() const {
  std::ostringstream os;
  os << d << ":";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) os << ",";
    os << a[i];
  }
  return os.str();
}

std::string IntegerMatrixElement::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::uint32_t i = 0; i < d; ++i) {
    if (i) os << "; ";
    for (std::uint32_t j = 0; j < d; ++j) {
      if (j) os << " ";
      os << a[i * d + j];
    }
  }
  os << "]";
  return os.str();
}

std::vector<IntegerMatrixElement> sl_elementary_generators(std::uint32_t d) {
  require(d >= 2, ErrorKind::Validation, "SL_d(Z) needs d >= 2");
  std::vector<IntegerMatrixElement> gens;
  for (std::uint32_t i = 0; i < d; ++i)
    for (std::uint32_t j = 0; j < d; ++j) {
      if (i == j) continue;
      gens.push_back(IntegerMatrixElement::elementary(d, i, j, 1));
      gens.push_back(IntegerMatrixElement::elementary(d, i, j, -1));
    }
  return gens;
}

std::vector<IntegerMatrixElement> word_ball(const std::vector<IntegerMatrixElement>& gens,
                                            std::uint32_t radius) {
  require(!gens.empty(), ErrorKind::Validation, "word_ball: empty generator list");
  std::vector<IntegerMatrixElement> out;
  std::unordered_set<std::string> seen;
  std::queue<std::pair<IntegerMatrixElement, std::uint32_t>> todo;
  IntegerMatrixElement id = IntegerMatrixElement::identity(gens[0].d);
  seen.insert(id.key());
  out.push_back(id);
  todo.emplace(id, 0);
  while (!todo.empty()) {
    auto [x, len] = todo.front();
    todo.pop();
    if (len == radius) continue;
    for (const auto& s : gens) {
      IntegerMatrixElement y = x.mul(s);
      if (seen.insert(y.key()).second) {
        out.push_back(y);
        todo.emplace(y, len + 1);
      }
    }
  }
  return out;
}

}  // namespace charlab
