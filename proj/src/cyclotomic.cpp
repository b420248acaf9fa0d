#include "charlab/cyclotomic.hpp"

#include "charlab/error.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace charlab {

std::vector<std::pair<std::uint32_t, std::uint32_t>> factorize(std::uint32_t n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t p = 2; static_cast<std::uint64_t>(p) * p <= n; ++p) {
    if (n % p == 0) {
      std::uint32_t q = 1;
      while (n % p == 0) {
        n /= p;
        q *= p;
      }
      out.emplace_back(p, q);
    }
  }
  if (n > 1) out.emplace_back(n, n);
  return out;
}

std::uint32_t euler_phi(std::uint32_t n) {
  std::uint32_t phi = 1;
  for (auto [p, q] : factorize(n)) phi *= q - q / p;
  return phi;
}

Cyclotomic::Cyclotomic(std::uint32_t order, std::vector<Rational> coeff)
    : order_(order), coeff_(std::move(coeff)) {
  require(order_ >= 1, ErrorKind::Validation, "cyclotomic order must be >= 1");
  require(coeff_.size() == order_, ErrorKind::Validation, "cyclotomic coefficient count != order");
}

Cyclotomic Cyclotomic::root_power(std::uint32_t order, std::uint64_t power, Rational coeff) {
  std::vector<Rational> c(order, Rational(0));
  c[power % order] = std::move(coeff);
  return Cyclotomic(order, std::move(c));
}

Cyclotomic Cyclotomic::lifted(std::uint32_t N) const {
  require(N % order_ == 0, ErrorKind::Internal, "cyclotomic lift to non-multiple order");
  if (N == order_) return *this;
  std::vector<Rational> c(N, Rational(0));
  const std::uint32_t stride = N / order_;
  for (std::uint32_t j = 0; j < order_; ++j)
    if (coeff_[j] != 0) c[static_cast<std::size_t>(j) * stride] = coeff_[j];
  return Cyclotomic(N, std::move(c));
}

namespace {
std::uint32_t lcm_u32(std::uint32_t a, std::uint32_t b) {
  return static_cast<std::uint32_t>(std::lcm<std::uint64_t>(a, b));
}
}  // namespace

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
  const std::uint32_t N = lcm_u32(order_, o.order_);
  Cyclotomic a = lifted(N), b = o.lifted(N);
  for (std::uint32_t j = 0; j < N; ++j) a.coeff_[j] += b.coeff_[j];
  return a;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const {
  const std::uint32_t N = lcm_u32(order_, o.order_);
  Cyclotomic a = lifted(N), b = o.lifted(N);
  for (std::uint32_t j = 0; j < N; ++j) a.coeff_[j] -= b.coeff_[j];
  return a;
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic a = *this;
  for (auto& c : a.coeff_) c = -c;
  return a;
}

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
  const std::uint32_t N = lcm_u32(order_, o.order_);
  Cyclotomic a = lifted(N), b = o.lifted(N);
  std::vector<Rational> c(N, Rational(0));
  for (std::uint32_t i = 0; i < N; ++i) {
    if (a.coeff_[i] == 0) continue;
    for (std::uint32_t j = 0; j < N; ++j) {
      if (b.coeff_[j] == 0) continue;
      std::uint32_t k = i + j;
      if (k >= N) k -= N;
      c[k] += a.coeff_[i] * b.coeff_[j];
    }
  }
  return Cyclotomic(N, std::move(c));
}

Cyclotomic Cyclotomic::scaled(const Rational& s) const {
  Cyclotomic a = *this;
  for (auto& c : a.coeff_) c *= s;
  return a;
}

Cyclotomic Cyclotomic::conj() const {
  std::vector<Rational> c(order_, Rational(0));
  for (std::uint32_t j = 0; j < order_; ++j)
    if (coeff_[j] != 0) c[(order_ - j) % order_] = coeff_[j];
  return Cyclotomic(order_, std::move(c));
}

namespace {

// Shared canonicalization core: express the power-basis vector in the tensor
// basis prod_i zeta_{q_i}^{t_i}, t_i < phi(q_i), via CRT splitting and the
// single-pass per-axis relation x^t = -sum_{s<p-1} x^{(t-phi) + s q/p}.
template <class T>
std::vector<T> canonical_impl(std::uint32_t order, const std::vector<T>& coeff) {
  if (order == 1) return coeff;
  const auto factors = factorize(order);
  const std::size_t r = factors.size();
  std::vector<std::uint32_t> q(r), p(r), m(r);
  for (std::size_t i = 0; i < r; ++i) {
    p[i] = factors[i].first;
    q[i] = factors[i].second;
    // m_i = (n/q_i)^{-1} mod q_i, so zeta_n^j = prod_i zeta_{q_i}^{m_i (j mod q_i)}.
    std::uint64_t rest = order / q[i], inv = 1, base = rest % q[i];
    // Fermat-Euler inverse via repeated squaring mod q_i (q_i is a prime power;
    // rest is coprime to it).
    std::uint64_t e = euler_phi(q[i]) - 1, acc = 1, b = base;
    while (e) {
      if (e & 1) acc = acc * b % q[i];
      b = b * b % q[i];
      e >>= 1;
    }
    inv = acc;
    m[i] = static_cast<std::uint32_t>(inv);
  }
  std::vector<std::uint32_t> stride(r, 1);
  for (std::size_t i = r; i-- > 1;) stride[i - 1] = stride[i] * q[i];
  const std::size_t total = static_cast<std::size_t>(stride[0]) * q[0];
  std::vector<T> tensor(total, T(0));
  for (std::uint32_t j = 0; j < order; ++j) {
    if (coeff[j] == 0) continue;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < r; ++i) {
      std::uint32_t t = static_cast<std::uint32_t>((static_cast<std::uint64_t>(m[i]) * (j % q[i])) % q[i]);
      idx += static_cast<std::size_t>(t) * stride[i];
    }
    tensor[idx] += coeff[j];
  }
  // Reduce each axis to exponents < phi(q_i) = (p_i - 1) * q_i / p_i using
  // x^t = -sum_{s<p-1} x^{(t - phi) + s q/p} for t >= phi.
  for (std::size_t axis = 0; axis < r; ++axis) {
    const std::uint32_t qi = q[axis], pi = p[axis];
    const std::uint32_t step = qi / pi;
    const std::uint32_t phi = qi - step;
    const std::size_t st = stride[axis];
    const std::size_t outer = total / (static_cast<std::size_t>(qi) * st);
    for (std::size_t blk = 0; blk < outer; ++blk) {
      for (std::size_t inner = 0; inner < st; ++inner) {
        const std::size_t base = blk * qi * st + inner;
        for (std::uint32_t t = phi; t < qi; ++t) {
          T& c = tensor[base + static_cast<std::size_t>(t) * st];
          if (c == 0) continue;
          const std::uint32_t rlow = t - phi;
          for (std::uint32_t s = 0; s + 1 < pi; ++s) {
            tensor[base + static_cast<std::size_t>(rlow + s * step) * st] -= c;
          }
          c = 0;
        }
      }
    }
  }
  // Compact to dims phi(q_i).
  std::vector<std::uint32_t> dims(r);
  for (std::size_t i = 0; i < r; ++i) dims[i] = q[i] - q[i] / p[i];
  std::size_t out_total = 1;
  for (auto d : dims) out_total *= d;
  std::vector<T> out(out_total, T(0));
  std::vector<std::uint32_t> t(r, 0);
  for (std::size_t oi = 0; oi < out_total; ++oi) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < r; ++i) idx += static_cast<std::size_t>(t[i]) * stride[i];
    out[oi] = tensor[idx];
    for (std::size_t i = r; i-- > 0;) {
      if (++t[i] < dims[i]) break;
      t[i] = 0;
    }
  }
  return out;
}

}  // namespace

std::vector<Rational> Cyclotomic::canonical() const { return canonical_impl<Rational>(order_, coeff_); }

std::vector<std::int64_t> canonical_int(std::uint32_t order, const std::vector<std::int64_t>& coeff) {
  require(order >= 1 && coeff.size() == order, ErrorKind::Validation,
          "canonical_int coefficient count != order");
  return canonical_impl<std::int64_t>(order, coeff);
}

bool Cyclotomic::is_zero() const {
  for (const auto& c : coeff_)
    if (c != 0) goto nontrivial;
  return true;
nontrivial:
  auto can = canonical();
  for (const auto& c : can)
    if (c != 0) return false;
  return true;
}

bool Cyclotomic::operator==(const Cyclotomic& o) const {
  const std::uint32_t N = lcm_u32(order_, o.order_);
  return (lifted(N) - o.lifted(N)).is_zero();
}

std::complex<double> Cyclotomic::to_complex() const {
  std::complex<double> acc(0.0, 0.0);
  const double tau = 6.283185307179586476925286766559;
  for (std::uint32_t j = 0; j < order_; ++j) {
    if (coeff_[j] == 0) continue;
    const double ang = tau * static_cast<double>(j) / static_cast<double>(order_);
    acc += to_double(coeff_[j]) * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return acc;
}

std::optional<Rational> Cyclotomic::as_rational() const {
  if (order_ == 1) return coeff_[0];
  auto can = canonical();
  for (std::size_t i = 1; i < can.size(); ++i)
    if (can[i] != 0) return std::nullopt;
  return can[0];
}

std::string Cyclotomic::to_string() const {
  std::ostringstream os;
  os << "[" << order_ << ";";
  for (std::uint32_t j = 0; j < order_; ++j) {
    if (j) os << ",";
    os << rational_string(coeff_[j]);
  }
  os << "]";
  return os.str();
}

}  // namespace charlab
