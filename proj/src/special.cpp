#include "intertwine/special.hpp"

#include <stdexcept>

namespace intertwine {

const Rational& ValueVector::at_state(long state) const {
  if (state < offset || state > last_state()) throw std::out_of_range("ValueVector: state out of range");
  return values[static_cast<std::size_t>(state - offset)];
}

bool ValueVector::is_zero() const {
  for (const auto& v : values) {
    if (sgn(v) != 0) return false;
  }
  return true;
}

ValueVector ones(long offset, std::size_t length) {
  return {offset, std::vector<Rational>(length, Rational(1))};
}

std::vector<Poly> hermite_table(unsigned max_degree) {
  std::vector<Poly> h;
  h.reserve(max_degree + 1);
  h.push_back(Poly::constant(1));
  if (max_degree >= 1) h.push_back(Poly::x());
  for (unsigned n = 1; n < max_degree; ++n) {
    h.push_back(Poly::x() * h[n] - h[n - 1] * Rational(n));
  }
  return h;
}

Poly hermite(unsigned n) { return hermite_table(n).back(); }

ValueVector krawtchouk(long N, long n) {
  if (N < 0 || n < 0 || n > N) throw std::invalid_argument("krawtchouk: need 0 <= n <= N");
  const Poly up{Rational(1), Rational(1, 2)};
  const Poly down{Rational(1), Rational(-1, 2)};
  // Powers in z of the two generating-function factors.
  std::vector<Poly> up_pow{Poly::constant(1)};
  std::vector<Poly> down_pow{Poly::constant(1)};
  for (long k = 1; k <= N; ++k) {
    up_pow.push_back(up_pow.back() * up);
    down_pow.push_back(down_pow.back() * down);
  }
  const Rational n_fact(factorial(static_cast<unsigned long>(n)));
  ValueVector out{0, {}};
  out.values.reserve(static_cast<std::size_t>(N) + 1);
  for (long x = 0; x <= N; ++x) {
    Poly g = up_pow[static_cast<std::size_t>(x)] * down_pow[static_cast<std::size_t>(N - x)];
    out.values.push_back(g.coeff(static_cast<int>(n)) * n_fact);
  }
  return out;
}

ValueVector phi(long n, long length) {
  if (n < 0 || length < 1) throw std::invalid_argument("phi: need n >= 0 and length >= 1");
  ValueVector out{0, {}};
  for (long y = 0; y < length; ++y) out.values.emplace_back(binomial(y, n));
  return out;
}

ValueVector phi_tilde(long n, long N) {
  if (n < 1) throw std::invalid_argument("phi_tilde: n must be >= 1 (use the all-ones vector for n = 0)");
  if (N < 0) throw std::invalid_argument("phi_tilde: N must be >= 0");
  ValueVector out{-N, {}};
  for (long y = -N; y <= 0; ++y) {
    Rational v(binomial(n - 1, -y));
    if ((-y) % 2 != 0) v = -v;
    out.values.push_back(v);
  }
  return out;
}

Integer gaussian_moment(unsigned k) {
  if (k % 2 != 0) return 0;
  Integer out = 1;
  for (unsigned j = 1; j < k; j += 2) out *= j;
  return out;
}

Rational gaussian_expectation(const Poly& p) {
  Rational acc = 0;
  for (int k = 0; k <= p.degree(); k += 2) acc += p.coeff(k) * Rational(gaussian_moment(static_cast<unsigned>(k)));
  return acc;
}

Poly from_hermite(std::span<const Rational> c) {
  if (c.empty()) return {};
  const auto h = hermite_table(static_cast<unsigned>(c.size() - 1));
  Poly out;
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (sgn(c[n]) != 0) out += h[n] * c[n];
  }
  return out;
}

std::vector<Rational> to_hermite(const Poly& p) {
  if (p.is_zero()) return {};
  const auto h = hermite_table(static_cast<unsigned>(p.degree()));
  std::vector<Rational> c(static_cast<std::size_t>(p.degree()) + 1, Rational(0));
  Poly rest = p;
  // h_n is monic, so peel off the top degree each round.
  for (int n = p.degree(); n >= 0; --n) {
    Rational top = rest.coeff(n);
    if (sgn(top) == 0) continue;
    c[static_cast<std::size_t>(n)] = top;
    rest -= h[static_cast<std::size_t>(n)] * top;
  }
  return c;
}

}  // namespace intertwine
