#pragma once

#include <span>
#include <vector>

#include "intertwine/poly.hpp"
#include "intertwine/rational.hpp"

namespace intertwine {

/// Function on the integer states offset, offset+1, ..., offset+size()-1.
struct ValueVector {
  long offset = 0;
  std::vector<Rational> values;

  std::size_t size() const { return values.size(); }
  long last_state() const { return offset + static_cast<long>(values.size()) - 1; }
  const Rational& at_state(long state) const;
  bool is_zero() const;
  friend bool operator==(const ValueVector&, const ValueVector&) = default;
};

ValueVector ones(long offset, std::size_t length);

/// Monic Hermite polynomial h_n (probabilists'), built by h_{n+1} = x h_n - n h_{n-1}.
Poly hermite(unsigned n);

/// h_0, ..., h_max_degree in one pass.
std::vector<Poly> hermite_table(unsigned max_degree);

/// K_{N,n} on [0, N]: n! times the z^n coefficient of (1+z/2)^x (1-z/2)^(N-x).
ValueVector krawtchouk(long N, long n);

/// y -> binom(y, n) on [0, length-1].
ValueVector phi(long n, long length);

/// y -> (-1)^y binom(n-1, -y) on [-N, 0]; n >= 1.
ValueVector phi_tilde(long n, long N);

/// E[x^k] under the standard Gaussian: 0 for odd k, (k-1)!! for even k.
Integer gaussian_moment(unsigned k);

/// Exact integral of p against the standard Gaussian.
Rational gaussian_expectation(const Poly& p);

/// Sum_n c_n h_n in the monomial basis.
Poly from_hermite(std::span<const Rational> c);

/// Coefficients c with p = Sum_n c_n h_n (exact, triangular change of basis).
std::vector<Rational> to_hermite(const Poly& p);

}  // namespace intertwine
