#pragma once

#include "intertwine/matrix.hpp"
#include "intertwine/poly.hpp"
#include "intertwine/special.hpp"

namespace intertwine {

/// Exact rate matrix on the states offset, ..., offset + size() - 1.
/// Construction enforces zero row sums and nonnegative off-diagonal rates.
class FiniteGenerator {
 public:
  FiniteGenerator(long offset, RatMatrix rates);

  long offset() const { return offset_; }
  std::size_t size() const { return rates_.rows(); }
  long last_state() const { return offset_ + static_cast<long>(size()) - 1; }
  const RatMatrix& rates() const { return rates_; }
  const Rational& rate(long from, long to) const;
  /// max_x |L(x, x)|, the smallest valid uniformization constant.
  Rational max_exit_rate() const;

  ValueVector apply(const ValueVector& f) const;

 private:
  long offset_;
  RatMatrix rates_;
};

/// L_N on [0, N]: x -> x+1 at rate (N-x)/2, x -> x-1 at rate x/2.
FiniteGenerator ehrenfest(long N);
/// D_N on [0, N]: pure death x -> x-1 at rate x.
FiniteGenerator yule(long N);
/// D~_N on [-N, 0]: y -> y-1 at rate 1-y, with -N absorbing.
FiniteGenerator reverse_yule(long N);

/// The Ornstein-Uhlenbeck operator f -> f'' - x f'.
Poly ou_apply(const Poly& f);

/// gen*v + lambda*v; the zero vector certifies v as an eigenvector for -lambda.
ValueVector check_eigen(const FiniteGenerator& gen, const ValueVector& v, const Rational& lambda);

/// Binomial(N, 1/2) law on [0, N].
struct BinomialMeasure {
  long N = 0;
  ValueVector weights;
};

BinomialMeasure binomial_measure(long N);

}  // namespace intertwine
