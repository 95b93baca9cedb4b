#include "intertwine/generators.hpp"

#include <stdexcept>

namespace intertwine {

FiniteGenerator::FiniteGenerator(long offset, RatMatrix rates) : offset_(offset), rates_(std::move(rates)) {
  if (rates_.rows() == 0 || rates_.rows() != rates_.cols()) {
    throw std::invalid_argument("FiniteGenerator: rate matrix must be square and nonempty");
  }
  for (std::size_t i = 0; i < rates_.rows(); ++i) {
    Rational row_sum = 0;
    for (std::size_t j = 0; j < rates_.cols(); ++j) {
      if (i != j && sgn(rates_(i, j)) < 0) throw std::invalid_argument("FiniteGenerator: negative off-diagonal rate");
      row_sum += rates_(i, j);
    }
    if (sgn(row_sum) != 0) throw std::invalid_argument("FiniteGenerator: row does not sum to zero");
  }
}

const Rational& FiniteGenerator::rate(long from, long to) const {
  if (from < offset_ || from > last_state() || to < offset_ || to > last_state()) {
    throw std::out_of_range("FiniteGenerator::rate: state out of range");
  }
  return rates_(static_cast<std::size_t>(from - offset_), static_cast<std::size_t>(to - offset_));
}

Rational FiniteGenerator::max_exit_rate() const {
  Rational worst = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    Rational r = abs(rates_(i, i));
    if (r > worst) worst = r;
  }
  return worst;
}

ValueVector FiniteGenerator::apply(const ValueVector& f) const {
  if (f.offset != offset_ || f.size() != size()) throw std::invalid_argument("FiniteGenerator::apply: dimension mismatch");
  return {offset_, rates_.apply(f.values)};
}

FiniteGenerator ehrenfest(long N) {
  if (N < 0) throw std::invalid_argument("ehrenfest: N must be >= 0");
  const auto n = static_cast<std::size_t>(N) + 1;
  RatMatrix m(n, n);
  for (long x = 0; x <= N; ++x) {
    const auto i = static_cast<std::size_t>(x);
    if (x < N) m(i, i + 1) = Rational(N - x, 2);
    if (x > 0) m(i, i - 1) = Rational(x, 2);
    m(i, i) = Rational(-N, 2);
  }
  for (auto i = 0u; i < n; ++i) {
    for (auto j = 0u; j < n; ++j) m(i, j).canonicalize();
  }
  return {0, std::move(m)};
}

FiniteGenerator yule(long N) {
  if (N < 0) throw std::invalid_argument("yule: N must be >= 0");
  const auto n = static_cast<std::size_t>(N) + 1;
  RatMatrix m(n, n);
  for (long x = 1; x <= N; ++x) {
    const auto i = static_cast<std::size_t>(x);
    m(i, i - 1) = x;
    m(i, i) = -x;
  }
  return {0, std::move(m)};
}

FiniteGenerator reverse_yule(long N) {
  if (N < 0) throw std::invalid_argument("reverse_yule: N must be >= 0");
  const auto n = static_cast<std::size_t>(N) + 1;
  RatMatrix m(n, n);
  for (long y = -N + 1; y <= 0; ++y) {
    const auto i = static_cast<std::size_t>(y + N);
    m(i, i - 1) = 1 - y;
    m(i, i) = y - 1;
  }
  return {-N, std::move(m)};
}

Poly ou_apply(const Poly& f) { return f.derivative().derivative() - Poly::x() * f.derivative(); }

ValueVector check_eigen(const FiniteGenerator& gen, const ValueVector& v, const Rational& lambda) {
  ValueVector out = gen.apply(v);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += lambda * v.values[i];
  return out;
}

BinomialMeasure binomial_measure(long N) {
  if (N < 0) throw std::invalid_argument("binomial_measure: N must be >= 0");
  BinomialMeasure m{N, {0, {}}};
  const Rational scale = pow2(-N);
  for (long x = 0; x <= N; ++x) m.weights.values.push_back(Rational(binomial(N, x)) * scale);
  return m;
}

}  // namespace intertwine
