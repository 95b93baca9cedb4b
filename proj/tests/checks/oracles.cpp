#include "oracles.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "intertwine/feasibility.hpp"
#include "intertwine/special.hpp"

namespace intertwine::checks {

Poly hermite_series(unsigned n) {
  // exp(zx) exp(-z^2/2): the z^n coefficient collects x^k/k! (-1/2)^j/j! with k + 2j = n.
  Poly p;
  for (unsigned j = 0; 2 * j <= n; ++j) {
    const unsigned k = n - 2 * j;
    Rational c = Rational(factorial(n)) / Rational(factorial(k)) / Rational(factorial(j));
    if (j % 2 == 1) c = -c;
    c /= Rational(Integer(1) << j);
    p += Poly::monomial(static_cast<int>(k), c);
  }
  return p;
}

Rational krawtchouk_direct(long N, long n, long x) {
  Rational sum = 0;
  for (long j = 0; j <= n; ++j) {
    Rational term = Rational(binomial(x, j) * binomial(N - x, n - j)) / Rational(Integer(1) << n);
    if ((n - j) % 2 == 1) term = -term;
    sum += term;
  }
  return sum * Rational(factorial(static_cast<unsigned long>(n)));
}

std::vector<double> evolve_by_expm(const FiniteGenerator& Q, std::span<const Rational> m0, double t) {
  using Mat = std::vector<std::vector<long double>>;
  const std::size_t n = Q.size();
  auto multiply = [n](const Mat& a, const Mat& b) {
    Mat c(n, std::vector<long double>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
  };
  long double norm = 0;
  Mat A(n, std::vector<long double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    long double row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      A[i][j] = static_cast<long double>(to_double(Q.rates()(i, j))) * t;
      row += std::fabs(A[i][j]);
    }
    norm = std::max(norm, row);
  }
  int squarings = 0;
  while (norm > 0.25L) {
    norm /= 2;
    ++squarings;
  }
  const long double scale = std::ldexp(1.0L, -squarings);
  for (auto& row : A)
    for (auto& v : row) v *= scale;
  Mat E(n, std::vector<long double>(n, 0.0L));
  Mat term(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) E[i][i] = term[i][i] = 1.0L;
  for (int k = 1; k <= 24; ++k) {
    term = multiply(term, A);
    for (auto& row : term)
      for (auto& v : row) v /= k;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) E[i][j] += term[i][j];
  }
  for (int s = 0; s < squarings; ++s) E = multiply(E, E);
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    long double v = 0;
    for (std::size_t i = 0; i < n; ++i) v += static_cast<long double>(to_double(m0[i])) * E[i][j];
    out[j] = static_cast<double>(v);
  }
  return out;
}

double tv_quadrature(std::span<const Rational> c) {
  const Poly p = from_hermite(c);
  std::vector<double> coeffs;
  for (const auto& v : p.coeffs()) coeffs.push_back(to_double(v));
  auto q = [&](double x) {
    double v = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;) v = v * x + coeffs[k];
    return v - 1.0;
  };
  const double L = 40.0;
  const double h = 1e-3;
  std::vector<double> cuts{-L};
  double prev_x = -L;
  double prev_v = q(-L);
  for (double x = -L + h; x <= L; x += h) {
    const double v = q(x);
    if ((prev_v < 0) != (v < 0)) {
      double lo = prev_x, hi = x;
      for (int i = 0; i < 200; ++i) {
        const double mid = (lo + hi) / 2;
        if ((q(mid) < 0) == (prev_v < 0)) lo = mid; else hi = mid;
      }
      cuts.push_back((lo + hi) / 2);
    }
    prev_x = x;
    prev_v = v;
  }
  cuts.push_back(L);
  auto integrand = [&](double x) { return std::fabs(q(x)) * std::exp(-x * x / 2) / std::sqrt(2 * std::numbers::pi); };
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, cuts[i], cuts[i + 1], 20, 1e-15);
  }
  return total / 2;
}

namespace {

using Rule = boost::math::quadrature::gauss<double, 30>;

// Density of E(1) + ... + E(k).
double hypo_density(long k, double t) {
  if (k == 1) return std::exp(-t);
  if (t <= 0) return 0.0;
  const double kk = static_cast<double>(k);
  return Rule::integrate([&](double s) { return hypo_density(k - 1, s) * kk * std::exp(-kk * (t - s)); }, 0.0, t);
}

}  // namespace

double hypo_survival_convolution(long N, double t) {
  if (N == 0) return 0.0;
  double S = std::exp(-t);
  for (long k = 2; k <= N; ++k) {
    const double kk = static_cast<double>(k);
    if (t > 0) S += Rule::integrate([&](double s) { return hypo_density(k - 1, s) * std::exp(-kk * (t - s)); }, 0.0, t);
  }
  return S;
}

double max_a2_bisection(long N, int iterations) {
  auto member = [N](const Rational& a2) {
    std::vector<Rational> a(static_cast<std::size_t>(N) + 1, Rational(0));
    a[0] = 1;
    a[2] = a2;
    return check_membership_A(N, a).member;
  };
  Rational lo = 0;
  Rational hi = 4;
  while (member(hi)) hi *= 2;
  for (int i = 0; i < iterations; ++i) {
    Rational mid = (lo + hi) / 2;
    if (member(mid)) lo = mid; else hi = mid;
  }
  return to_double((lo + hi) / 2);
}

}  // namespace intertwine::checks
