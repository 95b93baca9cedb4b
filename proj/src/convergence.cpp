#include "intertwine/convergence.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "intertwine/coupling.hpp"
#include "intertwine/generators.hpp"

namespace intertwine {

HermiteMeasure ou_evolve(const HermiteMeasure& mu, double t) {
  if (!(t >= 0)) throw std::invalid_argument("ou_evolve: negative time");
  std::vector<Rational> c = mu.c;
  for (std::size_t n = 1; n < c.size(); ++n) {
    if (sgn(c[n]) != 0) c[n] *= from_double(std::exp(-static_cast<double>(n) * t));
  }
  return HermiteMeasure(std::move(c));
}

namespace {

void require_nonnegative(const Poly& p, const char* who) {
  if (std::holds_alternative<NegativeWitness>(nonneg_on_reals(p))) {
    throw std::domain_error(std::string(who) + ": density takes negative values");
  }
}

}  // namespace

double separation(const HermiteMeasure& mu) {
  const Poly p = mu.density();
  require_nonnegative(p, "separation");
  return 1.0 - to_double(global_min(p, pow2(-40)).mid());
}

double tv_distance(const HermiteMeasure& mu) {
  const Poly p = mu.density();
  require_nonnegative(p, "tv_distance");
  const Poly q = p - Poly::constant(1);
  if (q.is_zero()) return 0.0;

  std::vector<double> cuts;
  if (q.degree() > 0) {
    const Poly q_free = square_free_part(q);
    for (RootInterval iv : isolate_real_roots(q)) {
      if (!iv.exact()) iv = refine_root(q_free, iv, pow2(-60));
      cuts.push_back(to_double(iv.exact() ? iv.lo : (iv.lo + iv.hi) / 2));
    }
  }

  std::vector<double> c;
  for (const auto& v : mu.c) c.push_back(to_double(v));
  // F(x) = -phi(x) sum_{n>=1} c_n h_{n-1}(x) is an antiderivative of (p - 1) phi.
  auto antiderivative = [&](double x) {
    double h_prev = 0;
    double h = 1;  // h_0
    double sum = 0;
    for (std::size_t n = 1; n < c.size(); ++n) {
      sum += c[n] * h;  // h holds h_{n-1}
      const double h_next = x * h - static_cast<double>(n - 1) * h_prev;
      h_prev = h;
      h = h_next;
    }
    return -std::exp(-x * x / 2) / std::sqrt(2 * std::numbers::pi) * sum;
  };

  double total = 0;
  double previous = 0;  // F(-inf)
  for (double r : cuts) {
    const double f = antiderivative(r);
    total += std::abs(f - previous);
    previous = f;
  }
  total += std::abs(previous);  // F(+inf) = 0
  return total / 2;
}

namespace {

struct KrawtchoukGram {
  std::vector<ValueVector> K;
  std::vector<Rational> norms;  // sum_x pi K_n^2
  ValueVector pi;
};

const KrawtchoukGram& gram(long N) {
  static std::mutex mutex;
  static std::map<long, KrawtchoukGram> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  KrawtchoukGram g;
  g.pi = binomial_measure(N).weights;
  for (long n = 0; n <= N; ++n) {
    ValueVector k = krawtchouk(N, n);
    Rational norm = 0;
    for (std::size_t x = 0; x < k.size(); ++x) norm += g.pi.values[x] * k.values[x] * k.values[x];
    g.K.push_back(std::move(k));
    g.norms.push_back(norm);
  }
  return cache.emplace(N, std::move(g)).first->second;
}

void check_law(std::span<const Rational> m, std::size_t size, const char* who) {
  if (m.size() != size) throw std::invalid_argument(std::string(who) + ": law has the wrong length");
  Rational total = 0;
  for (const auto& v : m) {
    if (sgn(v) < 0) throw std::invalid_argument(std::string(who) + ": negative mass");
    total += v;
  }
  if (total != 1) throw std::invalid_argument(std::string(who) + ": masses do not sum to 1");
}

}  // namespace

std::vector<double> ehrenfest_evolve(long N, std::span<const Rational> m0, double t) {
  if (N < 0) throw std::invalid_argument("ehrenfest_evolve: N < 0");
  if (!(t >= 0)) throw std::invalid_argument("ehrenfest_evolve: negative time");
  const auto size = static_cast<std::size_t>(N) + 1;
  check_law(m0, size, "ehrenfest_evolve");
  const KrawtchoukGram& g = gram(N);
  std::vector<double> p(size, 0.0);
  for (std::size_t n = 0; n < size; ++n) {
    Rational coeff = 0;
    for (std::size_t x = 0; x < size; ++x) coeff += m0[x] * g.K[n].values[x];
    if (sgn(coeff) == 0) continue;
    coeff /= g.norms[n];
    const double decay = std::exp(-static_cast<double>(n) * t);
    for (std::size_t x = 0; x < size; ++x) {
      p[x] += to_double(coeff * g.K[n].values[x] * g.pi.values[x]) * decay;
    }
  }
  return p;
}

double ehrenfest_separation(long N, std::span<const double> p) {
  const ValueVector& pi = gram(N).pi;
  if (p.size() != pi.size()) throw std::invalid_argument("ehrenfest_separation: wrong length");
  double s = 0;
  for (std::size_t x = 0; x < p.size(); ++x) s = std::max(s, 1.0 - p[x] / to_double(pi.values[x]));
  return s;
}

double ehrenfest_tv(long N, std::span<const double> p) {
  const ValueVector& pi = gram(N).pi;
  if (p.size() != pi.size()) throw std::invalid_argument("ehrenfest_tv: wrong length");
  double s = 0;
  for (std::size_t x = 0; x < p.size(); ++x) s += std::abs(p[x] - to_double(pi.values[x]));
  return s / 2;
}

std::optional<std::size_t> SeparationCurve::first_violation(double slack) const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.tv < -slack || r.tv > r.separation + slack || r.separation > r.bound + slack || r.bound > 1 + slack) {
      return i;
    }
  }
  return std::nullopt;
}

namespace {

double mixture_bound(std::span<const Rational> m0, long y_offset, double t) {
  double b = 0;
  for (std::size_t y = 0; y < m0.size(); ++y) {
    if (sgn(m0[y]) != 0) b += to_double(m0[y]) * hypo_survival(y_offset + static_cast<long>(y), t);
  }
  return b;
}

}  // namespace

SeparationCurve bound_curve(std::span<const Rational> m0, const HermiteDensityKernel& link,
                            std::span<const double> tgrid) {
  if (link.offset() != 0) throw std::invalid_argument("bound_curve: link rows must be indexed from 0");
  check_law(m0, link.size(), "bound_curve");
  const HermiteMeasure mu0 = pushforward(m0, link);
  SeparationCurve curve;
  for (double t : tgrid) {
    const HermiteMeasure mu = ou_evolve(mu0, t);
    curve.rows.push_back({t, tv_distance(mu), separation(mu), mixture_bound(m0, 0, t)});
  }
  return curve;
}

SeparationCurve bound_curve(std::span<const Rational> m0, const FiniteKernel& link, std::span<const double> tgrid) {
  if (link.row_offset() != 0 || link.col_offset() != 0) {
    throw std::invalid_argument("bound_curve: link must go from [0,M] to [0,N]");
  }
  check_law(m0, link.rows(), "bound_curve");
  const long N = static_cast<long>(link.cols()) - 1;
  const std::vector<Rational> mu0 = link.pushforward(m0);
  SeparationCurve curve;
  for (double t : tgrid) {
    const std::vector<double> p = ehrenfest_evolve(N, mu0, t);
    curve.rows.push_back({t, ehrenfest_tv(N, p), ehrenfest_separation(N, p), mixture_bound(m0, 0, t)});
  }
  return curve;
}

void write_csv(std::ostream& out, const SeparationCurve& curve) {
  out << "t,tv,separation,bound\n";
  char buf[160];
  for (const auto& r : curve.rows) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", r.t, r.tv, r.separation, r.bound);
    out << buf;
  }
}

}  // namespace intertwine
