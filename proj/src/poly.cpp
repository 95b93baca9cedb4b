#include "intertwine/poly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace intertwine {

Poly::Poly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Rational& c) { return Poly(std::vector<Rational>{c}); }

Poly Poly::monomial(int degree, const Rational& c) {
  if (degree < 0) throw std::invalid_argument("Poly::monomial: negative degree");
  std::vector<Rational> coeffs(static_cast<std::size_t>(degree) + 1, Rational(0));
  coeffs.back() = c;
  return Poly(std::move(coeffs));
}

void Poly::trim() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

Rational Poly::coeff(int k) const {
  if (k < 0 || k > degree()) return 0;
  return coeffs_[static_cast<std::size_t>(k)];
}

const Rational& Poly::leading() const {
  if (coeffs_.empty()) throw std::domain_error("zero polynomial has no leading coefficient");
  return coeffs_.back();
}

Rational Poly::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

double Poly::eval(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

Poly Poly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<long>(k);
  return Poly(std::move(d));
}

Poly Poly::monic() const {
  if (is_zero()) return {};
  Poly out = *this;
  const Rational lc = leading();
  for (auto& c : out.coeffs_) c /= lc;
  return out;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

Poly& Poly::operator*=(const Rational& s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (sgn(a.coeffs_[i]) == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Poly(std::move(out));
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly{}, a};
  std::vector<Rational> rem = a.coeffs();
  std::vector<Rational> quot(static_cast<std::size_t>(a.degree() - b.degree()) + 1, Rational(0));
  const Rational& lc = b.leading();
  const auto& bc = b.coeffs();
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    const auto top = static_cast<std::size_t>(k + b.degree());
    if (sgn(rem[top]) == 0) continue;
    Rational q = rem[top] / lc;
    quot[static_cast<std::size_t>(k)] = q;
    for (std::size_t j = 0; j < bc.size(); ++j) rem[static_cast<std::size_t>(k) + j] -= q * bc[j];
  }
  return {Poly(std::move(quot)), Poly(std::move(rem))};
}

Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).second.monic();
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Poly square_free_part(const Poly& p) {
  if (p.degree() <= 0) return p;
  Poly g = gcd(p, p.derivative());
  return divmod(p, g).first;
}

Rational cauchy_bound(const Poly& p) {
  if (p.degree() <= 0) return 1;
  Rational worst = 0;
  const Rational& lc = p.leading();
  for (int k = 0; k < p.degree(); ++k) {
    Rational r = abs(p.coeff(k) / lc);
    if (r > worst) worst = r;
  }
  return 1 + worst;
}

namespace {

// Smallest power of two strictly above r, keeping isolation endpoints dyadic.
Rational dyadic_above(const Rational& r) {
  Rational b = 1;
  while (b <= r) b *= 2;
  return b;
}

Poly normalized(Poly p) {
  if (p.is_zero()) return p;
  return p * Rational(1 / abs(p.leading()));
}

}  // namespace

std::vector<Poly> sturm_sequence(const Poly& p) {
  std::vector<Poly> chain;
  if (p.is_zero()) return chain;
  chain.push_back(normalized(p));
  Poly d = p.derivative();
  if (d.is_zero()) return chain;
  chain.push_back(normalized(d));
  while (true) {
    Poly r = divmod(chain[chain.size() - 2], chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(normalized(-r));
  }
  return chain;
}

int sign_variations(const std::vector<Poly>& chain, const Rational& x) {
  int changes = 0;
  int last = 0;
  for (const auto& q : chain) {
    int s = q.sign_at(x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int count_roots(const std::vector<Poly>& chain, const Rational& a, const Rational& b) {
  return sign_variations(chain, a) - sign_variations(chain, b);
}

std::vector<RootInterval> isolate_real_roots(const Poly& p) {
  if (p.is_zero()) throw std::domain_error("isolate_real_roots: zero polynomial");
  const Poly q = square_free_part(p);
  std::vector<RootInterval> out;
  if (q.degree() <= 0) return out;
  const auto chain = sturm_sequence(q);
  const Rational bound = dyadic_above(cauchy_bound(q));

  std::function<void(const Rational&, const Rational&, int)> split =
      [&](const Rational& a, const Rational& b, int count) {
        if (count == 0) return;
        if (count == 1) {
          out.push_back({a, b});
          return;
        }
        Rational m = (a + b) / 2;
        while (q.sign_at(m) == 0) m = (m + b) / 2;
        int left = count_roots(chain, a, m);
        split(a, m, left);
        split(m, b, count - left);
      };
  split(-bound, bound, count_roots(chain, -bound, bound));
  return out;
}

RootInterval refine_root(const Poly& square_free, RootInterval iv, const Rational& width) {
  if (iv.exact()) return iv;
  int sign_lo = square_free.sign_at(iv.lo);
  while (iv.hi - iv.lo > width) {
    Rational m = (iv.lo + iv.hi) / 2;
    int s = square_free.sign_at(m);
    if (s == 0) return {m, m};
    if (s == sign_lo) {
      iv.lo = m;
    } else {
      iv.hi = m;
    }
  }
  return iv;
}

Rational simplest_dyadic(const Rational& lo, const Rational& hi) {
  if (lo > hi) throw std::invalid_argument("simplest_dyadic: empty interval");
  if (sgn(lo) <= 0 && sgn(hi) >= 0) return 0;
  if (sgn(hi) < 0) return -simplest_dyadic(-hi, -lo);
  Integer scale = 1;
  while (true) {
    Rational scaled = lo * scale;
    Integer c;
    mpz_cdiv_q(c.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    Rational candidate(c, scale);
    candidate.canonicalize();
    if (candidate <= hi) return candidate;
    scale *= 2;
  }
}

NonnegDecision nonneg_on_reals(const Poly& p) {
  if (p.is_zero()) return Nonnegative{};
  const auto roots = isolate_real_roots(p);
  std::vector<Rational> samples;
  if (roots.empty()) {
    samples.push_back(0);
  } else {
    const Rational& first = roots.front().lo;
    if (sgn(first) >= 0) {
      samples.push_back(0);
    } else {
      Integer f;
      mpz_fdiv_q(f.get_mpz_t(), first.get_num_mpz_t(), first.get_den_mpz_t());
      samples.push_back(Rational(f));
    }
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
      samples.push_back(simplest_dyadic(roots[i].hi, roots[i + 1].lo));
    }
    const Rational& last = roots.back().hi;
    if (sgn(last) <= 0) {
      samples.push_back(0);
    } else {
      Integer c;
      mpz_cdiv_q(c.get_mpz_t(), last.get_num_mpz_t(), last.get_den_mpz_t());
      samples.push_back(Rational(c));
    }
  }
  for (const auto& x : samples) {
    Rational v = p(x);
    if (sgn(v) < 0) return NegativeWitness{x, v};
  }
  return Nonnegative{};
}

namespace {

// Upper bound of |q| on [lo, hi] from |coefficients| and max |x|.
Rational abs_bound(const Poly& q, const Rational& lo, const Rational& hi) {
  const Rational radius = std::max(abs(lo), abs(hi));
  Rational acc = 0;
  Rational power = 1;
  for (const auto& c : q.coeffs()) {
    acc += abs(c) * power;
    power *= radius;
  }
  return acc;
}

}  // namespace

Enclosure global_min(const Poly& p, const Rational& tol) {
  if (sgn(tol) <= 0) throw std::invalid_argument("global_min: tolerance must be positive");
  if (p.is_zero()) return {0, 0};
  if (p.degree() % 2 != 0 || sgn(p.leading()) < 0) {
    throw std::domain_error("global_min: polynomial is unbounded below");
  }
  if (p.degree() == 0) return {p.coeff(0), p.coeff(0)};

  const Poly d = p.derivative();
  const Poly d_free = square_free_part(d);
  bool first = true;
  Enclosure best{0, 0};
  for (RootInterval iv : isolate_real_roots(d)) {
    Enclosure local;
    while (true) {
      if (iv.exact()) {
        Rational v = p(iv.lo);
        local = {v, v};
        break;
      }
      const Rational w = iv.hi - iv.lo;
      const Rational slack = abs_bound(d, iv.lo, iv.hi) * w / 2;
      if (2 * slack <= tol) {
        Rational v = p((iv.lo + iv.hi) / 2);
        local = {v - slack, v + slack};
        break;
      }
      iv = refine_root(d_free, iv, w / 2);
    }
    if (first || local.lo < best.lo) best.lo = local.lo;
    if (first || local.hi < best.hi) best.hi = local.hi;
    first = false;
  }
  return best;
}

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = p.degree(); k >= 0; --k) {
    Rational c = p.coeff(k);
    if (sgn(c) == 0) continue;
    if (first) {
      if (sgn(c) < 0) os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    Rational mag = abs(c);
    if (k == 0 || mag != 1) {
      os << to_string(mag);
      if (k > 0) os << "*";
    }
    if (k >= 1) os << "x";
    if (k >= 2) os << "^" << k;
    first = false;
  }
  return os.str();
}

}  // namespace intertwine
