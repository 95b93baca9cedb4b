#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "intertwine/rational.hpp"

namespace intertwine {

/// Dense univariate polynomial over the rationals; coeffs()[k] multiplies x^k.
/// The zero polynomial has no coefficients and degree -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);
  Poly(std::initializer_list<Rational> coeffs) : Poly(std::vector<Rational>(coeffs)) {}

  static Poly constant(const Rational& c);
  static Poly monomial(int degree, const Rational& c = 1);
  static Poly x() { return monomial(1); }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  /// Coefficient of x^k, zero beyond the degree.
  Rational coeff(int k) const;
  const Rational& leading() const;

  Rational operator()(const Rational& x) const;
  double eval(double x) const;
  /// Sign of p(x) without building the full value where cheap.
  int sign_at(const Rational& x) const { return sgn((*this)(x)); }

  Poly derivative() const;
  Poly monic() const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& s);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) { return a *= Rational(-1); }
  friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
  friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Euclidean division: a = q*b + r with deg r < deg b.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);

/// Monic gcd; gcd(0, 0) = 0.
Poly gcd(Poly a, Poly b);

/// p / gcd(p, p'): same distinct roots, all simple.
Poly square_free_part(const Poly& p);

/// Every real root of p lies strictly inside (-B, B).
Rational cauchy_bound(const Poly& p);

/// Sturm chain p, p', -rem(...), ... for a square-free p.
std::vector<Poly> sturm_sequence(const Poly& p);

int sign_variations(const std::vector<Poly>& chain, const Rational& x);

/// Number of distinct real roots of the chain's head in (a, b]; a must not be a root.
int count_roots(const std::vector<Poly>& chain, const Rational& a, const Rational& b);

/// Open interval (lo, hi) holding exactly one root, or the exact root lo == hi.
struct RootInterval {
  Rational lo;
  Rational hi;
  bool exact() const { return lo == hi; }
};

/// Isolating intervals for the distinct real roots of p, sorted increasingly.
/// Endpoints are dyadic and never roots themselves; p must be nonzero.
std::vector<RootInterval> isolate_real_roots(const Poly& p);

/// Shrinks an isolating interval of a square-free polynomial to width <= width.
RootInterval refine_root(const Poly& square_free, RootInterval iv, const Rational& width);

/// Dyadic rational with the smallest denominator in [lo, hi]; 0 when it is inside.
Rational simplest_dyadic(const Rational& lo, const Rational& hi);

struct Nonnegative {};
struct NegativeWitness {
  Rational x0;
  Rational value;  // p(x0) < 0
};
using NonnegDecision = std::variant<Nonnegative, NegativeWitness>;

/// Exact decision of p >= 0 on all of R. On failure the witness is the simplest
/// dyadic sample point, scanning the sign-constant gaps between roots left to right.
NonnegDecision nonneg_on_reals(const Poly& p);

struct Enclosure {
  Rational lo;
  Rational hi;
  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
};

/// Interval of width <= tol containing inf_R p. Throws std::domain_error when p
/// is unbounded below (odd degree or negative leading coefficient).
Enclosure global_min(const Poly& p, const Rational& tol);

std::string to_string(const Poly& p);

}  // namespace intertwine
