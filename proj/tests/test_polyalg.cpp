#include <doctest.h>

#include <random>

#include "intertwine/generators.hpp"
#include "intertwine/poly.hpp"
#include "intertwine/special.hpp"
#include "oracles.hpp"

using namespace intertwine;

namespace {

Poly random_poly(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> degree(0, max_degree);
  std::uniform_int_distribution<long> num(-6, 6);
  std::uniform_int_distribution<long> den(1, 4);
  std::vector<Rational> c(static_cast<std::size_t>(degree(rng)) + 1);
  for (auto& v : c) {
    v = Rational(num(rng), den(rng));
    v.canonicalize();
  }
  return Poly(c);
}

// Mostly bounded-below candidates: squares plus a constant shift.
Poly random_even_poly(std::mt19937_64& rng) {
  Poly q = random_poly(rng, 4);
  if (q.degree() < 1) q = q + Poly::x();
  std::uniform_int_distribution<long> shift(-8, 8);
  return q * q + Poly::constant(Rational(shift(rng), 2));
}

std::vector<Rational> grid() {
  std::vector<Rational> g;
  for (long k = -100; k <= 100; ++k) g.emplace_back(k, 10);
  for (auto& x : g) x.canonicalize();
  return g;
}

}  // namespace

TEST_CASE("hermite: small degrees") {
  CHECK(hermite(0) == Poly{1});
  CHECK(hermite(1) == Poly{0, 1});
  CHECK(hermite(2) == Poly{-1, 0, 1});
  CHECK(hermite(3) == Poly{0, -3, 0, 1});
}

TEST_CASE("hermite: recurrence matches the generating-function expansion") {
  for (unsigned n = 0; n <= 12; ++n) CHECK(hermite(n) == checks::hermite_series(n));
  const auto table = hermite_table(8);
  for (unsigned n = 0; n <= 8; ++n) CHECK(table[n] == hermite(n));
}

TEST_CASE("hermite: orthogonality and norms under the Gaussian") {
  const auto h = hermite_table(8);
  for (unsigned n = 0; n <= 8; ++n) {
    for (unsigned m = 0; m <= 8; ++m) {
      const Rational ip = gaussian_expectation(h[n] * h[m]);
      CHECK(ip == (n == m ? Rational(factorial(n)) : Rational(0)));
    }
  }
}

TEST_CASE("gaussian moments") {
  CHECK(gaussian_moment(0) == 1);
  CHECK(gaussian_moment(1) == 0);
  CHECK(gaussian_moment(2) == 1);
  CHECK(gaussian_moment(4) == 3);
  CHECK(gaussian_moment(6) == 15);
  CHECK(gaussian_moment(7) == 0);
}

TEST_CASE("hermite basis round trip") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Poly p = random_poly(rng, 8);
    CHECK(from_hermite(to_hermite(p)) == p);
  }
  const std::vector<Rational> c{1, 0, 1};
  CHECK(from_hermite(c) == Poly{0, 0, 1});
}

TEST_CASE("krawtchouk: examples") {
  CHECK(krawtchouk(2, 0).values == std::vector<Rational>{1, 1, 1});
  CHECK(krawtchouk(2, 1).values == std::vector<Rational>{-1, 0, 1});
  CHECK(krawtchouk(1, 1).values == std::vector<Rational>{Rational(-1, 2), Rational(1, 2)});
  CHECK_THROWS_AS(krawtchouk(2, 3), std::invalid_argument);
  CHECK_THROWS_AS(krawtchouk(-1, 0), std::invalid_argument);
  CHECK_THROWS_AS(krawtchouk(2, -1), std::invalid_argument);
}

TEST_CASE("krawtchouk: agrees with the direct convolution formula") {
  for (long N = 0; N <= 8; ++N) {
    for (long n = 0; n <= N; ++n) {
      const ValueVector k = krawtchouk(N, n);
      REQUIRE(k.offset == 0);
      REQUIRE(k.size() == static_cast<std::size_t>(N) + 1);
      for (long x = 0; x <= N; ++x) CHECK(k.at_state(x) == checks::krawtchouk_direct(N, n, x));
    }
  }
}

TEST_CASE("krawtchouk: orthogonal under the binomial law") {
  for (long N = 0; N <= 8; ++N) {
    const auto pi = binomial_measure(N).weights;
    for (long n = 0; n <= N; ++n) {
      const auto kn = krawtchouk(N, n);
      for (long m = 0; m < n; ++m) {
        const auto km = krawtchouk(N, m);
        Rational ip = 0;
        for (long x = 0; x <= N; ++x) ip += kn.at_state(x) * km.at_state(x) * pi.at_state(x);
        CHECK(ip == 0);
      }
    }
  }
}

TEST_CASE("phi") {
  CHECK(phi(0, 4).values == std::vector<Rational>{1, 1, 1, 1});
  CHECK(phi(2, 4).values == std::vector<Rational>{0, 0, 1, 3});
  CHECK(phi(3, 3).values == std::vector<Rational>{0, 0, 0});
}

TEST_CASE("phi_tilde: examples and the backward recurrence") {
  const auto p1 = phi_tilde(1, 2);
  CHECK(p1.offset == -2);
  CHECK(p1.values == std::vector<Rational>{0, 0, 1});
  CHECK(phi_tilde(2, 2).values == std::vector<Rational>{0, -1, 1});
  const auto p3 = phi_tilde(3, 1);
  CHECK(p3.offset == -1);
  CHECK(p3.values == std::vector<Rational>{-2, 1});
  CHECK_THROWS_AS(phi_tilde(0, 3), std::invalid_argument);
  for (long n = 1; n <= 8; ++n) {
    const auto p = phi_tilde(n, 8);
    for (long y = 0; y > -8; --y) {
      Rational ratio(1 - n - y, 1 - y);
      ratio.canonicalize();
      CHECK(p.at_state(y - 1) == ratio * p.at_state(y));
    }
  }
}

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-2/6") == Rational(-1, 3));
  CHECK(parse_rational("1.05") == Rational(21, 20));
  CHECK(parse_rational("2e-3") == Rational(1, 500));
  CHECK(to_string(parse_rational("4/6")) == "2/3");
  CHECK(to_string(Rational(-5)) == "-5");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK(from_double(0.375) == Rational(3, 8));
}

TEST_CASE("sturm root counting") {
  const Poly p = Poly{-1, 1} * Poly{-2, 1} * Poly{3, 1};
  const auto chain = sturm_sequence(p);
  CHECK(count_roots(chain, -10, 10) == 3);
  CHECK(count_roots(chain, 0, 10) == 2);
  CHECK(isolate_real_roots(p).size() == 3);
  CHECK(isolate_real_roots(Poly{1, 0, 1}).empty());
  // Repeated roots are counted once.
  CHECK(isolate_real_roots(Poly{-1, 1} * Poly{-1, 1} * Poly{2, 1}).size() == 2);
}

TEST_CASE("nonneg_on_reals: examples") {
  CHECK(std::holds_alternative<Nonnegative>(nonneg_on_reals(Poly{0, 0, 1})));
  CHECK(std::holds_alternative<Nonnegative>(nonneg_on_reals(Poly{})));
  const auto d1 = nonneg_on_reals(Poly{-1, 0, 1});
  REQUIRE(std::holds_alternative<NegativeWitness>(d1));
  CHECK(std::get<NegativeWitness>(d1).x0 == 0);
  CHECK(std::get<NegativeWitness>(d1).value == -1);
  const auto d2 = nonneg_on_reals(Poly{Rational(-1, 20), 0, Rational(21, 20)});
  REQUIRE(std::holds_alternative<NegativeWitness>(d2));
  CHECK(std::get<NegativeWitness>(d2).x0 == 0);
  CHECK(std::get<NegativeWitness>(d2).value == Rational(-1, 20));
  // Double roots touch zero without crossing.
  const Poly touching = Poly{-1, 1} * Poly{-1, 1} * Poly{2, 1} * Poly{2, 1};
  CHECK(std::holds_alternative<Nonnegative>(nonneg_on_reals(touching)));
  CHECK(std::holds_alternative<NegativeWitness>(nonneg_on_reals(Poly{0, 1})));
  CHECK(std::holds_alternative<NegativeWitness>(nonneg_on_reals(Poly{1, 0, -1})));
}

TEST_CASE("nonneg_on_reals: property against a grid") {
  std::mt19937_64 rng(2024);
  const auto g = grid();
  int negatives = 0;
  for (int i = 0; i < 200; ++i) {
    const Poly p = i % 2 == 0 ? random_poly(rng, 8) : random_even_poly(rng);
    bool grid_negative = false;
    for (const auto& x : g) grid_negative = grid_negative || sgn(p(x)) < 0;
    const auto decision = nonneg_on_reals(p);
    if (grid_negative) {
      ++negatives;
      CHECK(std::holds_alternative<NegativeWitness>(decision));
    }
    if (const auto* w = std::get_if<NegativeWitness>(&decision)) {
      CHECK(sgn(p(w->x0)) < 0);
      CHECK(p(w->x0) == w->value);
    }
  }
  CHECK(negatives > 20);
}

TEST_CASE("global_min: examples") {
  const Rational tol = pow2(-40);
  const auto e1 = global_min(Poly{-1, 0, 1}, tol);
  CHECK(e1.lo <= -1);
  CHECK(e1.hi >= -1);
  CHECK(e1.width() <= tol);
  const auto e2 = global_min(Poly{0, 0, 1}, tol);
  CHECK(e2.lo <= 0);
  CHECK(e2.hi >= 0);
  const auto e3 = global_min(hermite(4), tol);
  CHECK(e3.lo <= -6);
  CHECK(e3.hi >= -6);
  CHECK(e3.width() <= tol);
  CHECK_THROWS_AS(global_min(Poly{0, 1}, tol), std::domain_error);
  CHECK_THROWS_AS(global_min(Poly{0, 0, -1}, tol), std::domain_error);
}

TEST_CASE("global_min: encloses the grid minimum") {
  std::mt19937_64 rng(77);
  const auto g = grid();
  const Rational tol = pow2(-30);
  for (int i = 0; i < 100; ++i) {
    const Poly p = random_even_poly(rng);
    const auto e = global_min(p, tol);
    Rational grid_min = p(g.front());
    for (const auto& x : g) grid_min = std::min(grid_min, p(x));
    CHECK(e.width() <= tol);
    CHECK(grid_min >= e.lo - tol);
  }
}
