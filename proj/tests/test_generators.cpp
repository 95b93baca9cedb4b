#include <doctest.h>

#include "intertwine/generators.hpp"

using namespace intertwine;

TEST_CASE("ehrenfest rates") {
  const auto L0 = ehrenfest(0);
  CHECK(L0.size() == 1);
  CHECK(L0.rates()(0, 0) == 0);
  const auto L2 = ehrenfest(2);
  CHECK(L2.rate(1, 0) == Rational(1, 2));
  CHECK(L2.rate(1, 1) == -1);
  CHECK(L2.rate(1, 2) == Rational(1, 2));
  CHECK(L2.rate(0, 0) == -1);
  CHECK(L2.rate(0, 1) == 1);
  CHECK(L2.rate(0, 2) == 0);
  CHECK(L2.max_exit_rate() == 1);
}

TEST_CASE("yule and reverse yule rates") {
  CHECK(yule(3).rate(2, 1) == 2);
  CHECK(yule(3).rate(2, 2) == -2);
  const auto D = reverse_yule(2);
  CHECK(D.offset() == -2);
  CHECK(D.rate(0, -1) == 1);
  CHECK(D.rate(-1, -2) == 2);
  CHECK(D.rate(-2, -2) == 0);
  for (long N = 0; N <= 10; ++N) {
    const auto Y = yule(N);
    for (long x = 0; x <= N; ++x) CHECK(-Y.rate(x, x) == x);
  }
}

TEST_CASE("generators reject invalid rate matrices") {
  RatMatrix bad_sum(2, 2);
  bad_sum(0, 0) = -1;
  CHECK_THROWS_AS(FiniteGenerator(0, bad_sum), std::invalid_argument);
  RatMatrix negative(2, 2);
  negative(0, 1) = -1;
  negative(0, 0) = 1;
  CHECK_THROWS_AS(FiniteGenerator(0, negative), std::invalid_argument);
}

TEST_CASE("ou_apply") {
  CHECK(ou_apply(Poly{0, 0, 1}) == Poly{2, 0, -2});
  CHECK(ou_apply(hermite(2)) == hermite(2) * Rational(-2));
  CHECK(ou_apply(Poly{1}).is_zero());
  for (unsigned n = 0; n <= 10; ++n) CHECK((ou_apply(hermite(n)) + hermite(n) * Rational(n)).is_zero());
}

TEST_CASE("check_eigen examples") {
  CHECK(check_eigen(yule(4), phi(2, 5), 2).is_zero());
  CHECK(check_eigen(ehrenfest(3), krawtchouk(3, 1), 1).is_zero());
  CHECK(check_eigen(reverse_yule(3), phi_tilde(2, 3), 2).is_zero());
  CHECK_FALSE(check_eigen(yule(4), phi(2, 5), 1).is_zero());
  CHECK_THROWS_AS(check_eigen(yule(4), phi(2, 4), 2), std::invalid_argument);
}

TEST_CASE("spectral certificates for N <= 10") {
  for (long N = 0; N <= 10; ++N) {
    for (long n = 0; n <= N; ++n) {
      CHECK(check_eigen(ehrenfest(N), krawtchouk(N, n), n).is_zero());
      CHECK(check_eigen(yule(N), phi(n, N + 1), n).is_zero());
      const auto v = n == 0 ? ones(-N, static_cast<std::size_t>(N) + 1) : phi_tilde(n, N);
      CHECK(check_eigen(reverse_yule(N), v, n).is_zero());
    }
  }
}

TEST_CASE("binomial measure") {
  CHECK(binomial_measure(2).weights.values == std::vector<Rational>{Rational(1, 4), Rational(1, 2), Rational(1, 4)});
  CHECK(binomial_measure(0).weights.values == std::vector<Rational>{1});
  for (long N = 0; N <= 10; ++N) {
    const auto pi = binomial_measure(N).weights.values;
    const auto L = ehrenfest(N);
    CHECK(L.rates().left_apply(pi) == std::vector<Rational>(static_cast<std::size_t>(N) + 1, Rational(0)));
    for (long x = 0; x <= N; ++x) {
      for (long y = 0; y <= N; ++y) {
        CHECK(pi[static_cast<std::size_t>(x)] * L.rate(x, y) == pi[static_cast<std::size_t>(y)] * L.rate(y, x));
      }
    }
  }
}
