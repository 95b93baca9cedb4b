#include "intertwine/feasibility.hpp"

#include <stdexcept>
#include <variant>

namespace intertwine {

std::optional<RowWitness> first_negative_row(const HermiteDensityKernel& K) {
  for (long y = K.offset(); y <= K.last_state(); ++y) {
    auto decision = nonneg_on_reals(K.density(y));
    if (const auto* w = std::get_if<NegativeWitness>(&decision)) return RowWitness{y, w->x0, w->value};
  }
  return std::nullopt;
}

FeasibilityReport check_membership_A(long N, std::span<const Rational> a) {
  const HermiteDensityKernel kernel = lambda_a(N, a);
  FeasibilityReport report;
  for (std::size_t n = 1; n < a.size() && !report.parity_violation; ++n) {
    if ((n % 2 == 1 && sgn(a[n]) != 0) || (n % 2 == 0 && sgn(a[n]) < 0)) report.parity_violation = n;
  }
  report.witness = first_negative_row(kernel);
  report.member = !report.witness && !report.parity_violation;
  return report;
}

FeasibilityReport check_membership_A_tilde(long N, std::span<const Rational> a) {
  FeasibilityReport report;
  report.witness = first_negative_row(lambda_tilde_a(N, a));
  report.member = !report.witness;
  return report;
}

Rational max_a2(long N) {
  if (N < 2) throw std::invalid_argument("max_a2: N must be >= 2");
  // Row y of the one-parameter family is 1 + a_2 binom(y,2)/2 h_2, which is
  // smallest where h_2' = 2 h_1 vanishes.
  const Poly h2 = hermite(2);
  const Poly slope = h2.derivative();
  const Rational minimizer = -slope.coeff(0) / slope.coeff(1);
  const Rational h2_min = h2(minimizer);
  if (sgn(h2_min) >= 0) throw std::logic_error("max_a2: h_2 has no negative minimum");

  Rational threshold;
  long binding_row = -1;
  for (long y = 2; y <= N; ++y) {
    const Rational weight = Rational(binomial(y, 2)) / 2;
    const Rational row_threshold = 1 / (weight * -h2_min);
    if (binding_row < 0 || row_threshold < threshold) {
      threshold = row_threshold;
      binding_row = y;
    }
  }
  if (binding_row != N) throw std::logic_error("max_a2: binding row is not y = N");

  auto family = [N](const Rational& a2) {
    std::vector<Rational> a(static_cast<std::size_t>(N) + 1, Rational(0));
    a[0] = 1;
    a[2] = a2;
    return a;
  };
  const Rational eps = pow2(-40);
  const bool at = check_membership_A(N, family(threshold)).member;
  const bool below = check_membership_A(N, family(threshold - eps)).member;
  const bool above = check_membership_A(N, family(threshold + eps)).member;
  if (!at || !below || above) throw std::logic_error("max_a2: membership cross-check disagrees with the threshold");
  return threshold;
}

bool restriction_check(long N, long M, std::span<const Rational> a) {
  if (M < 0 || M > N) throw std::invalid_argument("restriction_check: need 0 <= M <= N");
  if (!check_membership_A(N, a).member) throw std::invalid_argument("restriction_check: a is not in A_N");
  return check_membership_A(M, a.first(static_cast<std::size_t>(M) + 1)).member;
}

namespace {

long top_nonzero_index(std::span<const Rational> a) {
  for (long n = static_cast<long>(a.size()) - 1; n >= 1; --n) {
    if (sgn(a[static_cast<std::size_t>(n)]) != 0) return n;
  }
  throw std::invalid_argument("witness search needs a nontrivial coefficient vector");
}

// Walks x = dir * 2^k until p(x) < 0; the leading term must be negative in
// that direction, so this stops once |x| passes the Cauchy bound.
RowWitness tail_witness(const Poly& density, long y, int dir) {
  const Rational bound = cauchy_bound(density);
  Rational x = dir;
  while (true) {
    Rational v = density(x);
    if (sgn(v) < 0) {
      if (!std::holds_alternative<NegativeWitness>(nonneg_on_reals(density))) {
        throw std::logic_error("tail witness not confirmed by the Sturm decision");
      }
      return {y, x, v};
    }
    if (abs(x) > 2 * bound) throw std::logic_error("tail witness: leading term is not negative in this direction");
    x *= 2;
  }
}

}  // namespace

RowWitness ehrenfest_ou_witness(long N, std::span<const Rational> a) {
  const HermiteDensityKernel kernel = ehrenfest_ou_kernel(N, a);
  const long top = top_nonzero_index(a);
  // K_{N,top} integrates to 0 under pi_N, so it takes both signs.
  const ValueVector k_top = krawtchouk(N, top);
  const int a_sign = sgn(a[static_cast<std::size_t>(top)]);
  for (long y = 0; y <= N; ++y) {
    if (sgn(k_top.at_state(y)) * a_sign < 0) return tail_witness(kernel.density(y), y, +1);
  }
  throw std::logic_error("ehrenfest_ou_witness: Krawtchouk polynomial does not change sign");
}

RowWitness reverse_witness(long N, std::span<const Rational> a) {
  const HermiteDensityKernel kernel = lambda_tilde_a(N, a);
  const long top = top_nonzero_index(a);
  const int a_sign = sgn(a[static_cast<std::size_t>(top)]);
  if (top % 2 == 1) {
    // Odd leading degree at y = 0 (phi~_top(0) = 1): negative toward -sign(a) infinity.
    return tail_witness(kernel.density(0), 0, -a_sign);
  }
  // Even degree >= 2: phi~_top(y) has sign (-1)^y on [-top+1, 0], so y = 0 or
  // y = -1 makes the leading coefficient negative.
  const long y = a_sign < 0 ? 0 : -1;
  return tail_witness(kernel.density(y), y, +1);
}

}  // namespace intertwine
