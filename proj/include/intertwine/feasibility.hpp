#pragma once

#include <optional>
#include <span>
#include <vector>

#include "intertwine/kernels.hpp"

namespace intertwine {

/// A point where some row density is negative.
struct RowWitness {
  long y = 0;
  Rational x0;
  Rational value;  // density(y)(x0) < 0
};

struct FeasibilityReport {
  bool member = false;
  std::optional<RowWitness> witness;
  /// First index violating "odd entries vanish, even entries are >= 0".
  std::optional<std::size_t> parity_violation;
};

/// Membership of a in A_N: parity screen, then an exact nonnegativity decision
/// for every row of lambda_a(N, a). Rows are scanned from y = 0 upward.
FeasibilityReport check_membership_A(long N, std::span<const Rational> a);

/// Same for the reverse family (rows of lambda_tilde_a on [-N, 0]); no parity screen.
FeasibilityReport check_membership_A_tilde(long N, std::span<const Rational> a);

/// Row-by-row nonnegativity of any density kernel, lowest state first.
std::optional<RowWitness> first_negative_row(const HermiteDensityKernel& K);

/// sup{a_2 >= 0 : (1, 0, a_2, 0, ..., 0) in A_N}, exact. Requires N >= 2.
Rational max_a2(long N);

/// Whether the prefix (a_0..a_M) lies in A_M. Throws std::invalid_argument
/// unless a lies in A_N and 0 <= M <= N.
bool restriction_check(long N, long M, std::span<const Rational> a);

/// Negativity witness for the Ehrenfest-to-OU candidate kernel built from a
/// (rows sum_n K_{N,n}(y) (a_n/n!) h_n). Throws if a is (1, 0, ..., 0).
RowWitness ehrenfest_ou_witness(long N, std::span<const Rational> a);

/// Negativity witness for lambda_tilde_a(N, a). Throws if a is (1, 0, ..., 0).
RowWitness reverse_witness(long N, std::span<const Rational> a);

}  // namespace intertwine
