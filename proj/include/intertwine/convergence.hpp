#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "intertwine/kernels.hpp"

namespace intertwine {

/// c_n -> c_n e^{-nt}; each factor e^{-nt} is rounded to a double and then
/// used exactly, so c_0 = 1 is preserved.
HermiteMeasure ou_evolve(const HermiteMeasure& mu, double t);

/// 1 - inf p for the density p of mu against the standard Gaussian.
/// Throws std::domain_error if p takes a negative value.
double separation(const HermiteMeasure& mu);

/// (1/2) integral |p - 1| dgamma, split at the real roots of p - 1.
/// Throws std::domain_error if p takes a negative value.
double tv_distance(const HermiteMeasure& mu);

/// Law at time t of the Ehrenfest chain on [0, N] started from m0, through the
/// Krawtchouk expansion of m0 / pi_N. Throws std::invalid_argument unless m0 is
/// a probability vector of length N + 1.
std::vector<double> ehrenfest_evolve(long N, std::span<const Rational> m0, double t);

/// max_x (1 - p(x) / pi_N(x)).
double ehrenfest_separation(long N, std::span<const double> p);
double ehrenfest_tv(long N, std::span<const double> p);

struct SeparationRow {
  double t = 0;
  double tv = 0;
  double separation = 0;
  double bound = 0;
};

struct SeparationCurve {
  std::vector<SeparationRow> rows;

  /// First row breaking 0 <= tv <= separation <= bound <= 1 beyond `slack`.
  std::optional<std::size_t> first_violation(double slack = 1e-10) const;
};

/// Y = D_N started from m0, X = OU started from m0 link (link = lambda_a(N, a)).
SeparationCurve bound_curve(std::span<const Rational> m0, const HermiteDensityKernel& link,
                            std::span<const double> tgrid);

/// Y = D_N started from m0, X = L_N started from m0 link (link from [0,N] to [0,N]).
SeparationCurve bound_curve(std::span<const Rational> m0, const FiniteKernel& link, std::span<const double> tgrid);

/// Header t,tv,separation,bound; values with 12 significant digits.
void write_csv(std::ostream& out, const SeparationCurve& curve);

}  // namespace intertwine
