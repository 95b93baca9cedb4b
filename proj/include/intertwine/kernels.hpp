#pragma once

#include <optional>
#include <span>
#include <vector>

#include "intertwine/generators.hpp"
#include "intertwine/matrix.hpp"
#include "intertwine/poly.hpp"
#include "intertwine/special.hpp"

namespace intertwine {

/// Row-stochastic matrix from the states row_offset.. to the states col_offset..
/// Construction enforces nonnegative entries and exact unit row sums.
class FiniteKernel {
 public:
  FiniteKernel(long row_offset, long col_offset, RatMatrix entries);

  long row_offset() const { return row_offset_; }
  long col_offset() const { return col_offset_; }
  std::size_t rows() const { return entries_.rows(); }
  std::size_t cols() const { return entries_.cols(); }
  const RatMatrix& entries() const { return entries_; }
  const Rational& operator()(long row_state, long col_state) const;

  /// (K f)(y) = sum_x K(y, x) f(x).
  ValueVector apply(const ValueVector& f) const;
  /// m K for a law m on the row states.
  std::vector<Rational> pushforward(std::span<const Rational> m) const;

  friend bool operator==(const FiniteKernel&, const FiniteKernel&) = default;

 private:
  long row_offset_;
  long col_offset_;
  RatMatrix entries_;
};

/// Product kernel a*b (a's column space must be b's row space).
FiniteKernel compose(const FiniteKernel& a, const FiniteKernel& b);

/// [0,N] -> [0,N+1], mass 1/2 on x and on x+1.
FiniteKernel lambda_step(long N);
/// 2^(M-N) binom(N-M, y-x) on x <= y <= x+N-M.
FiniteKernel lambda_chain(long M, long N);
/// Square kernel on [0,N]; row x is the binomial law of x + Bin(N-x, 1/2).
FiniteKernel lambda_hat(long N);
/// First M+1 rows of lambda_hat(N).
FiniteKernel lambda_hat_chain(long M, long N);
/// Natural imbedding of [0,M] into [0,N].
FiniteKernel embedding(long M, long N);

/// Law on R with density p(x) = sum_n c_n h_n(x) against the standard Gaussian.
/// Only c_0 = 1 is enforced; nonnegativity of p is checked on demand.
struct HermiteMeasure {
  std::vector<Rational> c;

  explicit HermiteMeasure(std::vector<Rational> coeffs);
  static HermiteMeasure gaussian() { return HermiteMeasure({Rational(1)}); }
  Poly density() const;
};

/// Kernel from a finite set to R whose rows are polynomial densities against the
/// standard Gaussian, stored both in the Hermite basis and in the monomial basis.
/// Rows may be signed; feasibility decides whether they are genuine laws.
class HermiteDensityKernel {
 public:
  static HermiteDensityKernel from_hermite_rows(long offset, std::vector<std::vector<Rational>> rows,
                                                std::optional<std::vector<Rational>> a = std::nullopt);
  static HermiteDensityKernel from_densities(long offset, const std::vector<Poly>& densities);

  long offset() const { return offset_; }
  std::size_t size() const { return densities_.size(); }
  long last_state() const { return offset_ + static_cast<long>(size()) - 1; }
  const Poly& density(long state) const;
  const std::vector<Rational>& hermite_row(long state) const;
  /// Defining coefficient vector, when the kernel came from lambda_a / lambda_tilde_a.
  const std::optional<std::vector<Rational>>& coefficients() const { return a_; }

  /// (K f)(y) = integral of f against row y, computed with exact Gaussian moments.
  ValueVector apply(const Poly& f) const;
  /// Total mass of every row.
  ValueVector total_mass() const;

 private:
  HermiteDensityKernel() = default;
  long offset_ = 0;
  std::optional<std::vector<Rational>> a_;
  std::vector<std::vector<Rational>> hermite_rows_;
  std::vector<Poly> densities_;
};

/// Rows y in [0,N]: sum_{n<=y} (a_n/n!) binom(y,n) h_n. Requires a.size() == N+1, a_0 = 1.
HermiteDensityKernel lambda_a(long N, std::span<const Rational> a);
/// Rows y in [-N,0]: 1 + sum_{n>=1} (a_n/n!) phi~_n(y) h_n. Same requirements.
HermiteDensityKernel lambda_tilde_a(long N, std::span<const Rational> a);

/// Signed Ehrenfest-to-OU kernel: rows y in [0,N] are sum_n K_{N,n}(y) (a_n/n!) h_n.
/// Same requirements on a as lambda_a.
HermiteDensityKernel ehrenfest_ou_kernel(long N, std::span<const Rational> a);

/// A K - K B, exact; zero certifies A K = K B.
RatMatrix verify_finite_intertwining(const FiniteGenerator& A, const FiniteKernel& K, const FiniteGenerator& B);

struct OuMode {
  unsigned n = 0;
  ValueVector image;     // K[h_n]
  ValueVector residual;  // G K[h_n] + n K[h_n]
};

struct OuIntertwiningReport {
  std::vector<OuMode> modes;
  bool passed() const;
};

/// Checks G K = K L on h_0..h_depth, i.e. that K maps each OU eigenfunction
/// into the matching eigenspace of G. Requires depth >= size - 1.
OuIntertwiningReport verify_ou_intertwining(const FiniteGenerator& G, const HermiteDensityKernel& K, unsigned depth);

/// All kernels Lambda with A Lambda = Lambda B and unit row sums, as
/// particular + span(basis), plus the decision about stochastic points.
struct KernelPolytope {
  enum class Method { VertexEnumeration, LinearProgramming };

  long row_offset = 0;
  long col_offset = 0;
  RatMatrix particular;
  std::vector<RatMatrix> basis;
  Method method = Method::VertexEnumeration;

  bool feasible = false;
  std::optional<RatMatrix> feasible_point;
  std::vector<RatMatrix> vertices;  // filled by vertex enumeration only
  bool unique = false;
  bool nontrivial = false;
  std::optional<RatMatrix> nontrivial_witness;
  std::size_t witness_rank = 0;

  std::size_t free_dimension() const { return basis.size(); }
};

inline constexpr std::size_t kMaxPolytopeStates = 12;
inline constexpr std::size_t kMaxEnumerationDimension = 6;

struct PolytopeOptions {
  /// Force linear programming even when vertex enumeration applies.
  bool force_lp = false;
  /// Above this many candidate bases, enumeration hands over to linear programming.
  std::size_t max_enumeration_bases = 2'000'000;
};

KernelPolytope kernel_polytope(const FiniteGenerator& A, const FiniteGenerator& B, PolytopeOptions options = {});

/// Exact mixture m K of the rows of a density kernel.
HermiteMeasure pushforward(std::span<const Rational> m, const HermiteDensityKernel& K);

bool row_constant(const RatMatrix& m);

}  // namespace intertwine
