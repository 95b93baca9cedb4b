#include "intertwine/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "intertwine/simplex.hpp"

namespace intertwine {

// ---------------------------------------------------------------------------
// Finite kernels

FiniteKernel::FiniteKernel(long row_offset, long col_offset, RatMatrix entries)
    : row_offset_(row_offset), col_offset_(col_offset), entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.cols() == 0) throw std::invalid_argument("FiniteKernel: empty matrix");
  for (std::size_t i = 0; i < entries_.rows(); ++i) {
    Rational total = 0;
    for (std::size_t j = 0; j < entries_.cols(); ++j) {
      if (sgn(entries_(i, j)) < 0) throw std::invalid_argument("FiniteKernel: negative entry");
      total += entries_(i, j);
    }
    if (total != 1) throw std::invalid_argument("FiniteKernel: row " + std::to_string(i) + " does not sum to 1");
  }
}

const Rational& FiniteKernel::operator()(long row_state, long col_state) const {
  const long r = row_state - row_offset_;
  const long c = col_state - col_offset_;
  if (r < 0 || c < 0 || r >= static_cast<long>(rows()) || c >= static_cast<long>(cols())) {
    throw std::out_of_range("FiniteKernel: state out of range");
  }
  return entries_(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
}

ValueVector FiniteKernel::apply(const ValueVector& f) const {
  if (f.offset != col_offset_ || f.size() != cols()) throw std::invalid_argument("FiniteKernel::apply: dimension mismatch");
  return {row_offset_, entries_.apply(f.values)};
}

std::vector<Rational> FiniteKernel::pushforward(std::span<const Rational> m) const {
  if (m.size() != rows()) throw std::invalid_argument("FiniteKernel::pushforward: dimension mismatch");
  return entries_.left_apply(m);
}

FiniteKernel compose(const FiniteKernel& a, const FiniteKernel& b) {
  if (a.col_offset() != b.row_offset() || a.cols() != b.rows()) {
    throw std::invalid_argument("compose: kernel state spaces do not match");
  }
  return {a.row_offset(), b.col_offset(), a.entries() * b.entries()};
}

FiniteKernel lambda_step(long N) {
  if (N < 0) throw std::invalid_argument("lambda_step: N must be >= 0");
  const auto n = static_cast<std::size_t>(N);
  RatMatrix m(n + 1, n + 2);
  for (std::size_t x = 0; x <= n; ++x) {
    m(x, x) = Rational(1, 2);
    m(x, x + 1) = Rational(1, 2);
  }
  return {0, 0, std::move(m)};
}

FiniteKernel lambda_chain(long M, long N) {
  if (M < 0 || M > N) throw std::invalid_argument("lambda_chain: need 0 <= M <= N");
  RatMatrix m(static_cast<std::size_t>(M) + 1, static_cast<std::size_t>(N) + 1);
  const Rational scale = pow2(M - N);
  for (long x = 0; x <= M; ++x) {
    for (long y = x; y <= x + N - M; ++y) {
      m(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = Rational(binomial(N - M, y - x)) * scale;
    }
  }
  return {0, 0, std::move(m)};
}

FiniteKernel lambda_hat(long N) {
  if (N < 0) throw std::invalid_argument("lambda_hat: N must be >= 0");
  const auto n = static_cast<std::size_t>(N) + 1;
  RatMatrix m(n, n);
  for (long x = 0; x <= N; ++x) {
    const Rational scale = pow2(x - N);
    for (long y = x; y <= N; ++y) {
      m(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = Rational(binomial(N - x, y - x)) * scale;
    }
  }
  return {0, 0, std::move(m)};
}

FiniteKernel lambda_hat_chain(long M, long N) {
  if (M < 0 || M > N) throw std::invalid_argument("lambda_hat_chain: need 0 <= M <= N");
  return {0, 0, lambda_hat(N).entries().top_rows(static_cast<std::size_t>(M) + 1)};
}

FiniteKernel embedding(long M, long N) {
  if (M < 0 || M > N) throw std::invalid_argument("embedding: need 0 <= M <= N");
  RatMatrix m(static_cast<std::size_t>(M) + 1, static_cast<std::size_t>(N) + 1);
  for (std::size_t x = 0; x <= static_cast<std::size_t>(M); ++x) m(x, x) = 1;
  return {0, 0, std::move(m)};
}

// ---------------------------------------------------------------------------
// Density kernels

HermiteMeasure::HermiteMeasure(std::vector<Rational> coeffs) : c(std::move(coeffs)) {
  if (c.empty() || c.front() != 1) throw std::invalid_argument("HermiteMeasure: c_0 must equal 1");
}

Poly HermiteMeasure::density() const { return from_hermite(c); }

HermiteDensityKernel HermiteDensityKernel::from_hermite_rows(long offset, std::vector<std::vector<Rational>> rows,
                                                             std::optional<std::vector<Rational>> a) {
  if (rows.empty()) throw std::invalid_argument("HermiteDensityKernel: no rows");
  HermiteDensityKernel k;
  k.offset_ = offset;
  k.a_ = std::move(a);
  k.hermite_rows_ = std::move(rows);
  for (const auto& row : k.hermite_rows_) k.densities_.push_back(from_hermite(row));
  return k;
}

HermiteDensityKernel HermiteDensityKernel::from_densities(long offset, const std::vector<Poly>& densities) {
  std::vector<std::vector<Rational>> rows;
  rows.reserve(densities.size());
  for (const auto& p : densities) rows.push_back(to_hermite(p));
  return from_hermite_rows(offset, std::move(rows));
}

const Poly& HermiteDensityKernel::density(long state) const {
  if (state < offset_ || state > last_state()) throw std::out_of_range("HermiteDensityKernel: state out of range");
  return densities_[static_cast<std::size_t>(state - offset_)];
}

const std::vector<Rational>& HermiteDensityKernel::hermite_row(long state) const {
  if (state < offset_ || state > last_state()) throw std::out_of_range("HermiteDensityKernel: state out of range");
  return hermite_rows_[static_cast<std::size_t>(state - offset_)];
}

ValueVector HermiteDensityKernel::apply(const Poly& f) const {
  ValueVector out{offset_, {}};
  out.values.reserve(size());
  for (const auto& row : densities_) out.values.push_back(gaussian_expectation(f * row));
  return out;
}

ValueVector HermiteDensityKernel::total_mass() const { return apply(Poly::constant(1)); }

namespace {

void check_coefficients(long N, std::span<const Rational> a) {
  if (N < 0) throw std::invalid_argument("coefficient vector: N must be >= 0");
  if (a.size() != static_cast<std::size_t>(N) + 1) {
    throw std::invalid_argument("coefficient vector must have length N+1");
  }
  if (a[0] != 1) throw std::invalid_argument("coefficient vector must have a_0 = 1");
}

}  // namespace

HermiteDensityKernel lambda_a(long N, std::span<const Rational> a) {
  check_coefficients(N, a);
  std::vector<std::vector<Rational>> rows;
  for (long y = 0; y <= N; ++y) {
    std::vector<Rational> c(static_cast<std::size_t>(y) + 1, Rational(0));
    for (long n = 0; n <= y; ++n) {
      c[static_cast<std::size_t>(n)] =
          a[static_cast<std::size_t>(n)] * Rational(binomial(y, n)) / Rational(factorial(static_cast<unsigned long>(n)));
    }
    rows.push_back(std::move(c));
  }
  return HermiteDensityKernel::from_hermite_rows(0, std::move(rows), std::vector<Rational>(a.begin(), a.end()));
}

HermiteDensityKernel lambda_tilde_a(long N, std::span<const Rational> a) {
  check_coefficients(N, a);
  std::vector<ValueVector> eigen;
  for (long n = 1; n <= N; ++n) eigen.push_back(phi_tilde(n, N));
  std::vector<std::vector<Rational>> rows;
  for (long y = -N; y <= 0; ++y) {
    std::vector<Rational> c(static_cast<std::size_t>(N) + 1, Rational(0));
    c[0] = 1;
    for (long n = 1; n <= N; ++n) {
      c[static_cast<std::size_t>(n)] = a[static_cast<std::size_t>(n)] *
                                       eigen[static_cast<std::size_t>(n - 1)].at_state(y) /
                                       Rational(factorial(static_cast<unsigned long>(n)));
    }
    rows.push_back(std::move(c));
  }
  return HermiteDensityKernel::from_hermite_rows(-N, std::move(rows), std::vector<Rational>(a.begin(), a.end()));
}

HermiteDensityKernel ehrenfest_ou_kernel(long N, std::span<const Rational> a) {
  check_coefficients(N, a);
  std::vector<ValueVector> eigen;
  for (long n = 0; n <= N; ++n) eigen.push_back(krawtchouk(N, n));
  std::vector<std::vector<Rational>> rows;
  for (long y = 0; y <= N; ++y) {
    std::vector<Rational> c(static_cast<std::size_t>(N) + 1, Rational(0));
    for (long n = 0; n <= N; ++n) {
      c[static_cast<std::size_t>(n)] = a[static_cast<std::size_t>(n)] * eigen[static_cast<std::size_t>(n)].at_state(y) /
                                       Rational(factorial(static_cast<unsigned long>(n)));
    }
    rows.push_back(std::move(c));
  }
  return HermiteDensityKernel::from_hermite_rows(0, std::move(rows), std::vector<Rational>(a.begin(), a.end()));
}

// ---------------------------------------------------------------------------
// Intertwining certificates

RatMatrix verify_finite_intertwining(const FiniteGenerator& A, const FiniteKernel& K, const FiniteGenerator& B) {
  if (A.size() != K.rows() || B.size() != K.cols() || A.offset() != K.row_offset() || B.offset() != K.col_offset()) {
    throw std::invalid_argument("verify_finite_intertwining: dimension mismatch");
  }
  return A.rates() * K.entries() - K.entries() * B.rates();
}

bool OuIntertwiningReport::passed() const {
  return std::all_of(modes.begin(), modes.end(), [](const OuMode& m) { return m.residual.is_zero(); });
}

OuIntertwiningReport verify_ou_intertwining(const FiniteGenerator& G, const HermiteDensityKernel& K, unsigned depth) {
  if (G.size() != K.size() || G.offset() != K.offset()) {
    throw std::invalid_argument("verify_ou_intertwining: dimension mismatch");
  }
  if (depth + 1 < K.size()) throw std::invalid_argument("verify_ou_intertwining: depth must be >= N");
  OuIntertwiningReport report;
  const auto h = hermite_table(depth);
  for (unsigned n = 0; n <= depth; ++n) {
    OuMode mode;
    mode.n = n;
    mode.image = K.apply(h[n]);
    mode.residual = check_eigen(G, mode.image, Rational(n));
    report.modes.push_back(std::move(mode));
  }
  return report;
}

HermiteMeasure pushforward(std::span<const Rational> m, const HermiteDensityKernel& K) {
  if (m.size() != K.size()) throw std::invalid_argument("pushforward: dimension mismatch");
  std::vector<Rational> c;
  for (std::size_t y = 0; y < m.size(); ++y) {
    if (sgn(m[y]) == 0) continue;
    const auto& row = K.hermite_row(K.offset() + static_cast<long>(y));
    if (row.size() > c.size()) c.resize(row.size(), Rational(0));
    for (std::size_t n = 0; n < row.size(); ++n) c[n] += m[y] * row[n];
  }
  while (c.size() > 1 && sgn(c.back()) == 0) c.pop_back();
  return HermiteMeasure(std::move(c));
}

// ---------------------------------------------------------------------------
// Kernel polytope

bool row_constant(const RatMatrix& m) {
  for (std::size_t i = 1; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) != m(0, j)) return false;
    }
  }
  return true;
}

namespace {

// Unknown Lambda(i, j) lives at index i * q + j.
struct AffineSolution {
  std::vector<Rational> particular;
  std::vector<std::vector<Rational>> basis;
  RatMatrix reduced_rows;  // independent equations [E | b] in reduced echelon form
};

AffineSolution solve_intertwining_system(const FiniteGenerator& A, const FiniteGenerator& B) {
  const std::size_t p = A.size();
  const std::size_t q = B.size();
  const std::size_t vars = p * q;
  RatMatrix sys(p * q + p, vars + 1);
  // (A Lambda - Lambda B)(i, j) = 0
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      const std::size_t eq = i * q + j;
      for (std::size_t k = 0; k < p; ++k) sys(eq, k * q + j) += A.rates()(i, k);
      for (std::size_t k = 0; k < q; ++k) sys(eq, i * q + k) -= B.rates()(k, j);
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) sys(p * q + i, i * q + j) = 1;
    sys(p * q + i, vars) = 1;
  }
  const auto pivots = row_reduce(sys);
  if (!pivots.empty() && pivots.back() == vars) throw std::logic_error("intertwining system is inconsistent");

  AffineSolution out;
  out.particular.assign(vars, Rational(0));
  std::vector<bool> is_pivot(vars, false);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    out.particular[pivots[r]] = sys(r, vars);
    is_pivot[pivots[r]] = true;
  }
  for (std::size_t f = 0; f < vars; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> dir(vars, Rational(0));
    dir[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) dir[pivots[r]] = -sys(r, f);
    out.basis.push_back(std::move(dir));
  }
  out.reduced_rows = sys.top_rows(pivots.size());
  return out;
}

RatMatrix as_matrix(const std::vector<Rational>& flat, std::size_t p, std::size_t q) { return RatMatrix(p, q, flat); }

double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1);
}

// Lambda(t) = particular + sum_k t_k basis_k; each entry gives g . t >= -P.
struct Constraint {
  std::vector<Rational> g;
  Rational bound;  // g . t >= bound
};

void enumerate_vertices(const AffineSolution& sol, std::size_t p, std::size_t q, KernelPolytope& out) {
  const std::size_t d = sol.basis.size();
  const std::size_t vars = p * q;
  std::vector<Constraint> constraints;
  for (std::size_t v = 0; v < vars; ++v) {
    Constraint c{std::vector<Rational>(d), -sol.particular[v]};
    bool nonzero = false;
    for (std::size_t k = 0; k < d; ++k) {
      c.g[k] = sol.basis[k][v];
      nonzero = nonzero || sgn(c.g[k]) != 0;
    }
    if (!nonzero) {
      if (sgn(sol.particular[v]) < 0) return;  // empty
      continue;
    }
    // Normalize so duplicates compare equal.
    Rational scale = 0;
    for (const auto& g : c.g) {
      if (sgn(g) != 0) {
        scale = abs(g);
        break;
      }
    }
    for (auto& g : c.g) g /= scale;
    c.bound /= scale;
    if (std::none_of(constraints.begin(), constraints.end(),
                     [&](const Constraint& o) { return o.g == c.g && o.bound == c.bound; })) {
      constraints.push_back(std::move(c));
    }
  }

  auto point_for = [&](const std::vector<Rational>& t) {
    std::vector<Rational> flat = sol.particular;
    for (std::size_t k = 0; k < d; ++k) {
      if (sgn(t[k]) == 0) continue;
      for (std::size_t v = 0; v < vars; ++v) flat[v] += t[k] * sol.basis[k][v];
    }
    return as_matrix(flat, p, q);
  };

  std::vector<std::vector<Rational>> found;
  if (d == 0) {
    found.push_back({});
  } else {
    const std::size_t m = constraints.size();
    if (m < d) return;  // cannot happen for a bounded polytope with d >= 1
    std::vector<std::size_t> pick(d);
    for (std::size_t i = 0; i < d; ++i) pick[i] = i;
    while (true) {
      RatMatrix sys(d, d + 1);
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t k = 0; k < d; ++k) sys(r, k) = constraints[pick[r]].g[k];
        sys(r, d) = constraints[pick[r]].bound;
      }
      const auto piv = row_reduce(sys);
      if (piv.size() == d && piv.back() == d - 1) {
        std::vector<Rational> t(d);
        for (std::size_t k = 0; k < d; ++k) t[k] = sys(k, d);
        bool ok = true;
        for (const auto& c : constraints) {
          Rational lhs = 0;
          for (std::size_t k = 0; k < d; ++k) lhs += c.g[k] * t[k];
          if (lhs < c.bound) {
            ok = false;
            break;
          }
        }
        if (ok && std::find(found.begin(), found.end(), t) == found.end()) found.push_back(std::move(t));
      }
      // Next combination in lexicographic order.
      std::size_t i = d;
      while (i > 0 && pick[i - 1] == m - d + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < d; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  for (const auto& t : found) {
    out.vertices.push_back(point_for(t));
  }
  out.feasible = !out.vertices.empty();
  if (!out.feasible) return;
  out.feasible_point = out.vertices.front();
  out.unique = out.vertices.size() == 1;
  for (const auto& v : out.vertices) {
    if (!row_constant(v)) {
      out.nontrivial = true;
      out.nontrivial_witness = v;
      break;
    }
  }
}

void solve_by_lp(const AffineSolution& sol, std::size_t p, std::size_t q, KernelPolytope& out) {
  const std::size_t vars = p * q;
  RatMatrix eq(sol.reduced_rows.rows(), vars);
  std::vector<Rational> rhs(sol.reduced_rows.rows());
  for (std::size_t r = 0; r < eq.rows(); ++r) {
    for (std::size_t v = 0; v < vars; ++v) eq(r, v) = sol.reduced_rows(r, v);
    rhs[r] = sol.reduced_rows(r, vars);
  }
  const lp::Simplex simplex(eq, rhs);
  out.feasible = simplex.feasible();
  if (!out.feasible) return;
  out.feasible_point = as_matrix(simplex.point(), p, q);

  // Rows all equal iff consecutive rows agree; probe both signs of each difference.
  for (std::size_t i = 0; i + 1 < p && !out.nontrivial; ++i) {
    for (std::size_t j = 0; j < q && !out.nontrivial; ++j) {
      for (int s : {1, -1}) {
        std::vector<Rational> objective(vars, Rational(0));
        objective[i * q + j] = s;
        objective[(i + 1) * q + j] = -s;
        auto res = simplex.maximize(objective);
        if (res.bounded && sgn(res.value) > 0) {
          out.nontrivial = true;
          out.nontrivial_witness = as_matrix(res.x, p, q);
          break;
        }
      }
    }
  }
  if (out.nontrivial) {
    out.unique = false;
    return;
  }
  // Every stochastic solution is row-constant; it is unique iff row 0 is pinned.
  out.unique = true;
  for (std::size_t j = 0; j < q && out.unique; ++j) {
    std::vector<Rational> objective(vars, Rational(0));
    objective[j] = 1;
    auto hi = simplex.maximize(objective);
    objective[j] = -1;
    auto lo = simplex.maximize(objective);
    if (hi.value != -lo.value) out.unique = false;
  }
}

}  // namespace

KernelPolytope kernel_polytope(const FiniteGenerator& A, const FiniteGenerator& B, PolytopeOptions options) {
  if (A.size() > kMaxPolytopeStates || B.size() > kMaxPolytopeStates) {
    throw std::invalid_argument("kernel_polytope: state spaces are limited to " + std::to_string(kMaxPolytopeStates) +
                                " states");
  }
  const std::size_t p = A.size();
  const std::size_t q = B.size();
  const AffineSolution sol = solve_intertwining_system(A, B);

  KernelPolytope out;
  out.row_offset = A.offset();
  out.col_offset = B.offset();
  out.particular = as_matrix(sol.particular, p, q);
  for (const auto& dir : sol.basis) out.basis.push_back(as_matrix(dir, p, q));

  const std::size_t d = sol.basis.size();
  bool enumerate = !options.force_lp && d <= kMaxEnumerationDimension;
  if (enumerate && d > 0) {
    // Candidate bases are d-subsets of the p*q entry constraints at most.
    if (log_binomial(p * q, d) > std::log(static_cast<double>(options.max_enumeration_bases))) enumerate = false;
  }
  if (enumerate) {
    out.method = KernelPolytope::Method::VertexEnumeration;
    enumerate_vertices(sol, p, q, out);
  } else {
    out.method = KernelPolytope::Method::LinearProgramming;
    solve_by_lp(sol, p, q, out);
  }
  if (out.nontrivial_witness) out.witness_rank = rank(*out.nontrivial_witness);
  return out;
}

}  // namespace intertwine
