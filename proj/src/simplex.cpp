#include "intertwine/simplex.hpp"

#include <stdexcept>

namespace intertwine::lp {

namespace {

using Tableau = std::vector<std::vector<Rational>>;

// Maximizes cost . x over the tableau in place. Returns false if unbounded.
bool run(Tableau& t, std::vector<std::size_t>& basis, const std::vector<Rational>& cost,
         void (*pivot)(Tableau&, std::vector<std::size_t>&, std::size_t, std::size_t)) {
  const std::size_t cols = cost.size();
  while (true) {
    std::optional<std::size_t> entering;
    for (std::size_t j = 0; j < cols && !entering; ++j) {
      Rational reduced = cost[j];
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (sgn(t[i][j]) != 0 && sgn(cost[basis[i]]) != 0) reduced -= cost[basis[i]] * t[i][j];
      }
      if (sgn(reduced) > 0) entering = j;
    }
    if (!entering) return true;
    const std::size_t j = *entering;
    std::optional<std::size_t> leaving;
    Rational best_ratio;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (sgn(t[i][j]) <= 0) continue;
      Rational ratio = t[i].back() / t[i][j];
      if (!leaving || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[*leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (!leaving) return false;
    pivot(t, basis, *leaving, j);
  }
}

}  // namespace

void Simplex::pivot(Tableau& t, std::vector<std::size_t>& basis, std::size_t row, std::size_t col) {
  const Rational inv = 1 / t[row][col];
  for (auto& v : t[row]) v *= inv;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i == row || sgn(t[i][col]) == 0) continue;
    const Rational factor = t[i][col];
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      if (sgn(t[row][j]) != 0) t[i][j] -= factor * t[row][j];
    }
  }
  basis[row] = col;
}

Simplex::Simplex(const RatMatrix& eq, const std::vector<Rational>& rhs) : vars_(eq.cols()) {
  if (rhs.size() != eq.rows()) throw std::invalid_argument("Simplex: rhs size mismatch");
  const std::size_t m = eq.rows();
  const std::size_t n = eq.cols();
  tableau_.assign(m, std::vector<Rational>(n + m + 1, Rational(0)));
  basis_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = sgn(rhs[i]) < 0;
    for (std::size_t j = 0; j < n; ++j) tableau_[i][j] = flip ? Rational(-eq(i, j)) : eq(i, j);
    tableau_[i][n + i] = 1;
    tableau_[i].back() = flip ? Rational(-rhs[i]) : rhs[i];
    basis_[i] = n + i;
  }
  std::vector<Rational> phase_one(n + m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase_one[n + i] = -1;
  run(tableau_, basis_, phase_one, &Simplex::pivot);

  Rational infeasibility = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (basis_[i] >= n) infeasibility += tableau_[i].back();
  }
  feasible_ = sgn(infeasibility) == 0;
  if (!feasible_) return;

  // Drive zero-level artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < tableau_.size();) {
    if (basis_[i] < n) {
      ++i;
      continue;
    }
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < n && !col; ++j) {
      if (sgn(tableau_[i][j]) != 0) col = j;
    }
    if (col) {
      pivot(tableau_, basis_, i, *col);
      ++i;
    } else {
      tableau_.erase(tableau_.begin() + static_cast<std::ptrdiff_t>(i));
      basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }
  for (auto& row : tableau_) {
    Rational rhs_value = row.back();
    row.resize(n);
    row.push_back(rhs_value);
  }
}

std::vector<Rational> Simplex::point() const {
  std::vector<Rational> x(vars_, Rational(0));
  if (!feasible_) return x;
  for (std::size_t i = 0; i < tableau_.size(); ++i) x[basis_[i]] = tableau_[i].back();
  return x;
}

Simplex::Result Simplex::maximize(const std::vector<Rational>& objective) const {
  if (!feasible_) throw std::logic_error("Simplex::maximize on an infeasible problem");
  if (objective.size() != vars_) throw std::invalid_argument("Simplex::maximize: objective size mismatch");
  Tableau t = tableau_;
  std::vector<std::size_t> basis = basis_;
  Result result;
  result.bounded = run(t, basis, objective, &Simplex::pivot);
  if (!result.bounded) return result;
  result.x.assign(vars_, Rational(0));
  for (std::size_t i = 0; i < t.size(); ++i) result.x[basis[i]] = t[i].back();
  result.value = 0;
  for (std::size_t j = 0; j < vars_; ++j) result.value += objective[j] * result.x[j];
  return result;
}

}  // namespace intertwine::lp
