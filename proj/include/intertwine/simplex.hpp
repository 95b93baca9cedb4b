#pragma once

#include <optional>
#include <vector>

#include "intertwine/matrix.hpp"

namespace intertwine::lp {

/// Exact two-phase simplex over {x >= 0 : eq x = rhs} with Bland's rule,
/// so it terminates on degenerate problems.
class Simplex {
 public:
  Simplex(const RatMatrix& eq, const std::vector<Rational>& rhs);

  bool feasible() const { return feasible_; }
  /// Current basic feasible solution.
  std::vector<Rational> point() const;

  struct Result {
    bool bounded = true;
    Rational value;
    std::vector<Rational> x;
  };
  /// Maximizes objective . x starting from the phase-one basis.
  Result maximize(const std::vector<Rational>& objective) const;

 private:
  using Tableau = std::vector<std::vector<Rational>>;
  static void pivot(Tableau& t, std::vector<std::size_t>& basis, std::size_t row, std::size_t col);

  std::size_t vars_ = 0;
  bool feasible_ = false;
  Tableau tableau_;  // rows: constraints; last column: rhs
  std::vector<std::size_t> basis_;
};

}  // namespace intertwine::lp
