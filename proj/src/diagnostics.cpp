#include "intertwine/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "intertwine/convergence.hpp"

namespace intertwine {

bool CouplingDiagnostics::all_accept(double alpha) const {
  auto ok = [alpha](const ChiSquareCheck& c) { return c.result.p_value >= alpha; };
  return ks_pvalue >= alpha && std::all_of(marginal.begin(), marginal.end(), ok) &&
         std::all_of(conditional.begin(), conditional.end(), ok) && ok(stationary) && ok(independence);
}

namespace {

std::vector<double> as_doubles(std::span<const Rational> v) {
  std::vector<double> out;
  for (const auto& r : v) out.push_back(to_double(r));
  return out;
}

}  // namespace

CouplingDiagnostics diagnose_coupling(const UniformizedPair& pair, std::span<const Rational> m0,
                                      std::span<const Trajectory> runs, std::span<const double> times,
                                      std::size_t min_bucket) {
  const FiniteKernel& link = pair.link();
  if (link.row_offset() != 0 || link.col_offset() != 0 || link.rows() != link.cols()) {
    throw std::invalid_argument("diagnose_coupling: expected a square link on [0, N]");
  }
  const long N = static_cast<long>(link.cols()) - 1;
  const auto nx = link.cols();
  const auto ny = link.rows();

  CouplingDiagnostics d;
  d.samples = runs.size();
  for (const auto& r : runs) d.events += r.events.size();

  const std::vector<Rational> mu0 = link.pushforward(m0);
  for (double t : times) {
    std::vector<std::size_t> counts(nx, 0);
    std::vector<std::vector<std::size_t>> by_y(ny, std::vector<std::size_t>(nx, 0));
    for (const auto& r : runs) {
      if (t > r.horizon) throw std::invalid_argument("diagnose_coupling: time beyond the horizon");
      const JointState s = r.at(t);
      ++counts[static_cast<std::size_t>(s.x)];
      ++by_y[static_cast<std::size_t>(s.y)][static_cast<std::size_t>(s.x)];
    }
    const std::vector<double> expected = ehrenfest_evolve(N, mu0, t);
    d.marginal.push_back({"marginal", t, -1, runs.size(), stats::chi_square_gof(counts, expected)});
    for (std::size_t y = 0; y < ny; ++y) {
      std::size_t n = 0;
      for (auto c : by_y[y]) n += c;
      if (n < min_bucket) continue;
      const auto law = as_doubles(link.entries().row(y));
      d.conditional.push_back({"conditional", t, static_cast<long>(y), n, stats::chi_square_gof(by_y[y], law)});
    }
  }

  std::vector<long> x_tau;
  for (const auto& r : runs) {
    for (const auto& e : r.events) {
      if (e.state.y == 0) {
        d.tau.push_back(e.time);
        x_tau.push_back(e.state.x);
        break;
      }
    }
  }
  d.absorbed = d.tau.size();
  if (d.absorbed == 0) return d;

  double sum = 0;
  for (double t : d.tau) sum += t;
  d.tau_mean = sum / static_cast<double>(d.absorbed);

  // Runs are cut at their horizon, so compare with the law of tau given tau <= horizon.
  const double horizon = runs.front().horizon;
  auto tau_cdf = [&](double t) {
    double c = 0;
    for (std::size_t y = 0; y < m0.size(); ++y) {
      if (sgn(m0[y]) != 0) c += to_double(m0[y]) * (1 - hypo_survival(static_cast<long>(y), t));
    }
    return c;
  };
  const double reach = tau_cdf(horizon);
  d.ks_statistic = stats::ks_statistic(d.tau, [&](double t) { return tau_cdf(t) / reach; });
  d.ks_pvalue = stats::kolmogorov_pvalue(d.ks_statistic, d.absorbed);

  const std::size_t bins = 20;
  d.histogram_width = horizon / static_cast<double>(bins);
  d.tau_histogram.assign(bins, 0);
  for (double t : d.tau) ++d.tau_histogram[std::min(bins - 1, static_cast<std::size_t>(t / d.histogram_width))];

  std::vector<std::size_t> stationary_counts(nx, 0);
  for (long x : x_tau) ++stationary_counts[static_cast<std::size_t>(x)];
  const auto pi = as_doubles(binomial_measure(N).weights.values);
  d.stationary = {"stationary", 0, -1, d.absorbed, stats::chi_square_gof(stationary_counts, pi)};

  std::vector<double> sorted = d.tau;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) { return sorted[static_cast<std::size_t>(q * static_cast<double>(sorted.size() - 1))]; };
  const double cuts[3] = {quantile(0.25), quantile(0.5), quantile(0.75)};
  std::vector<std::vector<std::size_t>> table(4, std::vector<std::size_t>(nx, 0));
  for (std::size_t i = 0; i < d.absorbed; ++i) {
    const auto q = static_cast<std::size_t>(std::upper_bound(cuts, cuts + 3, d.tau[i]) - cuts);
    ++table[std::min<std::size_t>(q, 3)][static_cast<std::size_t>(x_tau[i])];
  }
  d.independence = {"independence", 0, -1, d.absorbed, stats::chi_square_independence(table)};
  return d;
}

}  // namespace intertwine
