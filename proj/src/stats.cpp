#include "intertwine/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace intertwine::stats {

namespace {

double upper_tail(double statistic, double dof) {
  if (dof <= 0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace

TestResult chi_square_gof(std::span<const std::size_t> observed, std::span<const double> probabilities) {
  if (observed.size() != probabilities.size()) throw std::invalid_argument("chi_square_gof: size mismatch");
  double n = 0;
  for (auto o : observed) n += static_cast<double>(o);
  TestResult result;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (probabilities[i] <= 0) {
      if (observed[i] > 0) return {std::numeric_limits<double>::infinity(), 0, 0.0};
      continue;
    }
    const double expected = n * probabilities[i];
    const double diff = static_cast<double>(observed[i]) - expected;
    result.statistic += diff * diff / expected;
    ++cells;
  }
  result.dof = cells > 0 ? static_cast<double>(cells - 1) : 0.0;
  result.p_value = upper_tail(result.statistic, result.dof);
  return result;
}

TestResult chi_square_independence(const std::vector<std::vector<std::size_t>>& table) {
  std::vector<double> rows;
  std::vector<double> cols;
  std::vector<std::size_t> keep_cols;
  const std::size_t width = table.empty() ? 0 : table.front().size();
  for (const auto& r : table) {
    if (r.size() != width) throw std::invalid_argument("chi_square_independence: ragged table");
  }
  for (std::size_t j = 0; j < width; ++j) {
    double total = 0;
    for (const auto& r : table) total += static_cast<double>(r[j]);
    if (total > 0) {
      cols.push_back(total);
      keep_cols.push_back(j);
    }
  }
  std::vector<const std::vector<std::size_t>*> keep_rows;
  for (const auto& r : table) {
    double total = 0;
    for (auto j : keep_cols) total += static_cast<double>(r[j]);
    if (total > 0) {
      rows.push_back(total);
      keep_rows.push_back(&r);
    }
  }
  double n = 0;
  for (double r : rows) n += r;
  TestResult result;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const double expected = rows[i] * cols[k] / n;
      const double diff = static_cast<double>((*keep_rows[i])[keep_cols[k]]) - expected;
      result.statistic += diff * diff / expected;
    }
  }
  result.dof = rows.empty() || cols.empty() ? 0.0 : static_cast<double>((rows.size() - 1) * (cols.size() - 1));
  result.p_value = upper_tail(result.statistic, result.dof);
  return result;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double kolmogorov_pvalue(double d, std::size_t n) {
  const double root = std::sqrt(static_cast<double>(n));
  const double lambda = (root + 0.12 + 0.11 / root) * d;
  if (lambda < 0.2) return 1.0;
  // Q(lambda) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2)
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

MeanEstimate mean_estimate(std::span<const double> sample) {
  if (sample.size() < 2) throw std::invalid_argument("mean_estimate: need at least two values");
  const double n = static_cast<double>(sample.size());
  double mean = 0;
  for (double v : sample) mean += v;
  mean /= n;
  double ss = 0;
  for (double v : sample) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1) / n)};
}

}  // namespace intertwine::stats
