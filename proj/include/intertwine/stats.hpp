#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace intertwine::stats {

struct TestResult {
  double statistic = 0;
  double dof = 0;
  double p_value = 1;
};

/// Pearson goodness of fit. Cells with probability 0 are dropped when empty
/// and force p_value = 0 otherwise.
TestResult chi_square_gof(std::span<const std::size_t> observed, std::span<const double> probabilities);

/// Pearson test of independence on a contingency table; empty rows and
/// columns are dropped.
TestResult chi_square_independence(const std::vector<std::vector<std::size_t>>& table);

/// sup |F_n - F| for the given sample and continuous cdf.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov p-value with the Stephens small-sample correction.
double kolmogorov_pvalue(double d, std::size_t n);

struct MeanEstimate {
  double mean = 0;
  double standard_error = 0;
};

MeanEstimate mean_estimate(std::span<const double> sample);

}  // namespace intertwine::stats
