#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ibcsym {

struct ChiSquare {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

// Pearson test of observed counts against bin probabilities. Adjacent bins
// (in the given order) are pooled until each pooled bin expects at least
// min_expected counts.
ChiSquare chi_square_test(std::span<const double> observed, std::span<const double> probabilities,
                          double min_expected = 5.0);

// Upper tail of the Kolmogorov distribution, Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}.
double kolmogorov_q(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

KsResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace ibcsym
