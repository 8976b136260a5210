#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wristex::stats {

struct FriedmanResult {
  double chi2 = 0.0;
  double p = 1.0;
  int df = 0;
  std::size_t n_subjects = 0;
};

// Friedman rank test on an n-subjects x m-conditions table (rows are
// subjects). Ties get average ranks and the statistic is tie-corrected.
// A fully tied table yields chi2 = 0, p = 1.
FriedmanResult friedman_test(const std::vector<std::vector<double>>& data);

// Upper tail of the chi-squared distribution.
double chi2_survival(double x, int df);

// Average (fractional) ranks, 1-based.
std::vector<double> average_ranks(std::span<const double> values);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample sd (n - 1); 0 for a single value
  std::size_t n = 0;
};

MeanSd mean_sd(std::span<const double> values);

struct FiveNumber {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

// Quartiles by linear interpolation between order statistics (h = (n-1)p).
FiveNumber five_number(std::span<const double> values);

}  // namespace wristex::stats
