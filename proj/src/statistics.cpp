#include "wristex/statistics.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wristex/errors.hpp"

namespace wristex::stats {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 share the mean of ranks i+1..j.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double chi2_survival(double x, int df) {
  if (df < 1) throw DomainError("chi-squared needs df >= 1");
  if (!std::isfinite(x)) throw DomainError("chi-squared statistic is not finite");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

FriedmanResult friedman_test(const std::vector<std::vector<double>>& data) {
  const std::size_t n = data.size();
  if (n < 2) throw DomainError("Friedman test needs at least 2 subjects");
  const std::size_t m = data.front().size();
  if (m < 2) throw DomainError("Friedman test needs at least 2 conditions");

  std::vector<double> rank_sums(m, 0.0);
  double tie_sum = 0.0;
  for (const auto& row : data) {
    if (row.size() != m) throw DomainError("Friedman table has missing cells");
    for (double v : row) {
      if (!std::isfinite(v)) throw DomainError("Friedman table has non-finite cells");
    }
    const auto ranks = average_ranks(row);
    for (std::size_t j = 0; j < m; ++j) rank_sums[j] += ranks[j];

    std::vector<double> sorted(row);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < m;) {
      std::size_t j = i + 1;
      while (j < m && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      tie_sum += t * t * t - t;
      i = j;
    }
  }

  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  FriedmanResult out;
  out.df = static_cast<int>(m) - 1;
  out.n_subjects = n;

  const double tie_divisor = 1.0 - tie_sum / (nd * (md * md * md - md));
  if (tie_divisor <= 0.0) {
    return out;
  }
  double sum_sq = 0.0;
  for (double r : rank_sums) sum_sq += r * r;
  const double raw = 12.0 / (nd * md * (md + 1.0)) * sum_sq - 3.0 * nd * (md + 1.0);
  out.chi2 = std::max(0.0, raw / tie_divisor);
  out.p = chi2_survival(out.chi2, out.df);
  return out;
}

MeanSd mean_sd(std::span<const double> values) {
  MeanSd out;
  out.n = values.size();
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(out.n);
  if (out.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(out.n - 1));
  }
  return out;
}

FiveNumber five_number(std::span<const double> values) {
  if (values.empty()) throw DomainError("five-number summary of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  auto quantile = [&](double p) {
    const double h = (static_cast<double>(v.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return {v.front(), quantile(0.25), quantile(0.5), quantile(0.75), v.back(), v.size()};
}

}  // namespace wristex::stats
