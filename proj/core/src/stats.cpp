#include "udgcds/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace udgcds {

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // The exact endpoints at 0 and n; the formula leaves rounding residue there.
  const double low = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double high = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {low, high};
}

double binomial_std_error(double p, std::size_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

ProportionEstimate make_proportion(std::size_t successes, std::size_t trials) {
  ProportionEstimate e;
  e.successes = successes;
  e.trials = trials;
  e.estimate = trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  e.ci95 = wilson_interval(successes, trials);
  return e;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double acc = 0.0;
  for (double v : values) acc += (v - m) * (v - m);
  return acc / static_cast<double>(values.size() - 1);
}

}  // namespace udgcds
