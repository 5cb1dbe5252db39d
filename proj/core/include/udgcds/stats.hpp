#pragma once

#include <cstddef>
#include <span>

namespace udgcds {

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Wilson score interval for a binomial proportion; z = 1.96 gives 95%.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

// sqrt(p(1-p)/n)
double binomial_std_error(double p, std::size_t n);

struct ProportionEstimate {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double estimate = 0.0;
  Interval ci95;
};

ProportionEstimate make_proportion(std::size_t successes, std::size_t trials);

double mean(std::span<const double> values);
// Sample variance (n-1 denominator); 0 for fewer than two values.
double sample_variance(std::span<const double> values);

}  // namespace udgcds
