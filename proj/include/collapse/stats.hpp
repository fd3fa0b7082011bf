#pragma once

#include <cstddef>
#include <span>
#include <utility>

namespace collapse {

struct BornTestReport {
  std::size_t n = 0;
  std::size_t right_count = 0;
  double observed_right_frequency = 0.0;
  double expected_right_frequency = 0.0;
  double chi_square = 0.0;  // one degree of freedom
  double z_score = 0.0;     // signed, sqrt(chi_square)
  double p_value = 1.0;
  bool passed = false;      // chi_square <= 9, i.e. within 3 sigma
};

inline constexpr std::size_t kMinBornSamples = 100;

/// Pearson chi-square of left/right lobe labels (0 = left, 1 = right) against
/// expected weights (normalized internally). Throws too_few_samples below 100.
BornTestReport born_rule_test(std::span<const int> outcomes, std::pair<double, double> expected_weights);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;
};
MeanAndError mean_and_stderr(std::span<const double> v);

}  // namespace collapse
