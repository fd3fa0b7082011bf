#include "collapse/stats.hpp"

#include "collapse/error.hpp"

#include <cmath>
#include <limits>

namespace collapse {

BornTestReport born_rule_test(std::span<const int> outcomes, std::pair<double, double> expected_weights) {
  if (outcomes.size() < kMinBornSamples) {
    throw CollapseError(ErrorKind::too_few_samples,
                        "born_rule_test needs at least 100 outcomes, got " + std::to_string(outcomes.size()));
  }
  const double total_weight = expected_weights.first + expected_weights.second;
  if (!(expected_weights.first >= 0.0) || !(expected_weights.second >= 0.0) || !(total_weight > 0.0)) {
    throw CollapseError(ErrorKind::invalid_argument, "expected weights must be non-negative with positive sum");
  }
  BornTestReport r;
  r.n = outcomes.size();
  for (int o : outcomes) r.right_count += o == 1 ? 1 : 0;
  const double n = static_cast<double>(r.n);
  r.expected_right_frequency = expected_weights.second / total_weight;
  r.observed_right_frequency = static_cast<double>(r.right_count) / n;
  const double e_right = n * r.expected_right_frequency;
  const double e_left = n - e_right;
  const double o_right = static_cast<double>(r.right_count);
  const double o_left = n - o_right;
  auto term = [](double o, double e) {
    if (e > 0.0) return (o - e) * (o - e) / e;
    return o > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  r.chi_square = term(o_right, e_right) + term(o_left, e_left);
  r.z_score = std::copysign(std::sqrt(r.chi_square), o_right - e_right);
  // One dof: P(chi2 > x) = erfc(sqrt(x/2)).
  r.p_value = std::erfc(std::sqrt(0.5 * r.chi_square));
  r.passed = r.chi_square <= 9.0;
  return r;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw CollapseError(ErrorKind::invalid_argument, "fit_line needs two or more paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw CollapseError(ErrorKind::invalid_argument, "fit_line needs distinct x values");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  f.slope_stderr = x.size() > 2 ? std::sqrt(ss_res / (n - 2.0) / sxx) : 0.0;
  return f;
}

MeanAndError mean_and_stderr(std::span<const double> v) {
  MeanAndError out;
  if (v.empty()) return out;
  const double n = static_cast<double>(v.size());
  for (double x : v) out.mean += x;
  out.mean /= n;
  if (v.size() < 2) return out;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.std_error = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

}  // namespace collapse
