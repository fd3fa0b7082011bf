#include "collapse/params.hpp"

#include "collapse/error.hpp"

#include <cmath>
#include <numbers>

namespace collapse {

double gamma_from_lambda(double lambda_rate, double r_c) {
  return lambda_rate * std::sqrt(4.0 * std::numbers::pi * r_c * r_c);
}

double lambda_from_gamma(double gamma, double r_c) {
  return gamma / std::sqrt(4.0 * std::numbers::pi * r_c * r_c);
}

double gamma_3d_from_lambda(double lambda_rate, double r_c) {
  return lambda_rate * std::pow(4.0 * std::numbers::pi * r_c * r_c, 1.5);
}

namespace {
void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw CollapseError(ErrorKind::invalid_argument, std::string(name) + " must be strictly positive");
  }
}
}  // namespace

CollapseParams CollapseParams::make(double lambda_rate, double r_c, double m0, double hbar, double mass,
                                    std::optional<std::uint64_t> n_nucleons) {
  if (!(lambda_rate >= 0.0) || !std::isfinite(lambda_rate)) {
    throw CollapseError(ErrorKind::invalid_argument, "lambda_rate must be non-negative");
  }
  require_positive(r_c, "r_c");
  require_positive(m0, "m0");
  require_positive(hbar, "hbar");
  require_positive(mass, "mass");
  CollapseParams p;
  p.lambda_rate_ = lambda_rate;
  p.r_c_ = r_c;
  p.gamma_ = gamma_from_lambda(lambda_rate, r_c);
  p.m0_ = m0;
  p.hbar_ = hbar;
  p.mass_ = mass;
  if (n_nucleons) {
    if (*n_nucleons < 1) throw CollapseError(ErrorKind::invalid_argument, "n_nucleons must be >= 1");
    p.n_nucleons_ = *n_nucleons;
  } else {
    p.n_nucleons_ = static_cast<std::uint64_t>(std::max(1.0, std::round(mass / m0)));
  }
  return p;
}

CollapseParams CollapseParams::with_lambda(double lambda_rate) const {
  return make(lambda_rate, r_c_, m0_, hbar_, mass_, n_nucleons_);
}

CollapseParams CollapseParams::with_nucleons(std::uint64_t n) const {
  return make(lambda_rate_, r_c_, m0_, hbar_, mass_, n);
}

}  // namespace collapse
