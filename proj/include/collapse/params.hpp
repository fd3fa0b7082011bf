#pragma once

#include <cstdint>
#include <optional>

namespace collapse {

/// Coupling of the continuous model in one dimension: gamma = lambda * (4 pi r_c^2)^(1/2).
double gamma_from_lambda(double lambda_rate, double r_c);
double lambda_from_gamma(double gamma, double r_c);
/// Three-dimensional coupling, gamma = lambda * (4 pi r_c^2)^(3/2). Reference only.
double gamma_3d_from_lambda(double lambda_rate, double r_c);

/// Collapse-model parameters. gamma is always derived from lambda_rate and r_c.
///
/// lambda_rate = 0 is accepted as the collapse-free limit; every other
/// quantity must be strictly positive.
class CollapseParams {
 public:
  /// n_nucleons defaults to round(mass / m0), at least 1.
  static CollapseParams make(double lambda_rate, double r_c, double m0 = 1.0, double hbar = 1.0,
                             double mass = 1.0, std::optional<std::uint64_t> n_nucleons = {});

  double lambda_rate() const noexcept { return lambda_rate_; }
  double r_c() const noexcept { return r_c_; }
  double gamma() const noexcept { return gamma_; }
  double m0() const noexcept { return m0_; }
  std::uint64_t n_nucleons() const noexcept { return n_nucleons_; }
  double hbar() const noexcept { return hbar_; }
  double mass() const noexcept { return mass_; }

  CollapseParams with_lambda(double lambda_rate) const;
  CollapseParams with_nucleons(std::uint64_t n) const;

  friend bool operator==(const CollapseParams&, const CollapseParams&) = default;

 private:
  CollapseParams() = default;

  double lambda_rate_{};
  double r_c_{};
  double gamma_{};
  double m0_{};
  std::uint64_t n_nucleons_{};
  double hbar_{};
  double mass_{};
};

/// Reference constants in CGS and the natural unit system hbar = m0 = r_c = 1.
struct UnitSystem {
  double hbar_erg_s = 1.054571817e-27;
  double m0_g = 1.66053906660e-24;  // atomic mass unit
  double r_c_cm = 1e-5;
  double lambda_per_s = 1e-17;

  static UnitSystem reference() { return {}; }

  /// Natural time unit m0 r_c^2 / hbar, in seconds.
  double time_unit_s() const { return m0_g * r_c_cm * r_c_cm / hbar_erg_s; }
  double rate_to_natural(double per_s) const { return per_s * time_unit_s(); }
  double rate_to_cgs(double natural) const { return natural / time_unit_s(); }
  double time_to_natural(double s) const { return s / time_unit_s(); }
  double time_to_cgs(double natural) const { return natural * time_unit_s(); }
  double length_to_natural(double cm) const { return cm / r_c_cm; }
  double length_to_cgs(double natural) const { return natural * r_c_cm; }
  double mass_to_natural(double g) const { return g / m0_g; }
  double mass_to_cgs(double natural) const { return natural * m0_g; }
};

}  // namespace collapse
