#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace collapse {

using Complex = std::complex<double>;

/// Uniform periodic 1-D lattice. Site i sits at x_min + i*dx.
class LatticeGrid {
 public:
  static constexpr std::size_t kMinSites = 8;

  LatticeGrid(std::size_t n_sites, double dx, double x_min);

  std::size_t n_sites() const noexcept { return n_sites_; }
  double dx() const noexcept { return dx_; }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_min_ + static_cast<double>(n_sites_ - 1) * dx_; }
  /// Period of the lattice, n_sites * dx.
  double length() const noexcept { return static_cast<double>(n_sites_) * dx_; }
  double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx_; }
  double midpoint() const noexcept { return x_min_ + 0.5 * (length() - dx_); }

  /// Nearest site to x, clamped to the lattice.
  std::size_t nearest_site(double x) const noexcept;
  /// Minimum-image separation a - b on the periodic lattice, in [-L/2, L/2).
  double periodic_offset(double a, double b) const noexcept;
  bool contains(double x) const noexcept { return x >= x_min_ && x <= x_max(); }

  friend bool operator==(const LatticeGrid&, const LatticeGrid&) = default;

 private:
  std::size_t n_sites_;
  double dx_;
  double x_min_;
};

/// Complex amplitudes over a lattice. Norm is sum |psi_i|^2 dx.
class WaveFunction {
 public:
  WaveFunction(LatticeGrid grid, std::vector<Complex> amplitudes);
  explicit WaveFunction(LatticeGrid grid);

  const LatticeGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  std::span<Complex> amplitudes() noexcept { return amps_; }
  std::size_t size() const noexcept { return amps_.size(); }
  const Complex& operator[](std::size_t i) const noexcept { return amps_[i]; }
  Complex& operator[](std::size_t i) noexcept { return amps_[i]; }

  WaveFunction& operator*=(Complex factor);

  friend bool operator==(const WaveFunction&, const WaveFunction&) = default;

 private:
  LatticeGrid grid_;
  std::vector<Complex> amps_;
};

inline constexpr double kNormTolerance = 1e-10;

double norm_squared(const WaveFunction& psi);
/// <a|b> = sum conj(a_i) b_i dx. Throws grid_mismatch.
Complex inner_product(const WaveFunction& a, const WaveFunction& b);
/// Throws zero_vector when the norm is below 1e-12.
WaveFunction normalized(WaveFunction psi);
bool is_normalized(const WaveFunction& psi, double tolerance = kNormTolerance);

/// Normalized packet proportional to exp(-(x-x0)^2/(4 sigma^2) + i k0 x), so Var(x) = sigma^2.
WaveFunction make_gaussian_packet(const LatticeGrid& grid, double x0, double sigma, double k0 = 0.0);
/// Normalized amplitude concentrated on one site (a lattice delta function).
WaveFunction make_site_delta(const LatticeGrid& grid, std::size_t site);
/// Normalized a*psi1 + b*psi2.
WaveFunction superpose(Complex a, const WaveFunction& psi1, Complex b, const WaveFunction& psi2);

/// rho_i = mass * |psi_i|^2.
std::vector<double> mass_density(const WaveFunction& psi, double mass);
std::vector<double> probability_density(const WaveFunction& psi);

// Moments use the lattice coordinate directly; packets are assumed not to wrap.
double position_mean(const WaveFunction& psi);
double position_variance(const WaveFunction& psi);
/// Spectral expectation of the wavenumber, <p>/hbar.
double wavenumber_mean(const WaveFunction& psi);

/// Probability mass left and right of `boundary` (site exactly on it counts right).
std::pair<double, double> half_line_masses(const WaveFunction& psi, double boundary);

/// Local maxima of |psi|^2 (periodic neighbours) exceeding rel_threshold * peak.
std::size_t count_density_peaks(const WaveFunction& psi, double rel_threshold = 0.01);

}  // namespace collapse
