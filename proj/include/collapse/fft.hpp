#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace collapse::detail {

/// In-place complex FFT over an owned, SIMD-aligned buffer.
///
/// Planning goes through a global lock (the FFTW planner is not reentrant);
/// execution only touches this object's buffer and is safe to run
/// concurrently with other plans. Plans use FFTW_ESTIMATE so the selected
/// algorithm, and therefore the rounding, is reproducible run to run.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::span<std::complex<double>> buffer() noexcept;

  /// Unnormalized forward transform, sign -1.
  void forward();
  /// Unnormalized inverse transform, sign +1.
  void backward();

 private:
  std::size_t n_;
  void* data_;
  void* forward_plan_;
  void* backward_plan_;
};

/// Per-thread plan cache keyed by length.
FftPlan& thread_plan(std::size_t n);

/// Angular wavenumber of FFT bin j on a lattice of n sites and period length.
double fft_wavenumber(std::size_t j, std::size_t n, double length) noexcept;

}  // namespace collapse::detail

#include <vector>

namespace collapse {
class LatticeGrid;
}

namespace collapse::detail {

/// Symmetric real kernel on a periodic lattice, tabulated by site offset,
/// with its spectrum (dx folded in) for circular convolution
/// (k * f)_i = sum_j k_{i-j} f_j dx.
class CircularKernel {
 public:
  CircularKernel(const LatticeGrid& grid, std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  /// Real because the kernel is even.
  std::span<const double> spectrum() const noexcept { return spectrum_; }
  double dx() const noexcept { return dx_; }

  std::vector<double> convolve(std::span<const double> f) const;

 private:
  double dx_;
  std::vector<double> values_;
  std::vector<double> spectrum_;
};

/// prefactor * exp(-d^2 / (2 s^2)) at each site offset d (minimum image).
std::vector<double> gaussian_min_image(const LatticeGrid& grid, double s, double prefactor);
/// prefactor * sum_m exp(-(d + m L)^2 / (2 s^2)), summed over all periodic images.
std::vector<double> gaussian_periodized(const LatticeGrid& grid, double s, double prefactor);

}  // namespace collapse::detail
