#include "collapse/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace collapse::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  std::lock_guard lock(planner_mutex());
  auto* data = fftw_alloc_complex(n);
  data_ = data;
  const int len = static_cast<int>(n);
  forward_plan_ = fftw_plan_dft_1d(len, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_1d(len, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  fftw_free(data_);
}

std::span<std::complex<double>> FftPlan::buffer() noexcept {
  return {reinterpret_cast<std::complex<double>*>(data_), n_};
}

void FftPlan::forward() { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }
void FftPlan::backward() { fftw_execute(static_cast<fftw_plan>(backward_plan_)); }

FftPlan& thread_plan(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlan>(n);
  return *slot;
}

double fft_wavenumber(std::size_t j, std::size_t n, double length) noexcept {
  const auto half = static_cast<long long>(n / 2);
  auto m = static_cast<long long>(j);
  if (m >= half) m -= static_cast<long long>(n);
  return 2.0 * std::numbers::pi * static_cast<double>(m) / length;
}

}  // namespace collapse::detail

#include "collapse/lattice.hpp"

#include <cmath>

namespace collapse::detail {

CircularKernel::CircularKernel(const LatticeGrid& grid, std::vector<double> values)
    : dx_(grid.dx()), values_(std::move(values)), spectrum_(values_.size()) {
  auto& plan = thread_plan(values_.size());
  auto buf = plan.buffer();
  for (std::size_t j = 0; j < values_.size(); ++j) buf[j] = values_[j] * dx_;
  plan.forward();
  for (std::size_t j = 0; j < values_.size(); ++j) spectrum_[j] = buf[j].real();
}

std::vector<double> CircularKernel::convolve(std::span<const double> f) const {
  const std::size_t n = values_.size();
  auto& plan = thread_plan(n);
  auto buf = plan.buffer();
  for (std::size_t j = 0; j < n; ++j) buf[j] = f[j];
  plan.forward();
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) buf[j] *= spectrum_[j] * inv_n;
  plan.backward();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = buf[j].real();
  return out;
}

namespace {
double site_offset(const LatticeGrid& grid, std::size_t j) {
  const std::size_t n = grid.n_sites();
  const auto m = static_cast<double>(j <= n / 2 ? static_cast<long long>(j)
                                                : static_cast<long long>(j) - static_cast<long long>(n));
  return m * grid.dx();
}
}  // namespace

std::vector<double> gaussian_min_image(const LatticeGrid& grid, double s, double prefactor) {
  std::vector<double> out(grid.n_sites());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double d = site_offset(grid, j);
    out[j] = prefactor * std::exp(-d * d / (2.0 * s * s));
  }
  return out;
}

std::vector<double> gaussian_periodized(const LatticeGrid& grid, double s, double prefactor) {
  const double period = grid.length();
  // Images beyond 40 s contribute below exp(-800).
  const auto reach = static_cast<long long>(std::ceil(40.0 * s / period)) + 1;
  std::vector<double> out(grid.n_sites());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double d = site_offset(grid, j);
    double sum = 0.0;
    for (long long m = -reach; m <= reach; ++m) {
      const double u = d + static_cast<double>(m) * period;
      sum += std::exp(-u * u / (2.0 * s * s));
    }
    out[j] = prefactor * sum;
  }
  return out;
}

}  // namespace collapse::detail
