#include "collapse/lattice.hpp"

#include "collapse/error.hpp"
#include "collapse/fft.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace collapse {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::packet_too_narrow: return "packet-too-narrow";
    case ErrorKind::packet_outside_grid: return "packet-outside-grid";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::zero_vector: return "zero-vector";
    case ErrorKind::unstable_dt: return "unstable-dt";
    case ErrorKind::collapsed_to_zero: return "collapsed-to-zero";
    case ErrorKind::degenerate_lobes: return "degenerate-lobes";
    case ErrorKind::too_few_samples: return "too-few-samples";
    case ErrorKind::insufficient_signal: return "insufficient-signal";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::validation_error: return "validation-error";
  }
  return "unknown";
}

LatticeGrid::LatticeGrid(std::size_t n_sites, double dx, double x_min)
    : n_sites_(n_sites), dx_(dx), x_min_(x_min) {
  if (n_sites < kMinSites) {
    throw CollapseError(ErrorKind::invalid_argument, "n_sites must be >= 8");
  }
  if (!(dx > 0.0) || !std::isfinite(dx)) {
    throw CollapseError(ErrorKind::invalid_argument, "dx must be positive");
  }
  if (!std::isfinite(x_min)) {
    throw CollapseError(ErrorKind::invalid_argument, "x_min must be finite");
  }
}

std::size_t LatticeGrid::nearest_site(double x) const noexcept {
  const double idx = std::round((x - x_min_) / dx_);
  if (idx <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(idx), n_sites_ - 1);
}

double LatticeGrid::periodic_offset(double a, double b) const noexcept {
  const double period = length();
  double d = std::fmod(a - b, period);
  if (d < -0.5 * period) d += period;
  if (d >= 0.5 * period) d -= period;
  return d;
}

WaveFunction::WaveFunction(LatticeGrid grid, std::vector<Complex> amplitudes)
    : grid_(grid), amps_(std::move(amplitudes)) {
  if (amps_.size() != grid_.n_sites()) {
    throw CollapseError(ErrorKind::grid_mismatch, "amplitude count differs from n_sites");
  }
}

WaveFunction::WaveFunction(LatticeGrid grid) : grid_(grid), amps_(grid.n_sites()) {}

WaveFunction& WaveFunction::operator*=(Complex factor) {
  for (auto& a : amps_) a *= factor;
  return *this;
}

double norm_squared(const WaveFunction& psi) {
  double sum = 0.0;
  for (const auto& a : psi.amplitudes()) sum += std::norm(a);
  return sum * psi.grid().dx();
}

Complex inner_product(const WaveFunction& a, const WaveFunction& b) {
  if (!(a.grid() == b.grid())) {
    throw CollapseError(ErrorKind::grid_mismatch, "inner product across different grids");
  }
  Complex sum{};
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum * a.grid().dx();
}

WaveFunction normalized(WaveFunction psi) {
  const double n2 = norm_squared(psi);
  if (!(std::sqrt(n2) >= 1e-12)) {
    throw CollapseError(ErrorKind::zero_vector, "cannot normalize a vector with norm < 1e-12");
  }
  psi *= 1.0 / std::sqrt(n2);
  return psi;
}

bool is_normalized(const WaveFunction& psi, double tolerance) {
  return std::abs(norm_squared(psi) - 1.0) <= tolerance;
}

WaveFunction make_gaussian_packet(const LatticeGrid& grid, double x0, double sigma, double k0) {
  if (!(sigma >= 2.0 * grid.dx())) {
    std::ostringstream msg;
    msg << "sigma=" << sigma << " is below 2*dx=" << 2.0 * grid.dx();
    throw CollapseError(ErrorKind::packet_too_narrow, msg.str());
  }
  if (x0 < grid.x_min() + 4.0 * sigma || x0 > grid.x_max() - 4.0 * sigma) {
    std::ostringstream msg;
    msg << "x0=" << x0 << " must lie in [" << grid.x_min() + 4.0 * sigma << ", "
        << grid.x_max() - 4.0 * sigma << "]";
    throw CollapseError(ErrorKind::packet_outside_grid, msg.str());
  }
  std::vector<Complex> amps(grid.n_sites());
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double x = grid.x(i);
    const double u = x - x0;
    amps[i] = std::exp(-u * u / (4.0 * sigma * sigma)) * std::polar(1.0, k0 * x);
  }
  return normalized(WaveFunction(grid, std::move(amps)));
}

WaveFunction make_site_delta(const LatticeGrid& grid, std::size_t site) {
  if (site >= grid.n_sites()) {
    throw CollapseError(ErrorKind::invalid_argument, "site index outside grid");
  }
  WaveFunction psi(grid);
  psi[site] = 1.0 / std::sqrt(grid.dx());
  return psi;
}

WaveFunction superpose(Complex a, const WaveFunction& psi1, Complex b, const WaveFunction& psi2) {
  if (!(psi1.grid() == psi2.grid())) {
    throw CollapseError(ErrorKind::grid_mismatch, "superposed states live on different grids");
  }
  WaveFunction out(psi1.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * psi1[i] + b * psi2[i];
  return normalized(std::move(out));
}

std::vector<double> mass_density(const WaveFunction& psi, double mass) {
  std::vector<double> rho(psi.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = mass * std::norm(psi[i]);
  return rho;
}

std::vector<double> probability_density(const WaveFunction& psi) { return mass_density(psi, 1.0); }

double position_mean(const WaveFunction& psi) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double p = std::norm(psi[i]);
    num += p * psi.grid().x(i);
    den += p;
  }
  return num / den;
}

double position_variance(const WaveFunction& psi) {
  const double mean = position_mean(psi);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double p = std::norm(psi[i]);
    const double u = psi.grid().x(i) - mean;
    num += p * u * u;
    den += p;
  }
  return num / den;
}

double wavenumber_mean(const WaveFunction& psi) {
  const auto n = psi.size();
  auto& plan = detail::thread_plan(n);
  auto buf = plan.buffer();
  std::copy(psi.amplitudes().begin(), psi.amplitudes().end(), buf.begin());
  plan.forward();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::norm(buf[j]);
    num += w * detail::fft_wavenumber(j, n, psi.grid().length());
    den += w;
  }
  return num / den;
}

std::pair<double, double> half_line_masses(const WaveFunction& psi, double boundary) {
  double left = 0.0;
  double right = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double p = std::norm(psi[i]);
    (psi.grid().x(i) < boundary ? left : right) += p;
  }
  const double dx = psi.grid().dx();
  return {left * dx, right * dx};
}

std::size_t count_density_peaks(const WaveFunction& psi, double rel_threshold) {
  const auto rho = probability_density(psi);
  const double peak = *std::max_element(rho.begin(), rho.end());
  if (peak <= 0.0) return 0;
  const std::size_t n = rho.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = rho[(i + n - 1) % n];
    const double next = rho[(i + 1) % n];
    // Plateaus count once: strict on the left, non-strict on the right.
    if (rho[i] > prev && rho[i] >= next && rho[i] > rel_threshold * peak) ++count;
  }
  return count;
}

}  // namespace collapse
