#include "collapse/propagator.hpp"

#include "collapse/error.hpp"
#include "collapse/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace collapse {

HamiltonianSpec HamiltonianSpec::free_particle(double mass, double hbar) {
  return HamiltonianSpec{mass, hbar, {}, true};
}

HamiltonianSpec HamiltonianSpec::zero() { return HamiltonianSpec{1.0, 1.0, {}, false}; }

HamiltonianSpec HamiltonianSpec::harmonic(const LatticeGrid& grid, double mass, double omega, double center,
                                          double hbar) {
  std::vector<double> v(grid.n_sites());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double u = grid.x(i) - center;
    v[i] = 0.5 * mass * omega * omega * u * u;
  }
  return HamiltonianSpec{mass, hbar, std::move(v), true};
}

bool HamiltonianSpec::is_zero() const noexcept {
  return !kinetic && std::all_of(potential.begin(), potential.end(), [](double v) { return v == 0.0; });
}

void HamiltonianSpec::validate(const LatticeGrid& grid) const {
  if (!(mass > 0.0) || !(hbar > 0.0)) {
    throw CollapseError(ErrorKind::invalid_argument, "hamiltonian mass and hbar must be positive");
  }
  if (!potential.empty() && potential.size() != grid.n_sites()) {
    throw CollapseError(ErrorKind::grid_mismatch, "potential length differs from n_sites");
  }
  if (!std::all_of(potential.begin(), potential.end(), [](double v) { return std::isfinite(v); })) {
    throw CollapseError(ErrorKind::invalid_argument, "potential values must be finite");
  }
}

double unitary_dt_max(const HamiltonianSpec& h, const LatticeGrid& grid) {
  double bound = std::numeric_limits<double>::infinity();
  if (h.kinetic) {
    // hbar k_nyq^2 dt / 2m <= pi with k_nyq = pi/dx
    bound = std::min(bound, 2.0 * h.mass * grid.dx() * grid.dx() / (std::numbers::pi * h.hbar));
  }
  double vmax = 0.0;
  for (double v : h.potential) vmax = std::max(vmax, std::abs(v));
  if (vmax > 0.0) bound = std::min(bound, std::numbers::pi * h.hbar / vmax);
  return bound;
}

SplitStepPropagator::SplitStepPropagator(const LatticeGrid& grid, HamiltonianSpec h)
    : grid_(grid), h_(std::move(h)), dt_max_(unitary_dt_max(h_, grid)) {
  h_.validate(grid_);
}

void SplitStepPropagator::prepare(double dt) {
  if (dt == cached_dt_) return;
  const std::size_t n = grid_.n_sites();
  half_potential_.clear();
  if (!h_.potential.empty()) {
    half_potential_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      half_potential_[i] = std::polar(1.0, -0.5 * h_.potential[i] * dt / h_.hbar);
    }
  }
  kinetic_.clear();
  if (h_.kinetic) {
    kinetic_.resize(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double k = detail::fft_wavenumber(j, n, grid_.length());
      // FFT normalization folded into the kinetic phase.
      kinetic_[j] = std::polar(inv_n, -h_.hbar * k * k * dt / (2.0 * h_.mass));
    }
  }
  cached_dt_ = dt;
}

void SplitStepPropagator::step(WaveFunction& psi, double dt) {
  if (!(dt > 0.0) || dt > dt_max_ * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "dt=" << dt << " outside (0, " << dt_max_ << "]";
    throw CollapseError(ErrorKind::unstable_dt, msg.str());
  }
  if (!(psi.grid() == grid_)) {
    throw CollapseError(ErrorKind::grid_mismatch, "propagator built for a different grid");
  }
  prepare(dt);
  auto amps = psi.amplitudes();
  const std::size_t n = amps.size();
  if (!half_potential_.empty()) {
    for (std::size_t i = 0; i < n; ++i) amps[i] *= half_potential_[i];
  }
  if (!kinetic_.empty()) {
    auto& plan = detail::thread_plan(n);
    auto buf = plan.buffer();
    std::copy(amps.begin(), amps.end(), buf.begin());
    plan.forward();
    for (std::size_t j = 0; j < n; ++j) buf[j] *= kinetic_[j];
    plan.backward();
    std::copy(buf.begin(), buf.end(), amps.begin());
  }
  if (!half_potential_.empty()) {
    for (std::size_t i = 0; i < n; ++i) amps[i] *= half_potential_[i];
  }
}

WaveFunction step_unitary(const WaveFunction& psi, const HamiltonianSpec& h, double dt) {
  SplitStepPropagator prop(psi.grid(), h);
  WaveFunction out = psi;
  prop.step(out, dt);
  return out;
}

StepSchedule make_schedule(double t_span, double dt) {
  if (!(t_span >= 0.0)) throw CollapseError(ErrorKind::invalid_argument, "t_span must be >= 0");
  if (!(dt > 0.0)) throw CollapseError(ErrorKind::unstable_dt, "dt must be positive");
  if (t_span == 0.0) return {0, 0.0};
  // Absorb rounding so that e.g. 1.0/0.1 gives 10 full steps, not 9 plus a sliver.
  const double ratio = t_span / dt;
  const double whole = std::floor(ratio + 1e-9);
  const auto full = static_cast<std::size_t>(whole);
  double last = t_span - whole * dt;
  if (last <= 1e-9 * dt) last = 0.0;
  return {full, last};
}

void evolve_unitary(WaveFunction& psi, SplitStepPropagator& propagator, double t_span, double dt) {
  const auto schedule = make_schedule(t_span, dt);
  if (propagator.hamiltonian().is_zero()) return;
  for (std::size_t s = 0; s < schedule.full_steps; ++s) propagator.step(psi, dt);
  if (schedule.last_step > 0.0) propagator.step(psi, schedule.last_step);
}

WaveFunction evolve_unitary(const WaveFunction& psi, const HamiltonianSpec& h, double t_span, double dt) {
  SplitStepPropagator prop(psi.grid(), h);
  if (dt > prop.dt_max() * (1.0 + 1e-12)) {
    throw CollapseError(ErrorKind::unstable_dt, "dt exceeds the propagator stability bound");
  }
  WaveFunction out = psi;
  evolve_unitary(out, prop, t_span, dt);
  return out;
}

double energy_expectation(const WaveFunction& psi, const HamiltonianSpec& h) {
  const std::size_t n = psi.size();
  const double dx = psi.grid().dx();
  double potential = 0.0;
  for (std::size_t i = 0; i < h.potential.size(); ++i) potential += h.potential[i] * std::norm(psi[i]);
  potential *= dx;
  double kinetic = 0.0;
  if (h.kinetic) {
    auto& plan = detail::thread_plan(n);
    auto buf = plan.buffer();
    std::copy(psi.amplitudes().begin(), psi.amplitudes().end(), buf.begin());
    plan.forward();
    double weight = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double k = detail::fft_wavenumber(j, n, psi.grid().length());
      kinetic += std::norm(buf[j]) * k * k;
      weight += std::norm(buf[j]);
    }
    // Parseval: sum |psi_hat|^2 = n sum |psi|^2, so normalize against the norm.
    kinetic = kinetic / weight * norm_squared(psi) * h.hbar * h.hbar / (2.0 * h.mass);
  }
  return (kinetic + potential) / norm_squared(psi);
}

}  // namespace collapse
