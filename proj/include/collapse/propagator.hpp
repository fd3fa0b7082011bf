#pragma once

#include "collapse/lattice.hpp"

#include <vector>

namespace collapse {

/// H = -hbar^2/(2 mass) d^2/dx^2 + V(x). With kinetic = false and an empty
/// potential, H = 0.
struct HamiltonianSpec {
  double mass = 1.0;
  double hbar = 1.0;
  std::vector<double> potential;  // empty means V = 0
  bool kinetic = true;

  static HamiltonianSpec free_particle(double mass = 1.0, double hbar = 1.0);
  static HamiltonianSpec zero();
  static HamiltonianSpec harmonic(const LatticeGrid& grid, double mass, double omega, double center = 0.0,
                                  double hbar = 1.0);

  bool is_zero() const noexcept;
  /// Throws invalid_argument on non-positive mass/hbar, wrong length or non-finite V.
  void validate(const LatticeGrid& grid) const;

  friend bool operator==(const HamiltonianSpec&, const HamiltonianSpec&) = default;
};

/// Largest step accepted by the split-step scheme: the kinetic phase at the
/// Nyquist wavenumber and the potential phase at max|V| both stay below pi.
double unitary_dt_max(const HamiltonianSpec& h, const LatticeGrid& grid);

/// Strang split-step Fourier propagator, exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2).
/// Unitary by construction and second order in dt. Caches phase tables for the
/// most recent dt.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const LatticeGrid& grid, HamiltonianSpec h);

  const HamiltonianSpec& hamiltonian() const noexcept { return h_; }
  double dt_max() const noexcept { return dt_max_; }
  /// Throws unstable_dt when dt <= 0 or dt > dt_max().
  void step(WaveFunction& psi, double dt);

 private:
  void prepare(double dt);

  LatticeGrid grid_;
  HamiltonianSpec h_;
  double dt_max_;
  double cached_dt_ = 0.0;
  std::vector<Complex> half_potential_;
  std::vector<Complex> kinetic_;
};

WaveFunction step_unitary(const WaveFunction& psi, const HamiltonianSpec& h, double dt);

/// ceil(t_span/dt) steps; the last one is shortened to land exactly on t_span.
WaveFunction evolve_unitary(const WaveFunction& psi, const HamiltonianSpec& h, double t_span, double dt);
void evolve_unitary(WaveFunction& psi, SplitStepPropagator& propagator, double t_span, double dt);

/// <H> computed spectrally for the kinetic part.
double energy_expectation(const WaveFunction& psi, const HamiltonianSpec& h);

/// Number of steps and size of the final step used to cover t_span with step dt.
struct StepSchedule {
  std::size_t full_steps;
  double last_step;  // 0 when t_span is an exact multiple of dt
};
StepSchedule make_schedule(double t_span, double dt);

}  // namespace collapse
