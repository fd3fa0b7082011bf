#pragma once

#include "collapse/fft.hpp"
#include "collapse/lattice.hpp"
#include "collapse/params.hpp"
#include "collapse/propagator.hpp"
#include "collapse/rng.hpp"
#include "collapse/trajectory.hpp"

#include <optional>
#include <vector>

namespace collapse {

/// Smearing profile g(x) = (sqrt(2 pi) r_c)^(-1) exp(-x^2 / (2 r_c^2)),
/// periodized over lattice images so that sum g dx = 1 on any grid.
class SmearingKernel {
 public:
  SmearingKernel(const LatticeGrid& grid, double r_c);

  const LatticeGrid& grid() const noexcept { return grid_; }
  double r_c() const noexcept { return r_c_; }
  /// g at each site offset (index j is offset j*dx, wrapped).
  std::span<const double> values() const noexcept { return kernel_.values(); }
  std::span<const double> spectrum() const noexcept { return kernel_.spectrum(); }
  /// sum_j g_j^2 dx, the lattice value of int g^2.
  double self_overlap() const noexcept { return self_overlap_; }
  /// (g * f)_i on the lattice.
  std::vector<double> smear(std::span<const double> f) const { return kernel_.convolve(f); }

 private:
  LatticeGrid grid_;
  double r_c_;
  detail::CircularKernel kernel_;
  double self_overlap_;
};

/// Per-site Wiener increments for one step: i.i.d. Normal(0, dt/dx).
struct WienerField {
  std::vector<double> increments;
};

WienerField sample_wiener_step(const LatticeGrid& grid, double dt, RandomStream& rng);
void sample_wiener_step(const LatticeGrid& grid, double dt, RandomStream& rng, WienerField& out);

/// (M(x) psi)(q) = mass * g(q - x) * psi(q) at x = grid.x(x_index). Not normalized.
WaveFunction apply_mass_density_operator(const WaveFunction& psi, const SmearingKernel& kernel,
                                         std::size_t x_index, double mass);

/// Squared stochastic coupling gamma * mass^2 / m0^2.
double csl_coupling_sq(const CollapseParams& params);

/// Off-diagonal decay rate between points a distance `separation` apart,
/// continuum form on a line of the given period (infinite when period <= 0):
///   rate = coupling_sq * sum_m [G(m L) - G(d + m L)],  G(y) = exp(-y^2/(4 r_c^2)) / (2 sqrt(pi) r_c).
/// For d >> r_c on an infinite line this is lambda * (mass/m0)^2.
double csl_decoherence_rate(const CollapseParams& params, double separation, double period = 0.0);
/// Same rate evaluated exactly on the lattice kernel for sites `site_separation` apart.
double csl_decoherence_rate_lattice(const CollapseParams& params, const SmearingKernel& kernel,
                                    std::size_t site_separation);

/// Step bound of the stochastic integrator: the unitary bound, and
/// coupling_sq * self_overlap * dt <= kCollapseStepBudget.
inline constexpr double kCollapseStepBudget = 1e-4;
/// A single step whose renormalization factor deviates from 1 by more than this is rejected.
inline constexpr double kMaxStepNormCorrection = 1e-3;
double csl_dt_max(const CollapseParams& params, const SmearingKernel& kernel, const HamiltonianSpec& h);

struct CslStepDiagnostics {
  /// ||phi|| - 1 before renormalization.
  double norm_correction = 0.0;
  /// E[||phi||^2 - 1 | psi] = dt^2 sum rho_i D_i^2 dx, D the deterministic collapse drift.
  double expected_norm_sq_correction = 0.0;
};

/// Euler-Maruyama integrator for the mass-proportional collapse equation
///   d psi = [ -i H dt / hbar
///             + (sqrt(gamma)/m0) int dx (M(x) - <M(x)>) dW(x)
///             - (gamma / (2 m0^2)) int dx (M(x) - <M(x)>)^2 dt ] psi
/// read in the Ito sense, with <M(x)> taken from the incoming state. The
/// collapse increment acts first; the Hamiltonian part is applied as one
/// split-step unitary factor; the result is renormalized.
///
/// All x-integrals reduce to circular convolutions with g, so each step costs
/// one forward and one inverse FFT (plus the unitary factor when H != 0).
class CslIntegrator {
 public:
  CslIntegrator(HamiltonianSpec h, const CollapseParams& params, SmearingKernel kernel);

  const SmearingKernel& kernel() const noexcept { return kernel_; }
  double dt_max() const noexcept { return dt_max_; }

  /// Throws unstable_dt if dt exceeds dt_max() or the renormalization
  /// correction exceeds kMaxStepNormCorrection.
  CslStepDiagnostics step(WaveFunction& psi, double dt, const WienerField& dW);

 private:
  SmearingKernel kernel_;
  SplitStepPropagator propagator_;
  double coupling_;  // sqrt(gamma) * mass / m0
  double dt_max_;
  std::vector<Complex> spectrum_scratch_;
};

WaveFunction csl_step(const WaveFunction& psi, const HamiltonianSpec& h, const CollapseParams& params,
                      const SmearingKernel& kernel, double dt, const WienerField& dW);

/// Repeated csl_step with one Wiener field drawn per step from `rng`. Steps
/// are shortened to land exactly on each sample time and on t_final.
TrajectoryResult run_csl_trajectory(const WaveFunction& psi0, const HamiltonianSpec& h,
                                    const CollapseParams& params, const SmearingKernel& kernel, double t_final,
                                    double dt, RandomStream& rng, const TrajectoryOptions& options = {});

}  // namespace collapse
