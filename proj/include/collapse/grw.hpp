#pragma once

#include "collapse/lattice.hpp"
#include "collapse/params.hpp"
#include "collapse/propagator.hpp"
#include "collapse/rng.hpp"
#include "collapse/trajectory.hpp"

#include <span>
#include <vector>

namespace collapse {

/// Collapse rate of a rigid composite: n_nucleons * lambda_rate.
double effective_rate(const CollapseParams& params);

/// Poisson event times on [0, t_final] built from i.i.d. exponential gaps.
std::vector<double> sample_jump_times(double rate, double t_final, RandomStream& rng);

/// p_i = ||L(x_i) psi||^2 with L(x) = (pi r_c^2)^(-1/4) exp(-(q - x)^2 / (2 r_c^2)).
/// For normalized psi, sum p_i dx = 1.
std::vector<double> jump_probability_density(const WaveFunction& psi, double r_c);

/// Inverse-CDF draw of a site index from a lattice density p (need not be normalized).
std::size_t sample_site(std::span<const double> p, RandomStream& rng);

/// L(center) psi / ||L(center) psi||. Throws collapsed_to_zero when the
/// unnormalized result has norm below 1e-12.
WaveFunction apply_jump(const WaveFunction& psi, double center, double r_c);

/// Draw a centre from jump_probability_density and localize psi there.
JumpEvent perform_jump(WaveFunction& psi, double time, double r_c, RandomStream& rng,
                       const std::optional<TwoLobeBasis>& lobes = std::nullopt);

/// Schrodinger evolution interrupted by Poisson-timed jumps at rate
/// effective_rate(params). Evolution is advanced exactly to each jump time.
///
/// Draw order on `rng`: all jump times first, then one uniform per jump for
/// its centre, in time order.
TrajectoryResult run_grw_trajectory(const WaveFunction& psi0, const HamiltonianSpec& h,
                                    const CollapseParams& params, double t_final, double dt, RandomStream& rng,
                                    const TrajectoryOptions& options = {});

}  // namespace collapse
