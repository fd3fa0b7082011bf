#include "collapse/oracle.hpp"

#include "collapse/csl.hpp"
#include "collapse/error.hpp"

namespace collapse {

DecayCalibration calibrate_decay_rate(const CollapseParams& params, std::size_t n_trajectories, double t_final,
                                      std::size_t n_samples, std::uint64_t master_seed, std::size_t workers) {
  if (n_samples < 5) throw CollapseError(ErrorKind::invalid_argument, "calibration needs >= 5 sample times");
  constexpr std::size_t kSites = 8;
  constexpr std::size_t kLeftSite = 2;
  constexpr std::size_t kRightSite = 6;
  const LatticeGrid grid(kSites, params.r_c(), 0.0);
  const SmearingKernel kernel(grid, params.r_c());
  const auto h = HamiltonianSpec::zero();

  const auto left = make_site_delta(grid, kLeftSite);
  const auto right = make_site_delta(grid, kRightSite);
  const auto psi0 = superpose(1.0, left, 1.0, right);

  TrajectoryOptions options;
  options.lobes.emplace(left, right, 0.5 * (grid.x(kLeftSite) + grid.x(kRightSite)));
  for (std::size_t k = 0; k < n_samples; ++k) {
    options.sample_times.push_back(t_final * static_cast<double>(k) / static_cast<double>(n_samples - 1));
  }
  const double dt = csl_dt_max(params, kernel, h);

  const auto ensemble = run_ensemble(n_trajectories, workers, master_seed, [&](std::size_t, RandomStream& rng) {
    return run_csl_trajectory(psi0, h, params, kernel, t_final, dt, rng, options);
  });
  const auto fit = coherence_decay_fit(ensemble.summarize());

  DecayCalibration cal;
  cal.fitted_rate = fit.rate;
  cal.fit_r_squared = fit.r_squared;
  const double separation = grid.x(kRightSite) - grid.x(kLeftSite);
  cal.closed_form_rate = csl_decoherence_rate(params, separation, grid.length());
  cal.lattice_rate = csl_decoherence_rate_lattice(params, kernel, kRightSite - kLeftSite);
  cal.ratio = cal.fitted_rate / cal.closed_form_rate;
  cal.n_trajectories = n_trajectories;
  cal.t_final = t_final;
  return cal;
}

}  // namespace collapse
