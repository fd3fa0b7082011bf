#include "collapse/harness/experiment.hpp"

#include "collapse/csl.hpp"
#include "collapse/grw.hpp"

namespace collapse::harness {

std::vector<double> effective_sample_times(const ExperimentConfig& config) {
  if (!config.sample_times.empty()) return config.sample_times;
  return {0.0, config.t_final};
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers) {
  if (auto violations = validate(config); !violations.empty()) {
    throw ConfigError(ErrorKind::validation_error, std::move(violations));
  }
  const auto psi0 = make_initial_state(config);
  const auto h = make_hamiltonian(config);
  auto params = make_params(config);
  if (config.model == Model::schrodinger) params = params.with_lambda(0.0);

  TrajectoryOptions options;
  options.sample_times = effective_sample_times(config);
  options.lobes = make_lobe_basis(config);
  options.absorption_threshold = config.absorption_threshold;

  TrajectoryFn fn;
  if (config.model == Model::csl) {
    const SmearingKernel kernel(psi0.grid(), params.r_c());
    fn = [=](std::size_t, RandomStream& rng) {
      return run_csl_trajectory(psi0, h, params, kernel, config.t_final, config.dt, rng, options);
    };
  } else {
    fn = [=](std::size_t, RandomStream& rng) {
      return run_grw_trajectory(psi0, h, params, config.t_final, config.dt, rng, options);
    };
  }

  ExperimentResult result{config, {}, run_ensemble(config.n_trajectories, workers, config.master_seed, fn)};
  result.summary = result.records.summarize();
  return result;
}

}  // namespace collapse::harness
