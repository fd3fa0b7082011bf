#pragma once

#include "collapse/ensemble.hpp"
#include "collapse/harness/config.hpp"

namespace collapse::harness {

struct ExperimentResult {
  ExperimentConfig config;
  EnsembleSummary summary;
  EnsembleAccumulator records;
};

/// Runs config.n_trajectories trajectories. Trajectory k uses the seed
/// derive_trajectory_seed(config.master_seed, k), so the result does not
/// depend on `workers`. The schrodinger model runs as GRW with lambda = 0.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers = 1);

/// Sample times actually used: the configured ones, or {0, t_final}.
std::vector<double> effective_sample_times(const ExperimentConfig& config);

}  // namespace collapse::harness
