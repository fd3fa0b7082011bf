#pragma once

#include "collapse/observables.hpp"
#include "collapse/rng.hpp"
#include "collapse/trajectory.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace collapse {

/// What the ensemble keeps from one trajectory.
struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::vector<ObservableSample> series;
  std::vector<JumpEvent> jumps;
  std::optional<int> outcome;
  bool absorbed = false;
  double final_time = 0.0;
  NormDiagnostics norm;
};

struct EnsembleSummary {
  std::size_t n_trajectories = 0;
  std::vector<double> sample_times;
  /// Mean right-lobe mass per sample time, with its standard error.
  std::vector<double> mean_lobe_mass;
  std::vector<double> mean_lobe_mass_stderr;
  /// {left, right}; empty when no trajectory carries an outcome label.
  std::vector<double> outcome_frequencies;
  /// |mean rho_LR| per sample time, with its standard error.
  std::vector<double> coherence_series;
  std::vector<double> coherence_stderr;
  std::vector<TwoLobeDensityMatrix> mean_rho;
  std::vector<double> var_x_median_series;
  std::vector<double> mean_jump_count;

  friend bool operator==(const EnsembleSummary&, const EnsembleSummary&) = default;
};

/// Per-trajectory records keyed by trajectory index.
///
/// merge() is a keyed union, so it is associative and commutative, and
/// summarize() folds in index order: the summary is independent of how the
/// trajectories were partitioned across workers.
class EnsembleAccumulator {
 public:
  void add(std::size_t index, TrajectoryRecord record);
  void add(std::size_t index, const TrajectoryResult& result, std::uint64_t seed);
  /// Throws invalid_argument on a duplicate index.
  void merge(const EnsembleAccumulator& other);

  std::size_t size() const noexcept { return records_.size(); }
  const std::map<std::size_t, TrajectoryRecord>& records() const noexcept { return records_; }
  std::vector<int> outcomes() const;

  EnsembleSummary summarize() const;

  std::vector<double> total_jump_counts() const;

 private:
  std::map<std::size_t, TrajectoryRecord> records_;
};

using TrajectoryFn = std::function<TrajectoryResult(std::size_t index, RandomStream& rng)>;

/// Run n trajectories over `workers` threads (static round-robin partition).
/// Trajectory k draws from RandomStream(derive_trajectory_seed(master_seed, k)).
/// The first exception thrown by any trajectory is rethrown with its index.
EnsembleAccumulator run_ensemble(std::size_t n_trajectories, std::size_t workers, std::uint64_t master_seed,
                                 const TrajectoryFn& fn);

struct DecayFit {
  double rate = 0.0;
  double r_squared = 0.0;
  std::size_t points_used = 0;
};

/// Least-squares fit of log(coherence) against time over the samples whose
/// coherence exceeds 10 standard errors. Throws insufficient_signal when
/// fewer than five samples qualify.
DecayFit coherence_decay_fit(const EnsembleSummary& summary);

}  // namespace collapse
