#pragma once

#include "collapse/lattice.hpp"
#include "collapse/observables.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace collapse {

inline constexpr int kLeftLobe = 0;
inline constexpr int kRightLobe = 1;

/// One discrete localization event.
struct JumpEvent {
  double time = 0.0;
  double center = 0.0;
  double pre_jump_norm_sq = 1.0;
  std::optional<int> lobe_label;  // kLeftLobe / kRightLobe when a lobe frame is set

  friend bool operator==(const JumpEvent&, const JumpEvent&) = default;
};

struct ObservableSample {
  double time = 0.0;
  double mean_x = 0.0;
  double var_x = 0.0;
  double left_mass = 0.0;
  double right_mass = 0.0;
  TwoLobeDensityMatrix rho;  // zero unless a lobe frame is set
  std::size_t jump_count = 0;
};

/// Renormalization bookkeeping of the stochastic integrator.
struct NormDiagnostics {
  std::size_t steps = 0;
  /// Sum over steps of | ||phi|| - 1 | before renormalization.
  double cumulative_correction = 0.0;
  double max_step_correction = 0.0;
  /// Sum over steps of E[||phi||^2 - 1 | psi], the conditional mean norm drift.
  double cumulative_expected_correction = 0.0;
};

struct TrajectoryOptions {
  /// Sorted, within [0, t_final]. Observables are recorded exactly at these times.
  std::vector<double> sample_times;
  std::optional<TwoLobeBasis> lobes;
  /// Stop as soon as either lobe holds more than this probability mass.
  std::optional<double> absorption_threshold;
};

struct TrajectoryResult {
  explicit TrajectoryResult(WaveFunction initial) : final_state(std::move(initial)) {}

  WaveFunction final_state;
  double final_time = 0.0;
  std::vector<JumpEvent> jumps;
  std::vector<double> sample_times;
  std::vector<ObservableSample> observables_series;
  /// Surviving lobe (absorbed, or larger final mass) when a lobe frame is set.
  std::optional<int> outcome;
  bool absorbed = false;
  NormDiagnostics norm;
};

ObservableSample sample_observables(const WaveFunction& psi, double t, const TrajectoryOptions& options,
                                    std::size_t jump_count);

/// Throws invalid_argument unless the sample times are sorted and inside [0, t_final].
void validate_sample_times(const std::vector<double>& sample_times, double t_final);

}  // namespace collapse
