#include "collapse/trajectory.hpp"

#include "collapse/error.hpp"

#include <tuple>

namespace collapse {

ObservableSample sample_observables(const WaveFunction& psi, double t, const TrajectoryOptions& options,
                                    std::size_t jump_count) {
  ObservableSample s;
  s.time = t;
  s.mean_x = position_mean(psi);
  s.var_x = position_variance(psi);
  const double boundary = options.lobes ? options.lobes->boundary() : psi.grid().midpoint();
  std::tie(s.left_mass, s.right_mass) = half_line_masses(psi, boundary);
  if (options.lobes) s.rho = reduce_to_two_lobes(psi, *options.lobes);
  s.jump_count = jump_count;
  return s;
}

void validate_sample_times(const std::vector<double>& sample_times, double t_final) {
  double prev = 0.0;
  for (double t : sample_times) {
    if (!(t >= prev) || t > t_final) {
      throw CollapseError(ErrorKind::invalid_argument, "sample times must be sorted and within [0, t_final]");
    }
    prev = t;
  }
}

}  // namespace collapse
