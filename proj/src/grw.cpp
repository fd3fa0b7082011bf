#include "collapse/grw.hpp"

#include "collapse/error.hpp"
#include "collapse/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace collapse {

double effective_rate(const CollapseParams& params) {
  return static_cast<double>(params.n_nucleons()) * params.lambda_rate();
}

std::vector<double> sample_jump_times(double rate, double t_final, RandomStream& rng) {
  if (!(rate >= 0.0)) throw CollapseError(ErrorKind::invalid_argument, "rate must be >= 0");
  if (!(t_final > 0.0)) throw CollapseError(ErrorKind::invalid_argument, "t_final must be > 0");
  std::vector<double> times;
  if (rate == 0.0) return times;
  double t = rng.exponential(rate);
  while (t <= t_final) {
    times.push_back(t);
    t += rng.exponential(rate);
  }
  return times;
}

namespace {
double jump_prefactor(double r_c) { return std::pow(std::numbers::pi * r_c * r_c, -0.25); }
}  // namespace

std::vector<double> jump_probability_density(const WaveFunction& psi, double r_c) {
  if (!(r_c > 0.0)) throw CollapseError(ErrorKind::invalid_argument, "r_c must be positive");
  const auto& grid = psi.grid();
  // |L(d)|^2 = (pi r_c^2)^(-1/2) exp(-d^2/r_c^2), a Gaussian of standard deviation r_c/sqrt(2).
  const double pref = jump_prefactor(r_c);
  detail::CircularKernel kernel(grid, detail::gaussian_min_image(grid, r_c / std::sqrt(2.0), pref * pref));
  auto p = kernel.convolve(probability_density(psi));
  for (auto& v : p) v = std::max(v, 0.0);  // FFT round-off in far tails
  return p;
}

std::size_t sample_site(std::span<const double> p, RandomStream& rng) {
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  const double total = cdf.back();
  if (!(total > 0.0)) throw CollapseError(ErrorKind::invalid_argument, "density has no mass");
  const double u = rng.uniform() * total;
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min(static_cast<std::size_t>(it - cdf.begin()), p.size() - 1);
}

WaveFunction apply_jump(const WaveFunction& psi, double center, double r_c) {
  const auto& grid = psi.grid();
  if (!grid.contains(center)) {
    std::ostringstream msg;
    msg << "jump center " << center << " outside grid";
    throw CollapseError(ErrorKind::invalid_argument, msg.str());
  }
  const double pref = jump_prefactor(r_c);
  WaveFunction out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d = grid.periodic_offset(grid.x(i), center);
    out[i] = psi[i] * (pref * std::exp(-d * d / (2.0 * r_c * r_c)));
  }
  const double n2 = norm_squared(out);
  if (!(std::sqrt(n2) >= 1e-12)) {
    throw CollapseError(ErrorKind::collapsed_to_zero, "jump left a state of norm < 1e-12");
  }
  out *= 1.0 / std::sqrt(n2);
  return out;
}

JumpEvent perform_jump(WaveFunction& psi, double time, double r_c, RandomStream& rng,
                       const std::optional<TwoLobeBasis>& lobes) {
  JumpEvent event;
  event.time = time;
  event.pre_jump_norm_sq = norm_squared(psi);
  const auto p = jump_probability_density(psi, r_c);
  event.center = psi.grid().x(sample_site(p, rng));
  if (lobes) event.lobe_label = event.center < lobes->boundary() ? kLeftLobe : kRightLobe;
  psi = apply_jump(psi, event.center, r_c);
  return event;
}

TrajectoryResult run_grw_trajectory(const WaveFunction& psi0, const HamiltonianSpec& h,
                                    const CollapseParams& params, double t_final, double dt, RandomStream& rng,
                                    const TrajectoryOptions& options) {
  if (!is_normalized(psi0, 1e-8)) throw CollapseError(ErrorKind::invalid_argument, "initial state not normalized");
  validate_sample_times(options.sample_times, t_final);
  SplitStepPropagator propagator(psi0.grid(), h);
  if (!(dt > 0.0) || dt > propagator.dt_max() * (1.0 + 1e-12)) {
    throw CollapseError(ErrorKind::unstable_dt, "dt outside the propagator stability bound");
  }

  const auto jump_times = sample_jump_times(effective_rate(params), t_final, rng);

  TrajectoryResult result{psi0};
  result.sample_times = options.sample_times;
  WaveFunction& psi = result.final_state;
  double now = 0.0;
  std::size_t next_jump = 0;
  std::size_t next_sample = 0;

  auto advance_to = [&](double t) {
    if (t > now) evolve_unitary(psi, propagator, t - now, dt);
    now = t;
  };

  while (next_jump < jump_times.size() || next_sample < options.sample_times.size()) {
    const bool jump_first = next_jump < jump_times.size() &&
                            (next_sample >= options.sample_times.size() ||
                             jump_times[next_jump] <= options.sample_times[next_sample]);
    if (jump_first) {
      advance_to(jump_times[next_jump]);
      result.jumps.push_back(perform_jump(psi, now, params.r_c(), rng, options.lobes));
      ++next_jump;
    } else {
      advance_to(options.sample_times[next_sample]);
      result.observables_series.push_back(sample_observables(psi, now, options, result.jumps.size()));
      ++next_sample;
    }
  }
  advance_to(t_final);
  result.final_time = t_final;
  if (options.lobes) {
    const auto [left, right] = half_line_masses(psi, options.lobes->boundary());
    result.outcome = right > left ? kRightLobe : kLeftLobe;
  }
  return result;
}

}  // namespace collapse
