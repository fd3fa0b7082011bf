#include "collapse/csl.hpp"

#include "collapse/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace collapse {

namespace {
double compute_self_overlap(std::span<const double> g, double dx) {
  double sum = 0.0;
  for (double v : g) sum += v * v;
  return sum * dx;
}
}  // namespace

SmearingKernel::SmearingKernel(const LatticeGrid& grid, double r_c)
    : grid_(grid),
      r_c_(r_c),
      kernel_(grid, detail::gaussian_periodized(grid, r_c, 1.0 / (std::sqrt(2.0 * std::numbers::pi) * r_c))),
      self_overlap_(compute_self_overlap(kernel_.values(), grid.dx())) {
  if (!(r_c > 0.0)) throw CollapseError(ErrorKind::invalid_argument, "r_c must be positive");
}

void sample_wiener_step(const LatticeGrid& grid, double dt, RandomStream& rng, WienerField& out) {
  if (!(dt > 0.0)) throw CollapseError(ErrorKind::invalid_argument, "Wiener step needs dt > 0");
  const double sd = std::sqrt(dt / grid.dx());
  out.increments.resize(grid.n_sites());
  for (auto& w : out.increments) w = sd * rng.normal();
}

WienerField sample_wiener_step(const LatticeGrid& grid, double dt, RandomStream& rng) {
  WienerField field;
  sample_wiener_step(grid, dt, rng, field);
  return field;
}

WaveFunction apply_mass_density_operator(const WaveFunction& psi, const SmearingKernel& kernel,
                                         std::size_t x_index, double mass) {
  const std::size_t n = psi.size();
  if (!(psi.grid() == kernel.grid())) throw CollapseError(ErrorKind::grid_mismatch, "kernel grid differs");
  if (x_index >= n) throw CollapseError(ErrorKind::invalid_argument, "x_index outside grid");
  const auto g = kernel.values();
  WaveFunction out(psi.grid());
  for (std::size_t q = 0; q < n; ++q) out[q] = mass * g[(q + n - x_index) % n] * psi[q];
  return out;
}

double csl_coupling_sq(const CollapseParams& params) {
  const double ratio = params.mass() / params.m0();
  return params.gamma() * ratio * ratio;
}

double csl_decoherence_rate(const CollapseParams& params, double separation, double period) {
  const double r = params.r_c();
  auto overlap = [r](double y) { return std::exp(-y * y / (4.0 * r * r)) / (2.0 * std::sqrt(std::numbers::pi) * r); };
  double sum = 0.0;
  if (period > 0.0) {
    const auto reach = static_cast<long long>(std::ceil(60.0 * r / period)) + 1;
    for (long long m = -reach; m <= reach; ++m) {
      const double shift = static_cast<double>(m) * period;
      sum += overlap(shift) - overlap(separation + shift);
    }
  } else {
    sum = overlap(0.0) - overlap(separation);
  }
  return csl_coupling_sq(params) * sum;
}

double csl_decoherence_rate_lattice(const CollapseParams& params, const SmearingKernel& kernel,
                                    std::size_t site_separation) {
  const auto g = kernel.values();
  const std::size_t n = g.size();
  double cross = 0.0;
  for (std::size_t j = 0; j < n; ++j) cross += g[j] * g[(j + site_separation) % n];
  cross *= kernel.grid().dx();
  return csl_coupling_sq(params) * (kernel.self_overlap() - cross);
}

double csl_dt_max(const CollapseParams& params, const SmearingKernel& kernel, const HamiltonianSpec& h) {
  double bound = unitary_dt_max(h, kernel.grid());
  const double strength = csl_coupling_sq(params) * kernel.self_overlap();
  if (strength > 0.0) bound = std::min(bound, kCollapseStepBudget / strength);
  return bound;
}

CslIntegrator::CslIntegrator(HamiltonianSpec h, const CollapseParams& params, SmearingKernel kernel)
    : kernel_(std::move(kernel)),
      propagator_(kernel_.grid(), std::move(h)),
      coupling_(std::sqrt(csl_coupling_sq(params))),
      dt_max_(csl_dt_max(params, kernel_, propagator_.hamiltonian())),
      spectrum_scratch_(kernel_.grid().n_sites()) {}

CslStepDiagnostics CslIntegrator::step(WaveFunction& psi, double dt, const WienerField& dW) {
  const std::size_t n = psi.size();
  if (!(dt > 0.0) || dt > dt_max_ * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "dt=" << dt << " outside (0, " << dt_max_ << "]";
    throw CollapseError(ErrorKind::unstable_dt, msg.str());
  }
  if (dW.increments.size() != n) throw CollapseError(ErrorKind::grid_mismatch, "Wiener field size differs");
  if (!(psi.grid() == kernel_.grid())) throw CollapseError(ErrorKind::grid_mismatch, "kernel grid differs");

  const double dx = kernel_.grid().dx();
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto g_hat = kernel_.spectrum();
  auto& plan = detail::thread_plan(n);
  auto buf = plan.buffer();

  // Pack rho (real part) and dW (imaginary part) into one transform.
  for (std::size_t i = 0; i < n; ++i) buf[i] = Complex(std::norm(psi[i]), dW.increments[i]);
  plan.forward();
  auto& z = spectrum_scratch_;
  std::copy(buf.begin(), buf.end(), z.begin());

  // G = g*rho is <M>/mass, A = g*dW, B = g*G. Scalars by Parseval:
  // s0 = sum G dW dx, q0 = sum G^2 dx.
  double s0 = 0.0;
  double q0 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex zk = z[k];
    const Complex zc = std::conj(z[(n - k) % n]);
    const Complex rho_hat = 0.5 * (zk + zc);
    const Complex dw_hat = Complex(0.0, -0.5) * (zk - zc);
    const Complex big_g = g_hat[k] * rho_hat;
    s0 += (big_g * std::conj(dw_hat)).real();
    q0 += std::norm(big_g);
    buf[k] = (g_hat[k] * dw_hat + Complex(0.0, 1.0) * (g_hat[k] * big_g)) * inv_n;
  }
  s0 *= dx * inv_n;
  q0 *= dx * inv_n;
  plan.backward();

  const double a = coupling_;
  const double a2 = a * a;
  const double c0 = kernel_.self_overlap();
  double norm_sq = 0.0;
  double expected = 0.0;
  auto amps = psi.amplitudes();
  for (std::size_t i = 0; i < n; ++i) {
    const double smeared_noise = buf[i].real();
    const double smeared_mean = buf[i].imag();
    const double drift = -0.5 * a2 * (c0 - 2.0 * smeared_mean + q0);
    const double rho = std::norm(amps[i]);
    expected += rho * drift * drift;
    amps[i] *= 1.0 + a * (smeared_noise - s0) + drift * dt;
    norm_sq += std::norm(amps[i]);
  }
  norm_sq *= dx;

  CslStepDiagnostics diag;
  diag.expected_norm_sq_correction = expected * dx * dt * dt;
  const double norm = std::sqrt(norm_sq);
  diag.norm_correction = norm - 1.0;
  if (!(std::abs(diag.norm_correction) <= kMaxStepNormCorrection)) {
    std::ostringstream msg;
    msg << "renormalization correction " << diag.norm_correction << " exceeds " << kMaxStepNormCorrection;
    throw CollapseError(ErrorKind::unstable_dt, msg.str());
  }
  psi *= 1.0 / norm;
  if (!propagator_.hamiltonian().is_zero()) propagator_.step(psi, dt);
  return diag;
}

WaveFunction csl_step(const WaveFunction& psi, const HamiltonianSpec& h, const CollapseParams& params,
                      const SmearingKernel& kernel, double dt, const WienerField& dW) {
  if (!is_normalized(psi, 1e-8)) throw CollapseError(ErrorKind::invalid_argument, "csl_step needs a normalized state");
  CslIntegrator integrator(h, params, kernel);
  WaveFunction out = psi;
  integrator.step(out, dt, dW);
  return out;
}

TrajectoryResult run_csl_trajectory(const WaveFunction& psi0, const HamiltonianSpec& h,
                                    const CollapseParams& params, const SmearingKernel& kernel, double t_final,
                                    double dt, RandomStream& rng, const TrajectoryOptions& options) {
  if (!is_normalized(psi0, 1e-8)) throw CollapseError(ErrorKind::invalid_argument, "initial state not normalized");
  validate_sample_times(options.sample_times, t_final);
  CslIntegrator integrator(h, params, kernel);
  if (!(dt > 0.0) || dt > integrator.dt_max() * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "dt=" << dt << " exceeds the integrator bound " << integrator.dt_max();
    throw CollapseError(ErrorKind::unstable_dt, msg.str());
  }
  const auto& grid = psi0.grid();
  const double boundary = options.lobes ? options.lobes->boundary() : grid.midpoint();

  TrajectoryResult result{psi0};
  result.sample_times = options.sample_times;
  WaveFunction& psi = result.final_state;
  WienerField dW;
  double now = 0.0;

  auto absorbed_lobe = [&]() -> std::optional<int> {
    if (!options.absorption_threshold) return std::nullopt;
    const auto [left, right] = half_line_masses(psi, boundary);
    if (right > *options.absorption_threshold) return kRightLobe;
    if (left > *options.absorption_threshold) return kLeftLobe;
    return std::nullopt;
  };

  auto one_step = [&](double h_step) {
    sample_wiener_step(grid, h_step, rng, dW);
    const auto diag = integrator.step(psi, h_step, dW);
    auto& norm = result.norm;
    ++norm.steps;
    norm.cumulative_correction += std::abs(diag.norm_correction);
    norm.max_step_correction = std::max(norm.max_step_correction, std::abs(diag.norm_correction));
    norm.cumulative_expected_correction += diag.expected_norm_sq_correction;
    now += h_step;
    if (auto lobe = absorbed_lobe()) {
      result.outcome = lobe;
      result.absorbed = true;
    }
  };

  // Returns false once absorbed.
  auto advance_to = [&](double target) {
    const auto schedule = make_schedule(target - now, dt);
    for (std::size_t s = 0; s < schedule.full_steps; ++s) {
      one_step(dt);
      if (result.absorbed) return false;
    }
    if (schedule.last_step > 0.0) {
      one_step(schedule.last_step);
      if (result.absorbed) return false;
    }
    now = target;
    return true;
  };

  if (auto lobe = absorbed_lobe()) {
    result.outcome = lobe;
    result.absorbed = true;
  }
  for (double t : options.sample_times) {
    if (result.absorbed || !advance_to(t)) break;
    result.observables_series.push_back(sample_observables(psi, now, options, 0));
  }
  if (!result.absorbed) advance_to(t_final);
  result.final_time = now;
  if (!result.absorbed && options.lobes) {
    const auto [left, right] = half_line_masses(psi, boundary);
    result.outcome = right > left ? kRightLobe : kLeftLobe;
  }
  return result;
}

}  // namespace collapse
