#include "collapse/harness/verify.hpp"

#include "collapse/csl.hpp"
#include "collapse/ensemble.hpp"
#include "collapse/error.hpp"
#include "collapse/grw.hpp"
#include "collapse/harness/experiment.hpp"
#include "collapse/harness/serialize.hpp"
#include "collapse/oracle.hpp"
#include "collapse/params.hpp"
#include "collapse/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace collapse::harness {

namespace {

using Clock = std::chrono::steady_clock;

CheckResult finish(CheckResult r, Clock::time_point start) {
  r.passed = r.upper_bound ? r.measured <= r.tolerance : r.measured >= r.tolerance;
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// Cat used by the Born checks: 0.6|L> + 0.8|R>, packets at -5 and +5.
struct BornCat {
  LatticeGrid grid;
  WaveFunction psi;
  TwoLobeBasis lobes;
};

BornCat born_cat(std::size_t n_sites, double dx, double x_min) {
  const LatticeGrid grid(n_sites, dx, x_min);
  auto left = make_gaussian_packet(grid, -5.0, 1.0);
  auto right = make_gaussian_packet(grid, 5.0, 1.0);
  auto psi = superpose(0.6, left, 0.8, right);
  return {grid, psi, TwoLobeBasis::from_templates(std::move(left), std::move(right))};
}

constexpr double kBornRight = 0.64;

CheckResult born_result(const std::string& name, const std::vector<int>& outcomes) {
  const auto report = born_rule_test(outcomes, {1.0 - kBornRight, kBornRight});
  CheckResult r;
  r.name = name;
  r.quantity = "|right-lobe frequency - 0.64|";
  r.measured = std::abs(report.observed_right_frequency - kBornRight);
  r.tolerance = 3.0 * std::sqrt(kBornRight * (1.0 - kBornRight) / static_cast<double>(report.n));
  r.detail = "n = " + std::to_string(report.n) + ", frequency = " + num(report.observed_right_frequency) +
             ", chi2 = " + num(report.chi_square);
  return r;
}

// Two-lobe geometry of the decoherence checks: 64 sites, lobes at -4 and +4.
struct LobeGeometry {
  LatticeGrid grid{64, 0.3, -9.6};
  WaveFunction psi{grid};
  std::optional<TwoLobeBasis> lobes;
  double separation = 8.0;
  double t_final = 1.2;
  std::vector<double> sample_times;

  LobeGeometry() {
    auto left = make_gaussian_packet(grid, -4.0, 1.0);
    auto right = make_gaussian_packet(grid, 4.0, 1.0);
    psi = superpose(0.6, left, 0.8, right);
    lobes = TwoLobeBasis::from_templates(std::move(left), std::move(right));
    for (int k = 0; k <= 12; ++k) sample_times.push_back(t_final * k / 12.0);
  }

  TrajectoryOptions options() const {
    TrajectoryOptions o;
    o.sample_times = sample_times;
    o.lobes = lobes;
    return o;
  }
};

EnsembleSummary lobe_csl_ensemble(const LobeGeometry& geo, const CollapseParams& params, std::size_t n,
                                  std::uint64_t seed, std::size_t workers) {
  const SmearingKernel kernel(geo.grid, params.r_c());
  const auto h = HamiltonianSpec::zero();
  const double dt = csl_dt_max(params, kernel, h);
  const auto options = geo.options();
  return run_ensemble(n, workers, seed,
                      [&](std::size_t, RandomStream& rng) {
                        return run_csl_trajectory(geo.psi, h, params, kernel, geo.t_final, dt, rng, options);
                      })
      .summarize();
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

CheckResult check_completeness(std::size_t n_states, std::size_t n_sites, std::uint64_t seed) {
  const auto start = Clock::now();
  const LatticeGrid grid(n_sites, 0.1, -0.05 * static_cast<double>(n_sites));
  RandomStream rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < n_states; ++s) {
    WaveFunction psi(grid);
    const double sigma_lo = 2.0 * grid.dx();
    const double sigma = sigma_lo + rng.uniform() * 1.5;
    auto center = [&] { return grid.x_min() + 4.0 * sigma + rng.uniform() * (grid.x_max() - grid.x_min() - 8.0 * sigma); };
    switch (s % 3) {
      case 0:
        psi = make_gaussian_packet(grid, center(), sigma, 4.0 * (rng.uniform() - 0.5));
        break;
      case 1:
        psi = superpose(Complex(rng.normal(), rng.normal()), make_gaussian_packet(grid, center(), sigma),
                        Complex(rng.normal(), rng.normal()), make_gaussian_packet(grid, center(), sigma));
        break;
      default:
        for (std::size_t i = 0; i < grid.n_sites(); ++i) psi[i] = Complex(rng.normal(), rng.normal());
        psi = normalized(psi);
        break;
    }
    const auto p = jump_probability_density(psi, 1.0);
    double total = 0.0;
    for (double v : p) total += v * grid.dx();
    worst = std::max(worst, std::abs(total - 1.0));
  }
  CheckResult r;
  r.name = "completeness";
  r.quantity = "max |sum p dx - 1|";
  r.measured = worst;
  r.tolerance = 1e-8;
  r.detail = std::to_string(n_states) + " random states, " + std::to_string(n_sites) + " sites";
  return finish(r, start);
}

CheckResult check_born_grw(std::size_t n_trajectories, std::uint64_t seed, std::size_t workers) {
  const auto start = Clock::now();
  const auto cat = born_cat(256, 0.1, -12.8);
  const std::optional<TwoLobeBasis> lobes = cat.lobes;
  const auto ensemble = run_ensemble(n_trajectories, workers, seed, [&](std::size_t, RandomStream& rng) {
    TrajectoryResult res{cat.psi};
    WaveFunction psi = cat.psi;
    const auto jump = perform_jump(psi, 0.0, 1.0, rng, lobes);
    res.outcome = jump.lobe_label;
    res.jumps.push_back(jump);
    res.final_state = std::move(psi);
    return res;
  });
  auto r = born_result("born_grw", ensemble.outcomes());
  r.detail += ", one jump per trajectory";
  return finish(r, start);
}

CheckResult check_born_csl(std::size_t n_trajectories, std::uint64_t seed, std::size_t workers) {
  const auto start = Clock::now();
  const auto cat = born_cat(128, 0.15, -9.6);
  const auto params = CollapseParams::make(1.0, 1.0);
  const SmearingKernel kernel(cat.grid, 1.0);
  const auto h = HamiltonianSpec::zero();
  const double dt = csl_dt_max(params, kernel, h);
  TrajectoryOptions options;
  options.sample_times = {0.0};
  options.lobes = cat.lobes;
  options.absorption_threshold = 0.99;
  constexpr double kTimeCap = 200.0;
  const auto ensemble = run_ensemble(n_trajectories, workers, seed, [&](std::size_t, RandomStream& rng) {
    return run_csl_trajectory(cat.psi, h, params, kernel, kTimeCap, dt, rng, options);
  });
  std::size_t unabsorbed = 0;
  double max_time = 0.0;
  for (const auto& [k, rec] : ensemble.records()) {
    if (!rec.absorbed) ++unabsorbed;
    max_time = std::max(max_time, rec.final_time);
  }
  auto r = born_result("born_csl", ensemble.outcomes());
  r.detail += ", not absorbed by t = " + num(kTimeCap) + ": " + std::to_string(unabsorbed) +
              ", longest absorption time " + num(max_time);
  r = finish(r, start);
  if (unabsorbed > 0) r.passed = false;
  return r;
}

CheckResult check_amplification(std::size_t n_per_count, double lambda_scale, std::uint64_t seed,
                                std::size_t workers) {
  const auto start = Clock::now();
  constexpr double kLambda = 1.0;
  constexpr double kTFinal = 10.0;
  const LatticeGrid grid(64, 0.3, -9.6);
  const auto psi0 = make_gaussian_packet(grid, 0.0, 1.0);
  const auto h = HamiltonianSpec::zero();
  std::vector<double> counts;
  std::vector<double> means;
  std::uint64_t sub_seed = seed;
  for (std::uint64_t n : {1, 2, 4, 8}) {
    const auto params = CollapseParams::make(kLambda * lambda_scale, 1.0).with_nucleons(n);
    const auto ensemble =
        run_ensemble(n_per_count, workers, sub_seed++, [&](std::size_t, RandomStream& rng) {
          return run_grw_trajectory(psi0, h, params, kTFinal, kTFinal, rng);
        });
    const auto jumps = ensemble.total_jump_counts();
    counts.push_back(static_cast<double>(n));
    means.push_back(mean_and_stderr(jumps).mean);
  }
  const auto fit = fit_line(counts, means);
  const double expected = kLambda * kTFinal;
  CheckResult r;
  r.name = "amplification";
  r.quantity = "|slope / (lambda t_final) - 1|";
  r.measured = std::abs(fit.slope / expected - 1.0);
  r.tolerance = 0.05;
  r.detail = "slope = " + num(fit.slope) + " +- " + num(fit.slope_stderr) + ", expected " + num(expected) +
             ", means {" + num(means[0]) + ", " + num(means[1]) + ", " + num(means[2]) + ", " + num(means[3]) + "}";
  if (lambda_scale != 1.0) r.detail += ", fault injected: lambda x " + num(lambda_scale);
  return finish(r, start);
}

CheckResult check_norm_contract(std::size_t n_steps, std::uint64_t seed) {
  const auto start = Clock::now();
  const LobeGeometry geo;
  const auto params = CollapseParams::make(1.0, 1.0);
  const SmearingKernel kernel(geo.grid, 1.0);
  const auto h = HamiltonianSpec::free_particle();
  const double dt = csl_dt_max(params, kernel, h);
  auto run = [&](double step) {
    RandomStream rng(seed);
    TrajectoryOptions options;
    options.sample_times = {0.0};
    return run_csl_trajectory(geo.psi, h, params, kernel, step * static_cast<double>(n_steps), step, rng, options)
        .norm;
  };
  const auto full = run(dt);
  const auto half = run(0.5 * dt);
  const double ratio = full.cumulative_expected_correction / half.cumulative_expected_correction;
  CheckResult r;
  r.name = "norm_contract";
  r.quantity = "cumulative conditional-mean norm correction";
  r.measured = full.cumulative_expected_correction;
  r.tolerance = 1e-2;
  r.detail = std::to_string(n_steps) + " steps at dt = " + num(dt) + "; halving dt reduces it by " + num(ratio) +
             " (needs >= 2); realized per-step |norm - 1|: max " + num(full.max_step_correction) + ", sum " +
             num(full.cumulative_correction);
  r = finish(r, start);
  if (!(ratio >= 2.0) || full.steps != n_steps) r.passed = false;
  return r;
}

CheckResult check_unitary_norm(std::size_t n_steps) {
  const auto start = Clock::now();
  const LatticeGrid grid(256, 0.1, -12.8);
  const auto h = HamiltonianSpec::harmonic(grid, 1.0, 0.5);
  SplitStepPropagator prop(grid, h);
  auto psi = make_gaussian_packet(grid, 1.0, 1.0, 1.0);
  const double e0 = energy_expectation(psi, h);
  const double dt = 1e-3;
  for (std::size_t k = 0; k < n_steps; ++k) prop.step(psi, dt);
  CheckResult r;
  r.name = "unitary_norm";
  r.quantity = "| ||psi||^2 - 1 | after unitary steps";
  r.measured = std::abs(norm_squared(psi) - 1.0);
  r.tolerance = 1e-8;
  r.detail = std::to_string(n_steps) + " harmonic steps, relative energy drift " +
             num(std::abs(energy_expectation(psi, h) - e0) / e0);
  return finish(r, start);
}

CheckResult check_calibration(std::size_t n_trajectories, std::uint64_t seed, std::size_t workers) {
  const auto start = Clock::now();
  const auto cal = calibrate_decay_rate(CollapseParams::make(1.0, 1.0), n_trajectories, 1.2, 13, seed, workers);
  CheckResult r;
  r.name = "calibration";
  r.quantity = "|fitted decay rate / closed form - 1|";
  r.measured = std::abs(cal.ratio - 1.0);
  r.tolerance = 0.05;
  r.detail = "fitted " + num(cal.fitted_rate) + ", closed form " + num(cal.closed_form_rate) + ", lattice " +
             num(cal.lattice_rate) + ", fit R^2 " + num(cal.fit_r_squared) + ", " + std::to_string(n_trajectories) +
             " trajectories";
  return finish(r, start);
}

LobeEnsembleChecks check_lobe_ensemble(std::size_t n_trajectories, std::size_t n_calibration, std::uint64_t seed,
                                       std::size_t workers, double trace_distance_tolerance) {
  const auto start = Clock::now();
  const LobeGeometry geo;
  const auto params = CollapseParams::make(1.0, 1.0);
  const auto cal = calibrate_decay_rate(params, n_calibration, geo.t_final, 13, seed + 1, workers);
  const double rate = cal.ratio * csl_decoherence_rate(params, geo.separation, geo.grid.length());
  const auto summary = lobe_csl_ensemble(geo, params, n_trajectories, seed, workers);
  const auto rho0 = reduce_to_two_lobes(geo.psi, *geo.lobes);

  double worst_distance = 0.0;
  double worst_time = 0.0;
  double worst_z = 0.0;
  double worst_drift = 0.0;
  for (std::size_t k = 0; k < summary.sample_times.size(); ++k) {
    const double t = summary.sample_times[k];
    const double d = trace_distance(summary.mean_rho[k], lindblad_oracle_evolve(rho0, rate, t));
    if (d > worst_distance) {
      worst_distance = d;
      worst_time = t;
    }
    if (k == 0) continue;
    const double drift = std::abs(summary.mean_lobe_mass[k] - summary.mean_lobe_mass[0]);
    const double se = summary.mean_lobe_mass_stderr[k];
    worst_drift = std::max(worst_drift, drift);
    worst_z = std::max(worst_z, se > 0.0 ? drift / se : (drift > 0.0 ? std::numeric_limits<double>::infinity() : 0.0));
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();

  LobeEnsembleChecks out;
  auto& l = out.lindblad;
  l.name = "lindblad";
  l.quantity = "max trace distance to the Lindblad oracle";
  l.measured = worst_distance;
  l.tolerance = trace_distance_tolerance;
  l.passed = worst_distance <= trace_distance_tolerance;
  l.detail = std::to_string(n_trajectories) + " trajectories, calibrated rate " + num(rate) + " (ratio " +
             num(cal.ratio) + " from " + std::to_string(n_calibration) + "), worst at t = " + num(worst_time);
  l.seconds = elapsed;

  auto& m = out.martingale;
  m.name = "martingale";
  m.quantity = "max |mean right-lobe mass drift| / stderr";
  m.measured = worst_z;
  m.tolerance = 3.0;
  m.passed = worst_z <= 3.0;
  m.detail = "max drift " + num(worst_drift) + " from " + num(summary.mean_lobe_mass[0]) + " over " +
             std::to_string(summary.sample_times.size()) + " samples";
  m.seconds = 0.0;
  return out;
}

CheckResult check_grw_csl_agreement(std::size_t n_trajectories, std::uint64_t seed, std::size_t workers) {
  const auto start = Clock::now();
  const LobeGeometry geo;
  const auto grw_params = CollapseParams::make(1.0, 1.0);
  // GRW decoherence of point lobes: lambda (1 - exp(-d^2 / 4 r_c^2)). CSL lambda is chosen to match it.
  const double grw_rate = grw_params.lambda_rate() * (1.0 - std::exp(-geo.separation * geo.separation / 4.0));
  const double csl_unit = csl_decoherence_rate(grw_params, geo.separation, geo.grid.length());
  const auto csl_params = grw_params.with_lambda(grw_rate / csl_unit);
  const auto h = HamiltonianSpec::zero();
  const auto options = geo.options();
  const auto grw = run_ensemble(n_trajectories, workers, seed, [&](std::size_t, RandomStream& rng) {
                     return run_grw_trajectory(geo.psi, h, grw_params, geo.t_final, geo.t_final, rng, options);
                   }).summarize();
  const auto csl = lobe_csl_ensemble(geo, csl_params, n_trajectories, seed + 1, workers);
  double worst = 0.0;
  double worst_time = 0.0;
  for (std::size_t k = 1; k < grw.sample_times.size(); ++k) {
    const double se = std::hypot(grw.coherence_stderr[k], csl.coherence_stderr[k]);
    const double z = std::abs(grw.coherence_series[k] - csl.coherence_series[k]) / se;
    if (z > worst) {
      worst = z;
      worst_time = grw.sample_times[k];
    }
  }
  CheckResult r;
  r.name = "grw_csl_agreement";
  r.quantity = "max |coherence_GRW - coherence_CSL| / combined stderr";
  r.measured = worst;
  r.tolerance = 2.0;
  r.detail = "matched rate " + num(grw_rate) + ", worst at t = " + num(worst_time) + ", fitted GRW " +
             num(coherence_decay_fit(grw).rate) + ", CSL " + num(coherence_decay_fit(csl).rate) + ", " +
             std::to_string(n_trajectories) + " trajectories each";
  return finish(r, start);
}

CheckResult check_unitary_baseline() {
  const auto start = Clock::now();
  const LatticeGrid grid(512, 0.1, -25.6);
  const double sigma = 1.0;
  const double t = 2.0;
  const auto psi = evolve_unitary(make_gaussian_packet(grid, 0.0, sigma), HamiltonianSpec::free_particle(), t, 1e-3);
  const double expected = sigma * sigma + std::pow(t / (2.0 * sigma), 2);
  CheckResult r;
  r.name = "unitary_baseline";
  r.quantity = "relative error of free Var(x) at t = 2";
  r.measured = std::abs(position_variance(psi) / expected - 1.0);
  r.tolerance = 1e-3;
  r.detail = "Var = " + num(position_variance(psi)) + ", expected " + num(expected);
  return finish(r, start);
}

CheckResult check_csl_zero_coupling() {
  const auto start = Clock::now();
  const auto cat = born_cat(128, 0.15, -9.6);
  const auto h = HamiltonianSpec::free_particle();
  const auto params = CollapseParams::make(0.0, 1.0);
  const SmearingKernel kernel(cat.grid, 1.0);
  const double t_final = 1.0;
  const double dt = 1e-3;
  RandomStream rng(7);
  TrajectoryOptions options;
  options.sample_times = {t_final};
  const auto csl = run_csl_trajectory(cat.psi, h, params, kernel, t_final, dt, rng, options).final_state;
  const auto unitary = evolve_unitary(cat.psi, h, t_final, dt);
  double worst = 0.0;
  for (std::size_t i = 0; i < csl.size(); ++i) worst = std::max(worst, std::abs(csl[i] - unitary[i]));
  CheckResult r;
  r.name = "csl_zero_coupling";
  r.quantity = "max |psi_csl - psi_unitary| at lambda = 0";
  r.measured = worst;
  r.tolerance = 1e-8;
  r.detail = "1000 free steps on the cat";
  return finish(r, start);
}

CheckResult check_determinism(std::size_t n_trajectories) {
  const auto start = Clock::now();
  bool identical = true;
  std::size_t bytes = 0;
  for (auto model : {Model::grw, Model::csl}) {
    ExperimentConfig c;
    c.model = model;
    c.n_sites = 64;
    c.dx = 0.3;
    c.x_min = -9.6;
    c.initial.kind = InitialStateSpec::Kind::cat;
    c.initial.left = {-4.0, 1.0, 0.0};
    c.initial.right = {4.0, 1.0, 0.0};
    c.initial.weight_left = 0.6;
    c.initial.weight_right = 0.8;
    c.lambda_rate = 1.0;
    c.t_final = 0.2;
    c.dt = model == Model::csl ? 1e-4 : 1e-3;
    c.sample_times = {0.0, 0.1, 0.2};
    c.n_trajectories = n_trajectories;
    c.master_seed = 42;
    for (auto format : {OutputFormat::tree, OutputFormat::table}) {
      const auto a = serialize(run_experiment(c, 1), format);
      const auto b = serialize(run_experiment(c, 1), format);
      const auto p = serialize(run_experiment(c, 8), format);
      identical = identical && a == b && a == p;
      bytes += a.size();
    }
  }
  CheckResult r;
  r.name = "determinism";
  r.quantity = "mismatching outputs (1 worker twice, 8 workers)";
  r.measured = identical ? 0.0 : 1.0;
  r.tolerance = 0.0;
  r.detail = "grw and csl, tree and table, " + std::to_string(bytes) + " bytes compared";
  return finish(r, start);
}

CheckResult check_units() {
  const auto start = Clock::now();
  const auto u = UnitSystem::reference();
  const double lambda = u.lambda_per_s;
  const double rc = u.r_c_cm;
  const double direct = lambda * std::pow(4.0 * std::numbers::pi * rc * rc, 1.5);
  const double g3 = gamma_3d_from_lambda(lambda, rc);
  double err = std::abs(g3 / direct - 1.0);
  err = std::max(err, std::abs(lambda_from_gamma(gamma_from_lambda(2.5, 1.3), 1.3) / 2.5 - 1.0));
  err = std::max(err, std::abs(u.rate_to_cgs(u.rate_to_natural(lambda)) / lambda - 1.0));
  CheckResult r;
  r.name = "units";
  r.quantity = "max relative error of unit helpers";
  r.measured = err;
  r.tolerance = 4.0 * std::numeric_limits<double>::epsilon();
  r.detail = "gamma_3D = " + num(g3) + " cm^3/s";
  return finish(r, start);
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "completeness", "born_grw",          "born_csl",         "amplification", "norm_contract",
      "unitary_norm", "calibration",       "lindblad",         "martingale",    "grw_csl_agreement",
      "unitary_baseline", "csl_zero_coupling", "determinism", "units"};
  return names;
}

VerifyReport run_verify_suite(const VerifyOptions& o) {
  std::vector<std::string> selected = o.subset ? *o.subset : check_names();
  for (const auto& name : selected) {
    if (std::find(check_names().begin(), check_names().end(), name) == check_names().end()) {
      throw CollapseError(ErrorKind::invalid_argument, "unknown check: " + name);
    }
  }
  auto wanted = [&](const std::string& name) {
    return std::find(selected.begin(), selected.end(), name) != selected.end();
  };
  const bool full = o.scale == VerifyScale::full;
  const std::size_t lobe_n = full ? 10000 : 1000;

  VerifyReport report;
  std::optional<LobeEnsembleChecks> lobe;
  for (const auto& name : check_names()) {
    if (!wanted(name)) continue;
    const auto seed = o.seed;
    if (name == "completeness") report.checks.push_back(check_completeness(50, 256, seed));
    if (name == "born_grw") report.checks.push_back(check_born_grw(full ? 10000 : 2000, seed, o.workers));
    if (name == "born_csl") report.checks.push_back(check_born_csl(full ? 5000 : 300, seed, o.workers));
    if (name == "amplification") {
      report.checks.push_back(
          check_amplification(full ? 2000 : 400, o.inject_lambda_scale ? 2.0 : 1.0, seed, o.workers));
    }
    if (name == "norm_contract") report.checks.push_back(check_norm_contract(10000, seed));
    if (name == "unitary_norm") report.checks.push_back(check_unitary_norm(10000));
    if (name == "calibration") report.checks.push_back(check_calibration(full ? 10000 : 2000, seed, o.workers));
    if (name == "lindblad" || name == "martingale") {
      if (!lobe) lobe = check_lobe_ensemble(lobe_n, lobe_n, seed, o.workers, 0.02 * std::sqrt(10000.0 / lobe_n));
      report.checks.push_back(name == "lindblad" ? lobe->lindblad : lobe->martingale);
    }
    if (name == "grw_csl_agreement") {
      report.checks.push_back(check_grw_csl_agreement(full ? 2000 : 500, seed, o.workers));
    }
    if (name == "unitary_baseline") report.checks.push_back(check_unitary_baseline());
    if (name == "csl_zero_coupling") report.checks.push_back(check_csl_zero_coupling());
    if (name == "determinism") report.checks.push_back(check_determinism(full ? 16 : 8));
    if (name == "units") report.checks.push_back(check_units());
  }
  return report;
}

std::string format_report(const VerifyReport& report) {
  std::ostringstream out;
  for (const auto& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.quantity << " = " << num(c.measured)
        << (c.upper_bound ? " (<= " : " (>= ") << num(c.tolerance) << ") [" << num(c.seconds) << " s] " << c.detail
        << "\n";
  }
  out << (report.passed() ? "verify: PASS" : "verify: FAIL") << " (" << report.checks.size() << " checks)\n";
  return out.str();
}

}  // namespace collapse::harness
