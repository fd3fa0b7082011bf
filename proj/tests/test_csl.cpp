#include "collapse/csl.hpp"
#include "collapse/error.hpp"
#include "collapse/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace collapse;

namespace {

const LatticeGrid kGrid(256, 0.1, -12.8);
const LatticeGrid kCatGrid(128, 0.15, -9.6);

WaveFunction cat(const LatticeGrid& grid, double a, double b) {
  return superpose(a, make_gaussian_packet(grid, -5.0, 1.0), b, make_gaussian_packet(grid, 5.0, 1.0));
}

double max_diff(const WaveFunction& a, const WaveFunction& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("smearing kernel is normalized") {
  for (double rc : {0.5, 1.0, 2.0}) {
    const SmearingKernel kernel(kGrid, rc);
    double total = 0.0;
    for (double v : kernel.values()) total += v * kGrid.dx();
    CHECK(std::abs(total - 1.0) < 1e-8);
    CHECK(kernel.values()[0] == doctest::Approx(1.0 / (std::sqrt(2.0 * std::numbers::pi) * rc)).epsilon(1e-12));
  }
}

TEST_CASE("mass density operator") {
  const SmearingKernel kernel(kGrid, 1.0);
  const std::size_t q0 = 77;
  const auto delta = make_site_delta(kGrid, q0);
  const auto scaled = apply_mass_density_operator(delta, kernel, q0, 3.0);
  CHECK(std::abs(scaled[q0] - 3.0 / std::sqrt(2.0 * std::numbers::pi) * delta[q0]) < 1e-12);

  const auto psi = make_gaussian_packet(kGrid, 1.0, 1.3, 0.4);
  double total = 0.0;
  for (std::size_t x = 0; x < kGrid.n_sites(); ++x) {
    total += inner_product(psi, apply_mass_density_operator(psi, kernel, x, 2.0)).real() * kGrid.dx();
  }
  CHECK(std::abs(total - 2.0 * norm_squared(psi)) < 1e-8);

  const auto c = cat(kGrid, 1.0, 1.0);
  const auto m = apply_mass_density_operator(c, kernel, kGrid.nearest_site(5.0), 1.0);
  const double left = std::abs(m[kGrid.nearest_site(-5.0)]);
  const double right = std::abs(m[kGrid.nearest_site(5.0)]);
  CHECK(left / right < std::exp(-12.0));
}

TEST_CASE("wiener increments") {
  RandomStream rng(17);
  const LatticeGrid grid(8, 0.25, 0.0);
  const double dt = 0.01;
  const double var = dt / grid.dx();
  const int n = 100000;
  double s0 = 0.0;
  double s00 = 0.0;
  double s01 = 0.0;
  WienerField w;
  for (int k = 0; k < n; ++k) {
    sample_wiener_step(grid, dt, rng, w);
    s0 += w.increments[0];
    s00 += w.increments[0] * w.increments[0];
    s01 += w.increments[0] * w.increments[1];
  }
  const double emp_var = s00 / n - (s0 / n) * (s0 / n);
  CHECK(std::abs(emp_var - var) <= 3.0 * std::sqrt(2.0 / n) * var);
  CHECK(std::abs(s01 / n) <= 3.0 * var / std::sqrt(static_cast<double>(n)));
  CHECK_THROWS_AS(sample_wiener_step(grid, 0.0, rng), CollapseError);
}

TEST_CASE("zero coupling reduces to the unitary step") {
  const auto h = HamiltonianSpec::harmonic(kCatGrid, 1.0, 0.2);
  const auto params = CollapseParams::make(0.0, 1.0);
  const SmearingKernel kernel(kCatGrid, 1.0);
  const auto psi = cat(kCatGrid, 0.6, 0.8);
  RandomStream rng(2);
  const double dt = 5e-3;
  const auto dW = sample_wiener_step(kCatGrid, dt, rng);
  CHECK(max_diff(csl_step(psi, h, params, kernel, dt, dW), step_unitary(psi, h, dt)) < 1e-8);

  TrajectoryOptions options;
  options.sample_times = {0.0, 0.25, 1.0};
  const auto res = run_csl_trajectory(psi, h, params, kernel, 1.0, dt, rng, options);
  CHECK(max_diff(res.final_state, evolve_unitary(psi, h, 1.0, dt)) < 1e-8);
}

TEST_CASE("decoherence rate constant") {
  const auto params = CollapseParams::make(1.0, 1.0);
  // Widely separated points: rate -> lambda (m / m0)^2.
  CHECK(csl_decoherence_rate(params, 50.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(csl_decoherence_rate(CollapseParams::make(1.0, 1.0, 1.0, 1.0, 3.0), 50.0) ==
        doctest::Approx(9.0).epsilon(1e-12));
  CHECK(csl_decoherence_rate(params, 0.0) == 0.0);
  const LatticeGrid grid(8, 1.0, 0.0);
  const SmearingKernel kernel(grid, 1.0);
  CHECK(csl_decoherence_rate_lattice(params, kernel, 4) ==
        doctest::Approx(csl_decoherence_rate(params, 4.0, 8.0)).epsilon(1e-3));
}

TEST_CASE("dt above the collapse bound is rejected") {
  const auto params = CollapseParams::make(1.0, 1.0);
  const SmearingKernel kernel(kCatGrid, 1.0);
  const auto h = HamiltonianSpec::zero();
  const double dt_max = csl_dt_max(params, kernel, h);
  CHECK(dt_max == doctest::Approx(kCollapseStepBudget / (csl_coupling_sq(params) * kernel.self_overlap())));
  RandomStream rng(1);
  try {
    (void)run_csl_trajectory(cat(kCatGrid, 1.0, 1.0), h, params, kernel, 1.0, 100.0 * dt_max, rng);
    FAIL("expected unstable-dt");
  } catch (const CollapseError& e) {
    CHECK(e.kind() == ErrorKind::unstable_dt);
  }
}

TEST_CASE("cat is absorbed into one lobe") {
  const auto params = CollapseParams::make(1.0, 1.0);
  const SmearingKernel kernel(kCatGrid, 1.0);
  const auto h = HamiltonianSpec::zero();
  const double dt = csl_dt_max(params, kernel, h);
  TrajectoryOptions options;
  options.lobes = TwoLobeBasis::from_templates(make_gaussian_packet(kCatGrid, -5.0, 1.0),
                                               make_gaussian_packet(kCatGrid, 5.0, 1.0));
  options.absorption_threshold = 0.99;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    RandomStream rng(seed);
    const auto res = run_csl_trajectory(cat(kCatGrid, 1.0, 1.0), h, params, kernel, 100.0, dt, rng, options);
    CHECK(res.absorbed);
    CHECK(res.final_time < 100.0);
    const auto [l, r] = half_line_masses(res.final_state, 0.0);
    CHECK(std::max(l, r) > 0.99);
  }
}

TEST_CASE("stochastic term on a localized state") {
  const LatticeGrid grid(256, 0.04, -5.12);
  const auto params = CollapseParams::make(1.0, 1.0);
  const SmearingKernel kernel(grid, 1.0);
  const auto h = HamiltonianSpec::zero();
  const double dt = csl_dt_max(params, kernel, h);
  const double a = std::sqrt(csl_coupling_sq(params));

  auto bound_for = [&](const WaveFunction& psi) {
    // a sqrt(dt) (sum_x ||(M(x) - <M(x)>) psi||^2 dx)^(1/2): the RMS of the stochastic term.
    double sum = 0.0;
    for (std::size_t x = 0; x < grid.n_sites(); ++x) {
      auto m = apply_mass_density_operator(psi, kernel, x, 1.0);
      const Complex mean = inner_product(psi, m);
      double norm = 0.0;
      for (std::size_t q = 0; q < grid.n_sites(); ++q) norm += std::norm(m[q] - mean * psi[q]) * grid.dx();
      sum += norm * grid.dx();
    }
    return a * std::sqrt(dt * sum);
  };
  const auto sharp = make_gaussian_packet(grid, 0.0, 0.1);
  const auto broad = superpose(1.0, make_gaussian_packet(grid, -2.0, 0.1), 1.0, make_gaussian_packet(grid, 2.0, 0.1));
  const double bound = bound_for(sharp);
  CHECK(bound < 0.2 * bound_for(broad));

  RandomStream rng(4);
  double mean_sq = 0.0;
  double mean_x_var = 0.0;
  const int trials = 400;
  for (int k = 0; k < trials; ++k) {
    const auto dW = sample_wiener_step(grid, dt, rng);
    const auto next = csl_step(sharp, h, params, kernel, dt, dW);
    WaveFunction diff = next;
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= sharp[i];
    mean_sq += norm_squared(diff) / trials;
    mean_x_var += std::pow(position_mean(next), 2) / trials;
  }
  CHECK(std::sqrt(mean_sq) < 1.5 * bound);
  CHECK(mean_x_var < 1e-6);
}

TEST_CASE("lobe mass is a martingale") {
  const auto params = CollapseParams::make(1.0, 1.0);
  const SmearingKernel kernel(kCatGrid, 1.0);
  const auto h = HamiltonianSpec::zero();
  const double dt = csl_dt_max(params, kernel, h);
  TrajectoryOptions options;
  options.sample_times = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  const auto psi0 = cat(kCatGrid, 0.6, 0.8);
  const int n = 200;
  std::vector<std::vector<double>> masses(options.sample_times.size());
  for (int k = 0; k < n; ++k) {
    RandomStream rng(derive_trajectory_seed(5, k));
    const auto res = run_csl_trajectory(psi0, h, params, kernel, 0.5, dt, rng, options);
    for (std::size_t s = 0; s < masses.size(); ++s) masses[s].push_back(res.observables_series[s].right_mass);
  }
  const double m0 = mean_and_stderr(masses[0]).mean;
  for (std::size_t s = 1; s < masses.size(); ++s) {
    const auto me = mean_and_stderr(masses[s]);
    CHECK(std::abs(me.mean - m0) <= 3.0 * me.std_error);
  }
}

TEST_CASE("symmetric cat gives even outcomes") {
  const auto params = CollapseParams::make(1.0, 1.0);
  const SmearingKernel kernel(kCatGrid, 1.0);
  const auto h = HamiltonianSpec::zero();
  const double dt = csl_dt_max(params, kernel, h);
  TrajectoryOptions options;
  options.lobes = TwoLobeBasis::from_templates(make_gaussian_packet(kCatGrid, -5.0, 1.0),
                                               make_gaussian_packet(kCatGrid, 5.0, 1.0));
  options.absorption_threshold = 0.99;
  std::vector<int> outcomes;
  for (int k = 0; k < 200; ++k) {
    RandomStream rng(derive_trajectory_seed(77, k));
    outcomes.push_back(*run_csl_trajectory(cat(kCatGrid, 1.0, 1.0), h, params, kernel, 100.0, dt, rng, options).outcome);
  }
  CHECK(born_rule_test(outcomes, {0.5, 0.5}).passed);
}

TEST_CASE("broad packet localizes") {
  const LatticeGrid grid(256, 0.4, -51.2);
  const auto params = CollapseParams::make(1.0, 1.0);
  const SmearingKernel kernel(grid, 1.0);
  const auto h = HamiltonianSpec::zero();
  const double dt = csl_dt_max(params, kernel, h);
  TrajectoryOptions options;
  options.sample_times = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
  const auto psi0 = make_gaussian_packet(grid, 0.0, 10.0);
  std::vector<std::vector<double>> vars(options.sample_times.size());
  for (int k = 0; k < 15; ++k) {
    RandomStream rng(derive_trajectory_seed(9, k));
    const auto res = run_csl_trajectory(psi0, h, params, kernel, 4.0, dt, rng, options);
    for (std::size_t s = 0; s < vars.size(); ++s) vars[s].push_back(res.observables_series[s].var_x);
  }
  double prev = median(vars[0]);
  CHECK(prev == doctest::Approx(100.0).epsilon(1e-3));
  for (std::size_t s = 1; s < vars.size(); ++s) {
    const double m = median(vars[s]);
    if (prev > 2.0) CHECK(m < prev);
    prev = m;
  }
  CHECK(prev < 2.0);
}
