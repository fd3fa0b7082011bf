#include "collapse/error.hpp"
#include "collapse/grw.hpp"
#include "collapse/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace collapse;

namespace {

const LatticeGrid kGrid(256, 0.1, -12.8);

WaveFunction cat(double a, double b) {
  return superpose(a, make_gaussian_packet(kGrid, -5.0, 1.0), b, make_gaussian_packet(kGrid, 5.0, 1.0));
}

TwoLobeBasis lobes() {
  return TwoLobeBasis::from_templates(make_gaussian_packet(kGrid, -5.0, 1.0), make_gaussian_packet(kGrid, 5.0, 1.0));
}

double sum_dx(const std::vector<double>& p) {
  double s = 0.0;
  for (double v : p) s += v * kGrid.dx();
  return s;
}

}  // namespace

TEST_CASE("effective rate") {
  CHECK(effective_rate(CollapseParams::make(1e-17, 1.0)) == 1e-17);
  CHECK(effective_rate(CollapseParams::make(1e-17, 1.0).with_nucleons(1000000000000000000ULL)) ==
        doctest::Approx(10.0).epsilon(1e-12));
  CHECK(effective_rate(CollapseParams::make(0.0, 1.0)) == 0.0);
}

TEST_CASE("jump times form a Poisson process") {
  RandomStream rng(11);
  CHECK(sample_jump_times(0.0, 100.0, rng).empty());

  double total = 0.0;
  for (int k = 0; k < 1000; ++k) total += static_cast<double>(sample_jump_times(5.0, 1000.0, rng).size());
  CHECK(std::abs(total / 1000.0 - 5000.0) <= 3.0 * std::sqrt(5000.0));

  // Kolmogorov-Smirnov of inter-arrival gaps against Exponential(rate).
  const double rate = 2.0;
  const auto times = sample_jump_times(rate, 5200.0, rng);
  REQUIRE(times.size() >= 10000);
  std::vector<double> gaps;
  double prev = 0.0;
  for (std::size_t i = 0; i < 10000; ++i) {
    gaps.push_back(times[i] - prev);
    prev = times[i];
  }
  std::sort(gaps.begin(), gaps.end());
  double d = 0.0;
  const double n = static_cast<double>(gaps.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double cdf = 1.0 - std::exp(-rate * gaps[i]);
    d = std::max({d, std::abs(cdf - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - cdf)});
  }
  CHECK(d < 1.358 / std::sqrt(n));
  CHECK(std::is_sorted(times.begin(), times.end()));
}

TEST_CASE("jump density of a point state") {
  const std::size_t q0 = 100;
  auto delta = make_site_delta(kGrid, q0);
  const auto p = jump_probability_density(delta, 1.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = kGrid.periodic_offset(kGrid.x(i), kGrid.x(q0));
    CHECK(std::abs(p[i] - std::exp(-d * d) / std::sqrt(std::numbers::pi)) < 1e-12);
  }
  CHECK(std::max_element(p.begin(), p.end()) - p.begin() == static_cast<long>(q0));
}

TEST_CASE("jump density is symmetric and complete") {
  const auto p = jump_probability_density(cat(1.0, 1.0), 1.0);
  const std::size_t n = p.size();
  for (std::size_t i = 1; i < n; ++i) CHECK(std::abs(p[i] - p[n - i]) < 1e-10);

  RandomStream rng(3);
  for (int k = 0; k < 20; ++k) {
    WaveFunction psi(kGrid);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = Complex(rng.normal(), rng.normal());
    CHECK(std::abs(sum_dx(jump_probability_density(normalized(psi), 0.5 + rng.uniform())) - 1.0) < 1e-8);
  }
}

TEST_CASE("jump on a gaussian narrows it") {
  const double rc = 1.0;
  // Position-variance convention: 1 / sigma'^2 = 1 / sigma^2 + 2 / r_c^2.
  const auto a = apply_jump(make_gaussian_packet(kGrid, 0.0, rc), 0.0, rc);
  CHECK(std::sqrt(position_variance(a)) == doctest::Approx(rc / std::sqrt(3.0)).epsilon(0.01));
  // Amplitude-width convention (psi ~ exp(-x^2 / 2 s^2)): s = r_c gives s' = r_c / sqrt(2).
  const double s = rc;
  const auto b = apply_jump(make_gaussian_packet(kGrid, 0.0, s / std::numbers::sqrt2), 0.0, rc);
  const double s_after = std::sqrt(2.0 * position_variance(b));
  CHECK(s_after == doctest::Approx(rc / std::numbers::sqrt2).epsilon(0.01));
  CHECK(is_normalized(a));
}

TEST_CASE("jump selects a lobe") {
  const auto after = apply_jump(cat(1.0, 1.0), 5.0, 1.0);
  CHECK(half_line_masses(after, 0.0).second > 0.999);
}

TEST_CASE("jump on a flat state gives the operator profile") {
  WaveFunction flat(kGrid);
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = 1.0;
  const auto after = apply_jump(normalized(flat), 0.0, 1.0);
  CHECK(position_variance(after) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("inverse-cdf site sampling") {
  RandomStream rng(5);
  const std::vector<double> p = {0.0, 1.0, 0.0, 3.0};
  int counts[4] = {0, 0, 0, 0};
  for (int k = 0; k < 40000; ++k) ++counts[sample_site(p, rng)];
  CHECK(counts[0] == 0);
  CHECK(counts[2] == 0);
  CHECK(std::abs(counts[3] / 40000.0 - 0.75) < 3.0 * std::sqrt(0.75 * 0.25 / 40000.0));
}

TEST_CASE("collapse-free trajectory equals unitary evolution") {
  const auto h = HamiltonianSpec::free_particle();
  const auto psi0 = make_gaussian_packet(kGrid, 0.0, 1.0, 1.0);
  RandomStream rng(1);
  const auto res = run_grw_trajectory(psi0, h, CollapseParams::make(0.0, 1.0), 1.0, 5e-3, rng);
  CHECK(res.jumps.empty());
  CHECK(res.final_state == evolve_unitary(psi0, h, 1.0, 5e-3));
}

TEST_CASE("trajectory with jumps") {
  const auto h = HamiltonianSpec::free_particle();
  const auto params = CollapseParams::make(3.0, 1.0);
  TrajectoryOptions options;
  options.sample_times = {0.0, 0.5, 1.0, 2.0};
  options.lobes = lobes();

  RandomStream a(99);
  const auto res = run_grw_trajectory(cat(1.0, 1.0), h, params, 2.0, 5e-3, a, options);
  RandomStream b(99);
  const auto again = run_grw_trajectory(cat(1.0, 1.0), h, params, 2.0, 5e-3, b, options);
  CHECK(res.final_state == again.final_state);
  REQUIRE(res.jumps.size() == again.jumps.size());
  REQUIRE(!res.jumps.empty());

  // Jump times are the first draws of the stream and are hit exactly.
  RandomStream c(99);
  const auto times = sample_jump_times(effective_rate(params), 2.0, c);
  REQUIRE(times.size() == res.jumps.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(res.jumps[i].time == times[i]);
    CHECK(std::abs(res.jumps[i].pre_jump_norm_sq - 1.0) <= 1e-6);
    CHECK(res.jumps[i].lobe_label.has_value());
    if (i > 0) CHECK(res.jumps[i].time > res.jumps[i - 1].time);
  }
  CHECK(res.observables_series.size() == 4);
  CHECK(res.observables_series[3].time == 2.0);
  CHECK(res.outcome.has_value());
}

TEST_CASE("a jump leaves one lobe") {
  const auto params = CollapseParams::make(50.0, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomStream rng(seed);
    const auto res = run_grw_trajectory(cat(1.0, 1.0), HamiltonianSpec::zero(), params, 1.0, 1.0, rng);
    REQUIRE(!res.jumps.empty());
    const auto [l, r] = half_line_masses(res.final_state, 0.0);
    CHECK(std::min(l, r) < 1e-4);
  }
}

TEST_CASE("one-jump outcomes follow the lobe weights") {
  const std::optional<TwoLobeBasis> basis = lobes();
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{0.6, 0.8}}) {
    const auto psi0 = cat(a, b);
    const double right = b * b / (a * a + b * b);
    RandomStream rng(static_cast<std::uint64_t>(100 * a));
    std::vector<int> outcomes;
    for (int k = 0; k < 10000; ++k) {
      auto psi = psi0;
      outcomes.push_back(*perform_jump(psi, 0.0, 1.0, rng, basis).lobe_label);
    }
    const auto report = born_rule_test(outcomes, {1.0 - right, right});
    CHECK(report.passed);
  }
}

TEST_CASE("jump counts scale with nucleon number") {
  const LatticeGrid grid(64, 0.3, -9.6);
  const auto psi0 = make_gaussian_packet(grid, 0.0, 1.0);
  auto mean_count = [&](std::uint64_t n) {
    const auto params = CollapseParams::make(1.0, 1.0).with_nucleons(n);
    RandomStream rng(n);
    double total = 0.0;
    for (int k = 0; k < 2000; ++k) {
      total += static_cast<double>(run_grw_trajectory(psi0, HamiltonianSpec::zero(), params, 5.0, 5.0, rng).jumps.size());
    }
    return total / 2000.0;
  };
  const double m2 = mean_count(2);
  const double m4 = mean_count(4);
  // Var(m4 / m2) ~ (2 / m2)^2 Var(m2) + Var(m4) / m2^2 with Poisson variances 10/2000 and 20/2000.
  const double sigma = std::sqrt(4.0 * (10.0 / 2000.0) / 100.0 + (20.0 / 2000.0) / 100.0);
  CHECK(std::abs(m4 / m2 - 2.0) < 3.0 * sigma);
}

TEST_CASE("jumps never add lobes") {
  RandomStream rng(8);
  for (int k = 0; k < 200; ++k) {
    WaveFunction psi = superpose(
        rng.normal(), make_gaussian_packet(kGrid, -6.0 + 3.0 * rng.uniform(), 0.6 + rng.uniform()),
        Complex(rng.normal(), rng.normal()), make_gaussian_packet(kGrid, 3.0 + 3.0 * rng.uniform(), 0.6 + rng.uniform()));
    const auto before = count_density_peaks(psi);
    perform_jump(psi, 0.0, 0.5 + rng.uniform(), rng);
    CHECK(count_density_peaks(psi) <= before);
  }
}
