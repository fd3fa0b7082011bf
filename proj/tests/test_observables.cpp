#include "collapse/csl.hpp"
#include "collapse/ensemble.hpp"
#include "collapse/error.hpp"
#include "collapse/grw.hpp"
#include "collapse/oracle.hpp"
#include "collapse/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace collapse;

namespace {

const LatticeGrid kGrid(256, 0.1, -12.8);
const auto kLeft = make_gaussian_packet(kGrid, -5.0, 1.0);
const auto kRight = make_gaussian_packet(kGrid, 5.0, 1.0);

EnsembleSummary synthetic(const std::vector<double>& coherence) {
  EnsembleSummary s;
  for (std::size_t k = 0; k < coherence.size(); ++k) {
    s.sample_times.push_back(0.1 * static_cast<double>(k));
    s.coherence_series.push_back(coherence[k]);
    s.coherence_stderr.push_back(0.0);
  }
  return s;
}

std::vector<int> labels(std::size_t n, double p_right, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<int> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(rng.uniform() < p_right ? kRightLobe : kLeftLobe);
  return out;
}

}  // namespace

TEST_CASE("two-lobe reduction") {
  const auto basis = TwoLobeBasis::from_templates(kLeft, kRight);
  CHECK(basis.boundary() == doctest::Approx(0.0).epsilon(1e-9));

  const auto left = reduce_to_two_lobes(kLeft, basis);
  CHECK(std::abs(left.ll - 1.0) < 1e-6);
  CHECK(std::abs(left.rr) < 1e-6);
  CHECK(std::abs(left.lr) < 1e-5);

  const auto equal = reduce_to_two_lobes(superpose(1.0, kLeft, 1.0, kRight), basis);
  for (auto v : {equal.ll, equal.lr, equal.rl, equal.rr}) CHECK(std::abs(v - 0.5) < 1e-6);

  const auto weighted = reduce_to_two_lobes(superpose(0.6, kLeft, 0.8, kRight), basis);
  CHECK(std::abs(weighted.ll - 0.36) < 1e-6);
  CHECK(std::abs(weighted.rr - 0.64) < 1e-6);
  CHECK(std::abs(std::abs(weighted.lr) - 0.48) < 1e-4);
  CHECK(weighted.is_physical());
  CHECK(std::abs(weighted.trace() - 1.0) < 1e-9);
}

TEST_CASE("overlapping templates are rejected") {
  try {
    TwoLobeBasis::from_templates(make_gaussian_packet(kGrid, -1.0, 1.0), make_gaussian_packet(kGrid, 1.0, 1.0));
    FAIL("expected degenerate-lobes");
  } catch (const CollapseError& e) {
    CHECK(e.kind() == ErrorKind::degenerate_lobes);
  }
}

TEST_CASE("lindblad oracle") {
  const auto rho0 = reduce_to_two_lobes(superpose(0.6, kLeft, 0.8, kRight), TwoLobeBasis::from_templates(kLeft, kRight));
  CHECK(lindblad_oracle_evolve(rho0, 0.0, 3.0) == rho0);
  const auto half = lindblad_oracle_evolve(rho0, 2.0, std::log(2.0) / 2.0);
  CHECK(std::abs(std::abs(half.lr) - 0.5 * std::abs(rho0.lr)) < 1e-15);
  CHECK(trace_distance(rho0, rho0) == 0.0);
  CHECK(trace_distance(rho0, half) == doctest::Approx(0.5 * std::abs(rho0.lr)).epsilon(1e-12));

  RandomStream rng(21);
  for (int k = 0; k < 200; ++k) {
    const double p = rng.uniform();
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    const double mag = rng.uniform() * std::sqrt(p * (1.0 - p));
    TwoLobeDensityMatrix rho{p, std::polar(mag, phase), std::polar(mag, -phase), 1.0 - p};
    const auto out = lindblad_oracle_evolve(rho, 5.0 * rng.uniform(), 3.0 * rng.uniform());
    CHECK(out.is_physical());
    CHECK(std::abs(out.lr - std::conj(out.rl)) < 1e-15);
    CHECK(std::abs(out.trace() - 1.0) < 1e-9);
  }
}

TEST_CASE("born rule test") {
  CHECK(born_rule_test(labels(10000, 0.5, 1), {0.5, 0.5}).passed);
  CHECK_FALSE(born_rule_test(std::vector<int>(10000, kLeftLobe), {0.5, 0.5}).passed);
  const auto r = born_rule_test(labels(10000, 0.64, 2), {0.36, 0.64});
  CHECK(r.passed);
  CHECK(r.n == 10000);
  CHECK(r.expected_right_frequency == doctest::Approx(0.64));
  // Pass rate at the 3 sigma convention.
  int passes = 0;
  for (std::uint64_t s = 0; s < 400; ++s) passes += born_rule_test(labels(1000, 0.5, 100 + s), {0.5, 0.5}).passed;
  CHECK(passes >= 390);
  try {
    (void)born_rule_test(labels(50, 0.5, 3), {0.5, 0.5});
    FAIL("expected too-few-samples");
  } catch (const CollapseError& e) {
    CHECK(e.kind() == ErrorKind::too_few_samples);
  }
}

TEST_CASE("coherence decay fit") {
  std::vector<double> exact;
  std::vector<double> noisy;
  std::vector<double> flat;
  RandomStream rng(6);
  for (int k = 0; k < 13; ++k) {
    const double c = 0.5 * std::exp(-2.0 * 0.1 * k);
    exact.push_back(c);
    noisy.push_back(c * (1.0 + 0.01 * rng.normal()));
    flat.push_back(0.3);
  }
  const auto fit = coherence_decay_fit(synthetic(exact));
  CHECK(std::abs(fit.rate - 2.0) < 1e-6);
  CHECK(fit.r_squared > 0.999999);
  CHECK(std::abs(coherence_decay_fit(synthetic(noisy)).rate - 2.0) < 0.1);
  CHECK(std::abs(coherence_decay_fit(synthetic(flat)).rate) < 1e-12);

  auto weak = synthetic(exact);
  for (auto& se : weak.coherence_stderr) se = 0.1;
  CHECK_THROWS_AS(coherence_decay_fit(weak), CollapseError);
}

TEST_CASE("line fit and mean") {
  const std::vector<double> x = {1, 2, 4, 8};
  const std::vector<double> y = {3, 5, 9, 17};
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  const auto m = mean_and_stderr(std::vector<double>{1, 2, 3, 4});
  CHECK(m.mean == 2.5);
  CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("seed derivation is pinned") {
  CHECK(derive_trajectory_seed(42, 7) == 17247346428548400493ULL);
  CHECK(derive_trajectory_seed(0, 0) == 15392584411371816759ULL);
}

TEST_CASE("ensemble aggregation is order independent") {
  const auto psi0 = superpose(0.6, kLeft, 0.8, kRight);
  const auto params = CollapseParams::make(1.0, 1.0);
  TrajectoryOptions options;
  options.sample_times = {0.0, 0.5, 1.0};
  options.lobes = TwoLobeBasis::from_templates(kLeft, kRight);
  const TrajectoryFn fn = [&](std::size_t, RandomStream& rng) {
    return run_grw_trajectory(psi0, HamiltonianSpec::zero(), params, 1.0, 1.0, rng, options);
  };
  const auto all = run_ensemble(30, 1, 9, fn);
  const auto four = run_ensemble(30, 4, 9, fn);
  CHECK(all.summarize() == four.summarize());

  EnsembleAccumulator a, b, c;
  for (const auto& [k, rec] : all.records()) (k % 3 == 0 ? a : k % 3 == 1 ? b : c).add(k, rec);
  EnsembleAccumulator ab_c = a;
  ab_c.merge(b);
  ab_c.merge(c);
  EnsembleAccumulator bc = b;
  bc.merge(c);
  EnsembleAccumulator a_bc = a;
  a_bc.merge(bc);
  EnsembleAccumulator cba = c;
  cba.merge(b);
  cba.merge(a);
  CHECK(ab_c.summarize() == all.summarize());
  CHECK(a_bc.summarize() == all.summarize());
  CHECK(cba.summarize() == all.summarize());
  CHECK_THROWS_AS(ab_c.merge(a), CollapseError);

  const auto s = all.summarize();
  REQUIRE(s.outcome_frequencies.size() == 2);
  CHECK(std::abs(s.outcome_frequencies[0] + s.outcome_frequencies[1] - 1.0) < 1e-12);
  for (double c0 : s.coherence_series) CHECK((c0 >= 0.0 && c0 <= 0.5 + 1e-9));
}

TEST_CASE("trajectory errors carry the index") {
  try {
    (void)run_ensemble(5, 2, 0, [](std::size_t k, RandomStream&) -> TrajectoryResult {
      if (k == 3) throw CollapseError(ErrorKind::unstable_dt, "boom");
      return TrajectoryResult(make_gaussian_packet(kGrid, 0.0, 1.0));
    });
    FAIL("expected rethrow");
  } catch (const CollapseError& e) {
    CHECK(e.kind() == ErrorKind::unstable_dt);
    CHECK(std::string(e.what()).find("trajectory 3") != std::string::npos);
  }
}

TEST_CASE("brute-force decay rate matches the closed form") {
  const auto cal = calibrate_decay_rate(CollapseParams::make(1.0, 1.0), 2000, 1.2, 13, 31);
  CHECK(std::abs(cal.ratio - 1.0) < 0.05);
  CHECK(cal.lattice_rate == doctest::Approx(cal.closed_form_rate).epsilon(1e-3));
}
