#include "collapse/error.hpp"
#include "collapse/lattice.hpp"
#include "collapse/params.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace collapse;

namespace {
const LatticeGrid kGrid(256, 0.1, -12.8);
}

TEST_CASE("grid rejects bad geometry") {
  CHECK_THROWS_AS(LatticeGrid(4, 0.1, 0.0), CollapseError);
  CHECK_THROWS_AS(LatticeGrid(16, 0.0, 0.0), CollapseError);
  CHECK_THROWS_AS(LatticeGrid(16, -1.0, 0.0), CollapseError);
  CHECK(kGrid.length() == doctest::Approx(25.6));
  CHECK(kGrid.nearest_site(3.0) == 158);
  CHECK(kGrid.periodic_offset(-12.0, 12.0) == doctest::Approx(1.6));
}

TEST_CASE("gaussian packet moments") {
  const auto g = make_gaussian_packet(kGrid, 0.0, 1.0);
  CHECK(is_normalized(g));
  CHECK(std::abs(position_mean(g)) < 1e-8);
  CHECK(std::abs(position_variance(g) - 1.0) < 1e-3);

  const auto shifted = make_gaussian_packet(kGrid, 3.0, 1.0);
  CHECK(std::abs(position_mean(shifted) - 3.0) < 1e-8);

  const auto moving = make_gaussian_packet(kGrid, 0.0, 1.0, 2.0);
  CHECK(std::abs(wavenumber_mean(moving) - 2.0) < 1e-3);
}

TEST_CASE("gaussian packet preconditions") {
  try {
    (void)make_gaussian_packet(kGrid, 0.0, 0.15);
    FAIL("expected packet-too-narrow");
  } catch (const CollapseError& e) {
    CHECK(e.kind() == ErrorKind::packet_too_narrow);
  }
  try {
    (void)make_gaussian_packet(kGrid, 11.0, 1.0);
    FAIL("expected packet-outside-grid");
  } catch (const CollapseError& e) {
    CHECK(e.kind() == ErrorKind::packet_outside_grid);
  }
}

TEST_CASE("superpose") {
  const auto psi = make_gaussian_packet(kGrid, 1.0, 1.0, 0.5);
  const auto phi = make_gaussian_packet(kGrid, -2.0, 1.5);
  const auto same = superpose(1.0, psi, 0.0, phi);
  for (std::size_t i = 0; i < psi.size(); ++i) CHECK(std::abs(same[i] - psi[i]) < 1e-15);

  const auto l = make_gaussian_packet(kGrid, -5.0, 1.0);
  const auto r = make_gaussian_packet(kGrid, 5.0, 1.0);
  const auto equal = superpose(1.0 / std::numbers::sqrt2, l, 1.0 / std::numbers::sqrt2, r);
  auto [ml, mr] = half_line_masses(equal, 0.0);
  CHECK(std::abs(ml - 0.5) < 1e-6);
  CHECK(std::abs(mr - 0.5) < 1e-6);

  const auto weighted = superpose(0.6, l, 0.8, r);
  std::tie(ml, mr) = half_line_masses(weighted, 0.0);
  CHECK(std::abs(ml - 0.36) < 1e-6);
  CHECK(std::abs(mr - 0.64) < 1e-6);

  // Lobe-mass ratio follows |a|^2 : |b|^2 for unnormalized weights too.
  const auto ratio = superpose(3.0, l, Complex(0.0, 1.0), r);
  std::tie(ml, mr) = half_line_masses(ratio, 0.0);
  CHECK(std::abs(ml / mr / 9.0 - 1.0) < 1e-5);

  CHECK_THROWS_AS((void)superpose(1.0, l, -1.0, l), CollapseError);
}

TEST_CASE("norm squared") {
  const auto g = make_gaussian_packet(kGrid, 0.0, 1.0);
  CHECK(std::abs(norm_squared(g) - 1.0) < 1e-10);
  CHECK(norm_squared(WaveFunction(kGrid)) == 0.0);
  auto twice = g;
  twice *= 2.0;
  CHECK(std::abs(norm_squared(twice) - 4.0) < 1e-9);
}

TEST_CASE("normalize is idempotent") {
  auto psi = make_gaussian_packet(kGrid, 0.3, 1.2, 1.0);
  psi *= Complex(1.7, -0.4);
  const auto once = normalized(psi);
  const auto twice = normalized(once);
  for (std::size_t i = 0; i < once.size(); ++i) CHECK(std::abs(once[i] - twice[i]) < 1e-15);
  try {
    (void)normalized(WaveFunction(kGrid));
    FAIL("expected zero-vector");
  } catch (const CollapseError& e) {
    CHECK(e.kind() == ErrorKind::zero_vector);
  }
}

TEST_CASE("mass density") {
  const auto g = make_gaussian_packet(kGrid, 0.0, 1.0);
  double total = 0.0;
  for (double v : mass_density(g, 1.0)) total += v * kGrid.dx();
  CHECK(std::abs(total - 1.0) < 1e-10);

  const auto cat = superpose(1.0, make_gaussian_packet(kGrid, -5.0, 1.0), 1.0, make_gaussian_packet(kGrid, 5.0, 1.0));
  const auto rho = mass_density(cat, 2.0);
  double left = 0.0;
  double right = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) (kGrid.x(i) < 0.0 ? left : right) += rho[i] * kGrid.dx();
  CHECK(std::abs(left - 1.0) < 1e-6);
  CHECK(std::abs(right - 1.0) < 1e-6);

  const auto at3 = mass_density(make_gaussian_packet(kGrid, 3.0, 1.0), 1.0);
  const auto peak = static_cast<std::size_t>(std::max_element(at3.begin(), at3.end()) - at3.begin());
  CHECK(peak == kGrid.nearest_site(3.0));
}

TEST_CASE("mass density is diagonal under relabeling") {
  const auto psi = make_gaussian_packet(kGrid, 0.7, 1.1, 0.8);
  const auto rho = mass_density(psi, 1.5);
  WaveFunction reversed(kGrid);
  for (std::size_t i = 0; i < psi.size(); ++i) reversed[i] = psi[psi.size() - 1 - i];
  const auto rho_rev = mass_density(reversed, 1.5);
  for (std::size_t i = 0; i < psi.size(); ++i) CHECK(rho_rev[i] == rho[psi.size() - 1 - i]);
}

TEST_CASE("peak counting") {
  const auto l = make_gaussian_packet(kGrid, -5.0, 1.0);
  const auto r = make_gaussian_packet(kGrid, 5.0, 1.0);
  CHECK(count_density_peaks(l) == 1);
  CHECK(count_density_peaks(superpose(1.0, l, 1.0, r)) == 2);
}

TEST_CASE("collapse parameters") {
  CHECK(gamma_from_lambda(1.0, 1.0) == doctest::Approx(3.5449077018).epsilon(1e-10));
  CHECK(gamma_from_lambda(3.0, 1.0) == doctest::Approx(3.0 * gamma_from_lambda(1.0, 1.0)).epsilon(1e-15));
  CHECK(gamma_3d_from_lambda(1e-17, 1e-5) == doctest::Approx(4.45e-31).epsilon(1e-3));
  CHECK(lambda_from_gamma(gamma_from_lambda(0.7, 2.0), 2.0) == doctest::Approx(0.7).epsilon(1e-15));

  const auto p = CollapseParams::make(0.0, 1.0);
  CHECK(p.lambda_rate() == 0.0);
  CHECK(p.n_nucleons() == 1);
  CHECK(CollapseParams::make(1.0, 1.0, 1.0, 1.0, 12.0).n_nucleons() == 12);
  CHECK_THROWS_AS(CollapseParams::make(-1.0, 1.0), CollapseError);
  CHECK_THROWS_AS(CollapseParams::make(1.0, 0.0), CollapseError);
}

TEST_CASE("unit conversion") {
  const auto u = UnitSystem::reference();
  CHECK(u.time_unit_s() == doctest::Approx(1.66053906660e-24 * 1e-10 / 1.054571817e-27));
  CHECK(u.time_to_cgs(u.time_to_natural(3.0)) == doctest::Approx(3.0));
  CHECK(u.length_to_natural(1e-5) == doctest::Approx(1.0));
  CHECK(u.mass_to_natural(u.m0_g) == doctest::Approx(1.0));
}
