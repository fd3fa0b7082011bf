#include "collapse/observables.hpp"

#include "collapse/error.hpp"

#include <cmath>

namespace collapse {

std::array<double, 2> TwoLobeDensityMatrix::eigenvalues() const noexcept {
  const double a = ll.real();
  const double d = rr.real();
  const Complex b = 0.5 * (lr + std::conj(rl));
  const double mean = 0.5 * (a + d);
  const double radius = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  return {mean - radius, mean + radius};
}

bool TwoLobeDensityMatrix::is_physical(double tol) const noexcept {
  const bool hermitian = std::abs(ll.imag()) <= tol && std::abs(rr.imag()) <= tol &&
                         std::abs(lr - std::conj(rl)) <= tol;
  const bool unit_trace = std::abs(trace() - Complex(1.0, 0.0)) <= tol;
  return hermitian && unit_trace && eigenvalues()[0] >= -tol;
}

TwoLobeDensityMatrix& TwoLobeDensityMatrix::operator+=(const TwoLobeDensityMatrix& o) noexcept {
  ll += o.ll;
  lr += o.lr;
  rl += o.rl;
  rr += o.rr;
  return *this;
}

TwoLobeDensityMatrix& TwoLobeDensityMatrix::operator*=(double s) noexcept {
  ll *= s;
  lr *= s;
  rl *= s;
  rr *= s;
  return *this;
}

double trace_distance(const TwoLobeDensityMatrix& a, const TwoLobeDensityMatrix& b) {
  // Eigenvalues of the Hermitian 2x2 difference are m +- r; the trace norm is
  // |m+r| + |m-r| = 2 max(|m|, r).
  const double p = (a.ll - b.ll).real();
  const double s = (a.rr - b.rr).real();
  const Complex off = 0.5 * ((a.lr - b.lr) + std::conj(a.rl - b.rl));
  const double m = 0.5 * (p + s);
  const double r = std::sqrt(0.25 * (p - s) * (p - s) + std::norm(off));
  return std::max(std::abs(m), r);
}

TwoLobeBasis::TwoLobeBasis(WaveFunction left_template, WaveFunction right_template, double boundary)
    : left_(normalized(std::move(left_template))),
      right_(normalized(std::move(right_template))),
      boundary_(boundary) {
  const double overlap = std::abs(inner_product(left_, right_));
  if (overlap > kMaxTemplateOverlap) {
    throw CollapseError(ErrorKind::degenerate_lobes,
                        "template overlap " + std::to_string(overlap) + " exceeds 1e-3");
  }
}

TwoLobeBasis TwoLobeBasis::from_templates(WaveFunction left_template, WaveFunction right_template) {
  const double boundary = 0.5 * (position_mean(left_template) + position_mean(right_template));
  return TwoLobeBasis(std::move(left_template), std::move(right_template), boundary);
}

TwoLobeDensityMatrix reduce_to_two_lobes(const WaveFunction& psi, const TwoLobeBasis& basis) {
  if (!(psi.grid() == basis.left().grid())) throw CollapseError(ErrorKind::grid_mismatch, "lobe templates on another grid");
  const auto [left_mass, right_mass] = half_line_masses(psi, basis.boundary());
  // Each projection runs over its own half-line only, so |c_left|^2 <= left_mass
  // and |c_right|^2 <= right_mass (Cauchy-Schwarz): rho stays positive.
  const auto& grid = psi.grid();
  Complex c_left = 0.0;
  Complex c_right = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (grid.x(i) < basis.boundary()) {
      c_left += std::conj(basis.left()[i]) * psi[i];
    } else {
      c_right += std::conj(basis.right()[i]) * psi[i];
    }
  }
  c_left *= grid.dx();
  c_right *= grid.dx();
  TwoLobeDensityMatrix rho;
  rho.ll = left_mass;
  rho.rr = right_mass;
  rho.lr = c_left * std::conj(c_right);
  rho.rl = std::conj(rho.lr);
  return rho;
}

TwoLobeDensityMatrix lindblad_oracle_evolve(const TwoLobeDensityMatrix& rho0, double decay_rate, double t) {
  if (!(decay_rate >= 0.0)) throw CollapseError(ErrorKind::invalid_argument, "decay_rate must be >= 0");
  if (!(t >= 0.0)) throw CollapseError(ErrorKind::invalid_argument, "t must be >= 0");
  TwoLobeDensityMatrix rho = rho0;
  const double factor = std::exp(-decay_rate * t);
  rho.lr *= factor;
  rho.rl *= factor;
  return rho;
}

}  // namespace collapse
