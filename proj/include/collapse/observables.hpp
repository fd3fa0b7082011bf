#pragma once

#include "collapse/lattice.hpp"

#include <array>

namespace collapse {

/// 2x2 density matrix in the {left lobe, right lobe} basis.
struct TwoLobeDensityMatrix {
  Complex ll{};
  Complex lr{};
  Complex rl{};
  Complex rr{};

  Complex trace() const noexcept { return ll + rr; }
  /// Eigenvalues of the Hermitian part, ascending.
  std::array<double, 2> eigenvalues() const noexcept;
  /// Hermitian, unit trace and positive semidefinite within `tol`.
  bool is_physical(double tol = 1e-9) const noexcept;

  TwoLobeDensityMatrix& operator+=(const TwoLobeDensityMatrix& o) noexcept;
  TwoLobeDensityMatrix& operator*=(double s) noexcept;

  friend bool operator==(const TwoLobeDensityMatrix&, const TwoLobeDensityMatrix&) = default;
};

/// Half the trace norm of a - b.
double trace_distance(const TwoLobeDensityMatrix& a, const TwoLobeDensityMatrix& b);

/// Reference frame for a two-lobe (cat) experiment: a boundary splitting the
/// line and the two initial lobe modes, frozen at t = 0.
class TwoLobeBasis {
 public:
  static constexpr double kMaxTemplateOverlap = 1e-3;

  /// Templates are normalized internally. Throws degenerate_lobes when
  /// |<left|right>| exceeds kMaxTemplateOverlap.
  TwoLobeBasis(WaveFunction left_template, WaveFunction right_template, double boundary);
  /// Boundary at the midpoint between the template centres.
  static TwoLobeBasis from_templates(WaveFunction left_template, WaveFunction right_template);

  double boundary() const noexcept { return boundary_; }
  const WaveFunction& left() const noexcept { return left_; }
  const WaveFunction& right() const noexcept { return right_; }

 private:
  WaveFunction left_;
  WaveFunction right_;
  double boundary_;
};

/// Diagonal: half-line masses about the boundary. Off-diagonal: product of
/// the template projections <L|psi><psi|R>, each taken over its own half-line.
TwoLobeDensityMatrix reduce_to_two_lobes(const WaveFunction& psi, const TwoLobeBasis& basis);

/// Two-lobe closure of the ensemble master equation for H = 0: populations
/// are frozen and the coherence decays as exp(-decay_rate * t).
TwoLobeDensityMatrix lindblad_oracle_evolve(const TwoLobeDensityMatrix& rho0, double decay_rate, double t);

}  // namespace collapse
