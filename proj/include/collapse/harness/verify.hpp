#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace collapse::harness {

struct CheckResult {
  std::string name;
  std::string quantity;    // what `measured` is
  double measured = 0.0;
  double tolerance = 0.0;
  bool upper_bound = true;  // pass when measured <= tolerance, else measured >= tolerance
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

enum class VerifyScale { quick, full };

struct VerifyOptions {
  /// Names of checks to run; std::nullopt runs all, an empty list runs none.
  std::optional<std::vector<std::string>> subset;
  VerifyScale scale = VerifyScale::quick;
  /// Mutation test: the amplification simulation runs with lambda doubled.
  bool inject_lambda_scale = false;
  std::size_t workers = 1;
  std::uint64_t seed = 20240601;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

const std::vector<std::string>& check_names();

/// Throws invalid_argument on an unknown check name.
VerifyReport run_verify_suite(const VerifyOptions& options);

std::string format_report(const VerifyReport& report);

// Individual checks, sized explicitly.

CheckResult check_completeness(std::size_t n_states, std::size_t n_sites, std::uint64_t seed);
CheckResult check_born_grw(std::size_t n_trajectories, std::uint64_t seed, std::size_t workers);
CheckResult check_born_csl(std::size_t n_trajectories, std::uint64_t seed, std::size_t workers);
CheckResult check_amplification(std::size_t n_per_count, double lambda_scale, std::uint64_t seed,
                                std::size_t workers);
CheckResult check_norm_contract(std::size_t n_steps, std::uint64_t seed);
CheckResult check_unitary_norm(std::size_t n_steps);
CheckResult check_calibration(std::size_t n_trajectories, std::uint64_t seed, std::size_t workers);

/// Two-lobe CSL ensemble on 64 sites, shared by the Lindblad and martingale checks.
struct LobeEnsembleChecks {
  CheckResult lindblad;
  CheckResult martingale;
};
LobeEnsembleChecks check_lobe_ensemble(std::size_t n_trajectories, std::size_t n_calibration, std::uint64_t seed,
                                       std::size_t workers, double trace_distance_tolerance);

CheckResult check_grw_csl_agreement(std::size_t n_trajectories, std::uint64_t seed, std::size_t workers);
CheckResult check_unitary_baseline();
CheckResult check_csl_zero_coupling();
CheckResult check_determinism(std::size_t n_trajectories);
CheckResult check_units();

}  // namespace collapse::harness
