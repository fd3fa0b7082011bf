#pragma once

#include "collapse/error.hpp"
#include "collapse/grw.hpp"
#include "collapse/lattice.hpp"
#include "collapse/params.hpp"
#include "collapse/propagator.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace collapse::harness {

enum class Model { schrodinger, grw, csl };
enum class OutputFormat { table, tree };

struct PacketSpec {
  double x0 = 0.0;
  double sigma = 1.0;
  double k0 = 0.0;
  friend bool operator==(const PacketSpec&, const PacketSpec&) = default;
};

struct InitialStateSpec {
  enum class Kind { gaussian, cat };
  Kind kind = Kind::gaussian;
  PacketSpec packet;       // gaussian
  PacketSpec left, right;  // cat
  double weight_left = 1.0;
  double weight_right = 1.0;
  friend bool operator==(const InitialStateSpec&, const InitialStateSpec&) = default;
};

struct PotentialSpec {
  enum class Kind { zero, harmonic };
  Kind kind = Kind::zero;
  double omega = 1.0;
  double center = 0.0;
  friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;
};

struct ExperimentConfig {
  Model model = Model::schrodinger;
  std::size_t n_sites = 256;
  double dx = 0.1;
  double x_min = -12.8;
  InitialStateSpec initial;
  double hbar = 1.0;
  double mass = 1.0;
  double m0 = 1.0;
  bool kinetic = true;
  PotentialSpec potential;
  double lambda_rate = 0.0;
  double r_c = 1.0;
  std::optional<std::uint64_t> n_nucleons;
  /// Optional echo of gamma; must agree with gamma_from_lambda when present.
  std::optional<double> gamma;
  double t_final = 1.0;
  double dt = 1e-3;
  std::vector<double> sample_times;
  std::optional<double> absorption_threshold;
  std::size_t n_trajectories = 1;
  std::uint64_t master_seed = 0;
  std::string output_path;
  OutputFormat format = OutputFormat::tree;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct ConfigViolation {
  std::string field;
  std::string rule;
};

/// Raised by load_config. Carries every violation found, not just the first.
class ConfigError : public CollapseError {
 public:
  ConfigError(ErrorKind kind, std::vector<ConfigViolation> violations);
  const std::vector<ConfigViolation>& violations() const noexcept { return violations_; }

 private:
  std::vector<ConfigViolation> violations_;
};

/// Parse and validate a JSON configuration document.
/// Throws ConfigError (parse_error with line/column, or validation_error).
ExperimentConfig load_config(const std::string& text);
/// Validation only; returns the violations (empty when valid).
std::vector<ConfigViolation> validate(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentConfig& config);
std::string serialize_config(const ExperimentConfig& config);

/// Published schema of the configuration document.
nlohmann::json config_schema();

std::string_view to_string(Model model);
std::string_view to_string(OutputFormat format);
std::optional<OutputFormat> parse_format(std::string_view s);

// Domain objects built from a validated config.
LatticeGrid make_grid(const ExperimentConfig& config);
WaveFunction make_initial_state(const ExperimentConfig& config);
std::optional<TwoLobeBasis> make_lobe_basis(const ExperimentConfig& config);
HamiltonianSpec make_hamiltonian(const ExperimentConfig& config);
CollapseParams make_params(const ExperimentConfig& config);

}  // namespace collapse::harness
