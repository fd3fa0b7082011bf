#include "collapse/error.hpp"
#include "collapse/harness/config.hpp"
#include "collapse/harness/experiment.hpp"
#include "collapse/harness/serialize.hpp"
#include "collapse/harness/verify.hpp"
#include "collapse/params.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace collapse;
using namespace collapse::harness;

enum ExitCode { kOk = 0, kValidation = 1, kRuntime = 2, kVerifyFailed = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct RunArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  std::optional<std::string> output;
  std::optional<std::string> format;
};

int cmd_run(const RunArgs& a) {
  auto config = load_config(read_file(a.config_path));
  if (a.seed) config.master_seed = *a.seed;
  if (a.output) config.output_path = *a.output;
  if (a.format) config.format = *parse_format(*a.format);
  const auto text = serialize(run_experiment(config, a.workers), config.format);
  if (config.output_path.empty() || config.output_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(config.output_path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + config.output_path);
  }
  return kOk;
}

struct VerifyArgs {
  std::optional<std::string> subset;
  std::string scale = "quick";
  std::optional<std::string> fault;
  std::size_t workers = 1;
  std::uint64_t seed = VerifyOptions{}.seed;
};

int cmd_verify(const VerifyArgs& a) {
  VerifyOptions o;
  if (a.subset) o.subset = split_list(*a.subset);
  o.scale = a.scale == "full" ? VerifyScale::full : VerifyScale::quick;
  o.inject_lambda_scale = a.fault.has_value();
  o.workers = a.workers;
  o.seed = a.seed;
  const auto report = run_verify_suite(o);
  std::cout << format_report(report);
  return report.passed() ? kOk : kVerifyFailed;
}

struct ConvertArgs {
  std::optional<std::string> quantity;
  double value = 0.0;
  std::string to = "natural";
};

int cmd_convert(const ConvertArgs& a) {
  const auto u = UnitSystem::reference();
  nlohmann::json out;
  out["units"] = units_block();
  out["gamma_3d_cm3_per_s"] = gamma_3d_from_lambda(u.lambda_per_s, u.r_c_cm);
  out["lambda_natural"] = u.rate_to_natural(u.lambda_per_s);
  if (a.quantity) {
    const bool natural = a.to == "natural";
    const auto& q = *a.quantity;
    double v = 0.0;
    if (q == "rate") v = natural ? u.rate_to_natural(a.value) : u.rate_to_cgs(a.value);
    else if (q == "time") v = natural ? u.time_to_natural(a.value) : u.time_to_cgs(a.value);
    else if (q == "length") v = natural ? u.length_to_natural(a.value) : u.length_to_cgs(a.value);
    else v = natural ? u.mass_to_natural(a.value) : u.mass_to_cgs(a.value);
    out["conversion"] = {{"quantity", q}, {"input", a.value}, {"to", a.to}, {"result", v}};
  }
  std::cout << out.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spontaneous-collapse trajectory simulator"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run the experiment described by a configuration file");
  run->add_option("config", run_args.config_path, "Configuration file (JSON)")->required();
  run->add_option("--seed", run_args.seed, "Override master_seed");
  run->add_option("--workers", run_args.workers, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--output", run_args.output, "Output file ('-' for stdout)");
  run->add_option("--format", run_args.format, "Output format")->check(CLI::IsMember({"table", "tree"}));

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run the self-verification suite");
  verify->add_option("--subset", verify_args.subset, "Comma-separated check names (empty runs none)");
  verify->add_option("--scale", verify_args.scale, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--inject-fault", verify_args.fault, "Mutation test")->check(CLI::IsMember({"lambda-scale"}));
  verify->add_option("--workers", verify_args.workers, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_args.seed, "Suite seed");

  auto* schema = app.add_subcommand("schema", "Print the configuration schema");

  ConvertArgs convert_args;
  auto* convert = app.add_subcommand("convert-units", "Print the unit block or convert one quantity");
  convert->add_option("--quantity", convert_args.quantity, "rate, time, length or mass")
      ->check(CLI::IsMember({"rate", "time", "length", "mass"}));
  convert->add_option("--value", convert_args.value, "Value to convert");
  convert->add_option("--to", convert_args.to, "natural or cgs")->check(CLI::IsMember({"natural", "cgs"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*verify) return cmd_verify(verify_args);
    if (*schema) {
      std::cout << config_schema().dump(2) << "\n";
      return kOk;
    }
    if (*convert) return cmd_convert(convert_args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << to_string(e.kind()) << "\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v.field << ": " << v.rule << "\n";
    return kValidation;
  } catch (const CollapseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::invalid_argument ? kValidation : kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
