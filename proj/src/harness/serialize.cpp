#include "collapse/harness/serialize.hpp"

#include "collapse/params.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#ifndef COLLAPSE_VERSION
#define COLLAPSE_VERSION "0.0.0"
#endif

namespace collapse::harness {

using nlohmann::json;

std::string version_string() { return COLLAPSE_VERSION; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json units_block() {
  const auto u = UnitSystem::reference();
  return json{{"system", "natural: hbar = m0 = r_C = 1"},
              {"hbar_erg_s", u.hbar_erg_s},
              {"m0_g", u.m0_g},
              {"r_C_cm", u.r_c_cm},
              {"lambda_per_s", u.lambda_per_s},
              {"time_unit_s", u.time_unit_s()},
              {"length_unit_cm", u.r_c_cm},
              {"mass_unit_g", u.m0_g},
              {"rate_unit_per_s", 1.0 / u.time_unit_s()}};
}

namespace {

json rho_json(const TwoLobeDensityMatrix& r) {
  return json{{"ll", {r.ll.real(), r.ll.imag()}},
              {"lr", {r.lr.real(), r.lr.imag()}},
              {"rl", {r.rl.real(), r.rl.imag()}},
              {"rr", {r.rr.real(), r.rr.imag()}}};
}

json summary_json(const EnsembleSummary& s) {
  json rho = json::array();
  for (const auto& r : s.mean_rho) rho.push_back(rho_json(r));
  return json{{"n_trajectories", s.n_trajectories},
              {"sample_times", s.sample_times},
              {"mean_lobe_mass", s.mean_lobe_mass},
              {"mean_lobe_mass_stderr", s.mean_lobe_mass_stderr},
              {"outcome_frequencies", s.outcome_frequencies},
              {"coherence", s.coherence_series},
              {"coherence_stderr", s.coherence_stderr},
              {"mean_rho", rho},
              {"var_x_median", s.var_x_median_series},
              {"mean_jump_count", s.mean_jump_count}};
}

json record_json(std::size_t index, const TrajectoryRecord& r) {
  json series = json::array();
  for (const auto& o : r.series) {
    series.push_back({{"time", o.time},
                      {"mean_x", o.mean_x},
                      {"var_x", o.var_x},
                      {"left_mass", o.left_mass},
                      {"right_mass", o.right_mass},
                      {"rho_lr", {o.rho.lr.real(), o.rho.lr.imag()}},
                      {"jump_count", o.jump_count}});
  }
  json jumps = json::array();
  for (const auto& j : r.jumps) {
    json e = {{"time", j.time}, {"center", j.center}, {"pre_jump_norm_sq", j.pre_jump_norm_sq}};
    e["lobe"] = j.lobe_label ? json(*j.lobe_label) : json(nullptr);
    jumps.push_back(e);
  }
  json out = {{"index", index},
              {"seed", r.seed},
              {"final_time", r.final_time},
              {"absorbed", r.absorbed},
              {"outcome", r.outcome ? json(*r.outcome) : json(nullptr)},
              {"norm",
               {{"steps", r.norm.steps},
                {"cumulative_correction", r.norm.cumulative_correction},
                {"max_step_correction", r.norm.max_step_correction},
                {"cumulative_expected_correction", r.norm.cumulative_expected_correction}}},
              {"jumps", jumps},
              {"series", series}};
  return out;
}

}  // namespace

std::string serialize_tree(const ExperimentResult& result) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["generator"] = {{"name", "collapse_sim"}, {"version", version_string()}};
  doc["seed_derivation"] =
      "trajectory seed = first 8 bytes, little-endian, of SHA-256(le64(master_seed) || le64(index))";
  doc["units"] = units_block();
  doc["config"] = to_json(result.config);
  doc["summary"] = summary_json(result.summary);
  json records = json::array();
  for (const auto& [index, rec] : result.records.records()) records.push_back(record_json(index, rec));
  doc["trajectories"] = records;
  return doc.dump(2) + "\n";
}

std::string serialize_table(const ExperimentResult& result) {
  std::ostringstream out;
  const auto u = UnitSystem::reference();
  out << "# collapse_sim " << version_string() << " format_version " << kFormatVersion << "\n";
  out << "# model " << to_string(result.config.model) << " master_seed " << result.config.master_seed
      << " n_trajectories " << result.config.n_trajectories << "\n";
  out << "# units natural: hbar = m0 = r_C = 1; hbar[erg s] = " << format_number(u.hbar_erg_s)
      << ", m0[g] = " << format_number(u.m0_g) << ", r_C[cm] = " << format_number(u.r_c_cm)
      << ", t_nat[s] = " << format_number(u.time_unit_s()) << "\n";
  out << "trajectory,time[t_nat],mean_x[r_C],var_x[r_C^2],left_mass,right_mass,rho_lr_re,rho_lr_im,jump_count\n";
  for (const auto& [index, rec] : result.records.records()) {
    for (const auto& o : rec.series) {
      out << index << ',' << format_number(o.time) << ',' << format_number(o.mean_x) << ','
          << format_number(o.var_x) << ',' << format_number(o.left_mass) << ',' << format_number(o.right_mass)
          << ',' << format_number(o.rho.lr.real()) << ',' << format_number(o.rho.lr.imag()) << ','
          << o.jump_count << '\n';
    }
  }
  return out.str();
}

std::string serialize(const ExperimentResult& result, OutputFormat format) {
  return format == OutputFormat::table ? serialize_table(result) : serialize_tree(result);
}

}  // namespace collapse::harness
