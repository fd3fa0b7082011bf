#include "collapse/harness/config.hpp"

#include "collapse/csl.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace collapse::harness {

using nlohmann::json;

namespace {

std::string join_violations(const std::vector<ConfigViolation>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << "; ";
    out << v[i].field << ": " << v[i].rule;
  }
  return out.str();
}

std::string fmt_double(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

// Typed field access that records violations instead of throwing.
class Reader {
 public:
  explicit Reader(std::vector<ConfigViolation>& out) : out_(out) {}

  const json* object(const json& parent, const std::string& path, const char* key, bool required) {
    if (!parent.contains(key)) {
      if (required) out_.push_back({join(path, key), "required field missing"});
      return nullptr;
    }
    const json& v = parent.at(key);
    if (!v.is_object()) {
      out_.push_back({join(path, key), "must be an object"});
      return nullptr;
    }
    return &v;
  }

  void number(const json& parent, const std::string& path, const char* key, double& dst, bool required) {
    if (!parent.contains(key)) {
      if (required) out_.push_back({join(path, key), "required field missing"});
      return;
    }
    const json& v = parent.at(key);
    if (!v.is_number()) {
      out_.push_back({join(path, key), "must be a number"});
      return;
    }
    dst = v.get<double>();
  }

  template <class Int>
  void unsigned_int(const json& parent, const std::string& path, const char* key, Int& dst, bool required) {
    if (!parent.contains(key)) {
      if (required) out_.push_back({join(path, key), "required field missing"});
      return;
    }
    const json& v = parent.at(key);
    if (!v.is_number_unsigned()) {
      out_.push_back({join(path, key), "must be a non-negative integer"});
      return;
    }
    dst = static_cast<Int>(v.get<std::uint64_t>());
  }

  void boolean(const json& parent, const std::string& path, const char* key, bool& dst) {
    if (!parent.contains(key)) return;
    const json& v = parent.at(key);
    if (!v.is_boolean()) {
      out_.push_back({join(path, key), "must be true or false"});
      return;
    }
    dst = v.get<bool>();
  }

  std::optional<std::string> string(const json& parent, const std::string& path, const char* key, bool required) {
    if (!parent.contains(key)) {
      if (required) out_.push_back({join(path, key), "required field missing"});
      return std::nullopt;
    }
    const json& v = parent.at(key);
    if (!v.is_string()) {
      out_.push_back({join(path, key), "must be a string"});
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : obj.items()) {
      if (!ok.count(k)) out_.push_back({join(path, k), "unknown field"});
    }
  }

  void violation(std::string field, std::string rule) { out_.push_back({std::move(field), std::move(rule)}); }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  std::vector<ConfigViolation>& out_;
};

void read_packet(Reader& r, const json& obj, const std::string& path, PacketSpec& p) {
  r.only_keys(obj, path, {"x0", "sigma", "k0", "kind"});
  r.number(obj, path, "x0", p.x0, true);
  r.number(obj, path, "sigma", p.sigma, true);
  r.number(obj, path, "k0", p.k0, false);
}

void packet_checks(const ExperimentConfig& c, const PacketSpec& p, const std::string& path,
                   std::vector<ConfigViolation>& out) {
  if (!(p.sigma >= 2.0 * c.dx)) out.push_back({path + ".sigma", "packet-too-narrow: sigma must be >= 2*dx"});
  const double x_max = c.x_min + static_cast<double>(c.n_sites - 1) * c.dx;
  if (p.x0 < c.x_min + 4.0 * p.sigma || p.x0 > x_max - 4.0 * p.sigma) {
    out.push_back({path + ".x0", "packet-outside-grid: x0 must lie in [x_min + 4 sigma, x_max - 4 sigma]"});
  }
}

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

ConfigError::ConfigError(ErrorKind kind, std::vector<ConfigViolation> violations)
    : CollapseError(kind, join_violations(violations)), violations_(std::move(violations)) {}

std::string_view to_string(Model model) {
  switch (model) {
    case Model::schrodinger: return "schrodinger";
    case Model::grw: return "grw";
    case Model::csl: return "csl";
  }
  return "?";
}

std::string_view to_string(OutputFormat format) { return format == OutputFormat::table ? "table" : "tree"; }

std::optional<OutputFormat> parse_format(std::string_view s) {
  if (s == "table") return OutputFormat::table;
  if (s == "tree") return OutputFormat::tree;
  return std::nullopt;
}

std::vector<ConfigViolation> validate(const ExperimentConfig& c) {
  std::vector<ConfigViolation> out;
  const bool grid_ok = c.n_sites >= LatticeGrid::kMinSites && positive(c.dx) && std::isfinite(c.x_min);
  if (c.n_sites < LatticeGrid::kMinSites) out.push_back({"grid.n_sites", "must be >= 8"});
  if (!positive(c.dx)) out.push_back({"grid.dx", "must be > 0"});
  if (!std::isfinite(c.x_min)) out.push_back({"grid.x_min", "must be finite"});

  if (!positive(c.hbar)) out.push_back({"physics.hbar", "positivity: must be > 0"});
  if (!positive(c.mass)) out.push_back({"physics.mass", "positivity: must be > 0"});
  if (!positive(c.m0)) out.push_back({"physics.m0", "positivity: must be > 0"});
  const bool lambda_ok = c.lambda_rate >= 0.0 && std::isfinite(c.lambda_rate);
  if (!lambda_ok) {
    out.push_back({"collapse.lambda_rate", "positivity: must be >= 0 (0 is the collapse-free limit)"});
  }
  if (!positive(c.r_c)) out.push_back({"collapse.r_c", "positivity: must be > 0"});
  if (c.n_nucleons && *c.n_nucleons < 1) out.push_back({"collapse.n_nucleons", "must be >= 1"});
  if (c.gamma && lambda_ok && positive(c.r_c)) {
    const double expected = gamma_from_lambda(c.lambda_rate, c.r_c);
    if (!(std::abs(*c.gamma - expected) <= 1e-9 * std::max(std::abs(expected), 1e-300))) {
      out.push_back({"collapse.gamma", "gamma-lambda relation: gamma must equal lambda_rate * (4 pi r_c^2)^(1/2) = " +
                                           fmt_double(expected) + ", got " + fmt_double(*c.gamma)});
    }
  }
  if (c.potential.kind == PotentialSpec::Kind::harmonic && !positive(c.potential.omega)) {
    out.push_back({"hamiltonian.potential.omega", "must be > 0"});
  }

  if (grid_ok) {
    if (c.initial.kind == InitialStateSpec::Kind::gaussian) {
      packet_checks(c, c.initial.packet, "initial_state", out);
    } else {
      packet_checks(c, c.initial.left, "initial_state.left", out);
      packet_checks(c, c.initial.right, "initial_state.right", out);
      if (!(c.initial.left.x0 < c.initial.right.x0)) {
        out.push_back({"initial_state.left.x0", "left lobe must lie left of the right lobe"});
      }
      if (!std::isfinite(c.initial.weight_left) || !std::isfinite(c.initial.weight_right) ||
          (c.initial.weight_left == 0.0 && c.initial.weight_right == 0.0)) {
        out.push_back({"initial_state.weights", "zero-vector: weights must be finite and not both zero"});
      }
    }
  }

  if (!positive(c.t_final)) out.push_back({"time.t_final", "must be > 0"});
  if (!positive(c.dt)) out.push_back({"time.dt", "must be > 0"});
  double prev = 0.0;
  for (double t : c.sample_times) {
    if (!(t >= prev) || t > c.t_final) {
      out.push_back({"time.sample_times", "must be sorted and within [0, t_final]"});
      break;
    }
    prev = t;
  }
  if (c.absorption_threshold) {
    if (c.model != Model::csl) out.push_back({"absorption_threshold", "only valid for model csl"});
    if (c.initial.kind != InitialStateSpec::Kind::cat) out.push_back({"absorption_threshold", "needs a cat initial state"});
    if (!(*c.absorption_threshold > 0.5 && *c.absorption_threshold < 1.0)) {
      out.push_back({"absorption_threshold", "must lie in (0.5, 1)"});
    }
  }
  if (c.n_trajectories < 1) out.push_back({"n_trajectories", "must be >= 1"});

  // Checks that need the domain objects; only meaningful once the basics hold.
  if (out.empty()) {
    try {
      const auto grid = make_grid(c);
      const auto h = make_hamiltonian(c);
      double dt_max = unitary_dt_max(h, grid);
      if (c.model == Model::csl) dt_max = csl_dt_max(make_params(c), SmearingKernel(grid, c.r_c), h);
      if (c.dt > dt_max * (1.0 + 1e-12)) {
        out.push_back({"time.dt", "unstable-dt: exceeds the stability bound dt_max = " + fmt_double(dt_max)});
      }
      (void)make_initial_state(c);
      (void)make_lobe_basis(c);
    } catch (const CollapseError& e) {
      out.push_back({"initial_state", e.what()});
    }
  }
  return out;
}

ExperimentConfig load_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError(ErrorKind::parse_error,
                      {{"document", "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                                        e.what()}});
  }

  std::vector<ConfigViolation> out;
  Reader r(out);
  ExperimentConfig c;
  if (!doc.is_object()) throw ConfigError(ErrorKind::parse_error, {{"document", "top level must be an object"}});
  r.only_keys(doc, "", {"model", "grid", "initial_state", "physics", "hamiltonian", "collapse", "time",
                        "absorption_threshold", "n_trajectories", "master_seed", "output"});

  if (auto m = r.string(doc, "", "model", true)) {
    if (*m == "schrodinger") c.model = Model::schrodinger;
    else if (*m == "grw") c.model = Model::grw;
    else if (*m == "csl") c.model = Model::csl;
    else r.violation("model", "must be one of schrodinger, grw, csl");
  }
  if (const auto* g = r.object(doc, "", "grid", true)) {
    r.only_keys(*g, "grid", {"n_sites", "dx", "x_min"});
    r.unsigned_int(*g, "grid", "n_sites", c.n_sites, true);
    r.number(*g, "grid", "dx", c.dx, true);
    r.number(*g, "grid", "x_min", c.x_min, true);
  }
  if (const auto* s = r.object(doc, "", "initial_state", true)) {
    const auto kind = r.string(*s, "initial_state", "kind", true);
    if (kind == "gaussian") {
      c.initial.kind = InitialStateSpec::Kind::gaussian;
      read_packet(r, *s, "initial_state", c.initial.packet);
    } else if (kind == "cat") {
      c.initial.kind = InitialStateSpec::Kind::cat;
      r.only_keys(*s, "initial_state", {"kind", "left", "right", "weights"});
      if (const auto* l = r.object(*s, "initial_state", "left", true)) read_packet(r, *l, "initial_state.left", c.initial.left);
      if (const auto* rt = r.object(*s, "initial_state", "right", true)) read_packet(r, *rt, "initial_state.right", c.initial.right);
      if (s->contains("weights")) {
        const auto& w = s->at("weights");
        if (w.is_array() && w.size() == 2 && w[0].is_number() && w[1].is_number()) {
          c.initial.weight_left = w[0].get<double>();
          c.initial.weight_right = w[1].get<double>();
        } else {
          r.violation("initial_state.weights", "must be an array of two numbers");
        }
      }
    } else if (kind) {
      r.violation("initial_state.kind", "must be gaussian or cat");
    }
  }
  if (const auto* p = r.object(doc, "", "physics", false)) {
    r.only_keys(*p, "physics", {"hbar", "mass", "m0"});
    r.number(*p, "physics", "hbar", c.hbar, false);
    r.number(*p, "physics", "mass", c.mass, false);
    r.number(*p, "physics", "m0", c.m0, false);
  }
  if (const auto* h = r.object(doc, "", "hamiltonian", false)) {
    r.only_keys(*h, "hamiltonian", {"kinetic", "potential"});
    r.boolean(*h, "hamiltonian", "kinetic", c.kinetic);
    if (const auto* v = r.object(*h, "hamiltonian", "potential", false)) {
      r.only_keys(*v, "hamiltonian.potential", {"kind", "omega", "center"});
      const auto kind = r.string(*v, "hamiltonian.potential", "kind", true);
      if (kind == "zero") {
        c.potential.kind = PotentialSpec::Kind::zero;
      } else if (kind == "harmonic") {
        c.potential.kind = PotentialSpec::Kind::harmonic;
        r.number(*v, "hamiltonian.potential", "omega", c.potential.omega, true);
        r.number(*v, "hamiltonian.potential", "center", c.potential.center, false);
      } else if (kind) {
        r.violation("hamiltonian.potential.kind", "must be zero or harmonic");
      }
    }
  }
  if (const auto* col = r.object(doc, "", "collapse", c.model != Model::schrodinger)) {
    r.only_keys(*col, "collapse", {"lambda_rate", "r_c", "n_nucleons", "gamma"});
    r.number(*col, "collapse", "lambda_rate", c.lambda_rate, true);
    r.number(*col, "collapse", "r_c", c.r_c, false);
    if (col->contains("n_nucleons")) {
      std::uint64_t n = 0;
      r.unsigned_int(*col, "collapse", "n_nucleons", n, true);
      c.n_nucleons = n;
    }
    if (col->contains("gamma")) {
      double g = 0.0;
      r.number(*col, "collapse", "gamma", g, true);
      c.gamma = g;
    }
  }
  if (const auto* t = r.object(doc, "", "time", true)) {
    r.only_keys(*t, "time", {"t_final", "dt", "sample_times", "n_samples"});
    r.number(*t, "time", "t_final", c.t_final, true);
    r.number(*t, "time", "dt", c.dt, true);
    if (t->contains("sample_times") && t->contains("n_samples")) {
      r.violation("time", "give either sample_times or n_samples, not both");
    } else if (t->contains("sample_times")) {
      const auto& st = t->at("sample_times");
      if (!st.is_array()) {
        r.violation("time.sample_times", "must be an array of numbers");
      } else {
        for (const auto& v : st) {
          if (!v.is_number()) {
            r.violation("time.sample_times", "must be an array of numbers");
            break;
          }
          c.sample_times.push_back(v.get<double>());
        }
      }
    } else if (t->contains("n_samples")) {
      std::size_t n = 0;
      r.unsigned_int(*t, "time", "n_samples", n, true);
      if (n == 1) {
        c.sample_times = {c.t_final};
      } else {
        for (std::size_t k = 0; k < n; ++k) {
          c.sample_times.push_back(c.t_final * static_cast<double>(k) / static_cast<double>(n - 1));
        }
      }
    }
  }
  if (doc.contains("absorption_threshold")) {
    double a = 0.0;
    r.number(doc, "", "absorption_threshold", a, true);
    c.absorption_threshold = a;
  }
  r.unsigned_int(doc, "", "n_trajectories", c.n_trajectories, false);
  r.unsigned_int(doc, "", "master_seed", c.master_seed, false);
  if (const auto* o = r.object(doc, "", "output", false)) {
    r.only_keys(*o, "output", {"path", "format"});
    if (auto p = r.string(*o, "output", "path", false)) c.output_path = *p;
    if (auto f = r.string(*o, "output", "format", false)) {
      if (auto parsed = parse_format(*f)) c.format = *parsed;
      else r.violation("output.format", "must be table or tree");
    }
  }

  // Semantic checks run even after structural errors so that every problem is
  // reported at once; fields already flagged are not reported twice.
  for (auto& v : validate(c)) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const ConfigViolation& o) { return o.field == v.field; });
    if (!seen) out.push_back(std::move(v));
  }
  if (!out.empty()) throw ConfigError(ErrorKind::validation_error, std::move(out));
  return c;
}

namespace {
json packet_json(const PacketSpec& p) { return json{{"x0", p.x0}, {"sigma", p.sigma}, {"k0", p.k0}}; }
}  // namespace

json to_json(const ExperimentConfig& c) {
  json doc;
  doc["model"] = std::string(to_string(c.model));
  doc["grid"] = {{"n_sites", c.n_sites}, {"dx", c.dx}, {"x_min", c.x_min}};
  if (c.initial.kind == InitialStateSpec::Kind::gaussian) {
    json s = packet_json(c.initial.packet);
    s["kind"] = "gaussian";
    doc["initial_state"] = s;
  } else {
    doc["initial_state"] = {{"kind", "cat"},
                            {"left", packet_json(c.initial.left)},
                            {"right", packet_json(c.initial.right)},
                            {"weights", {c.initial.weight_left, c.initial.weight_right}}};
  }
  doc["physics"] = {{"hbar", c.hbar}, {"mass", c.mass}, {"m0", c.m0}};
  json pot;
  if (c.potential.kind == PotentialSpec::Kind::zero) {
    pot = {{"kind", "zero"}};
  } else {
    pot = {{"kind", "harmonic"}, {"omega", c.potential.omega}, {"center", c.potential.center}};
  }
  doc["hamiltonian"] = {{"kinetic", c.kinetic}, {"potential", pot}};
  json col = {{"lambda_rate", c.lambda_rate}, {"r_c", c.r_c}};
  if (c.n_nucleons) col["n_nucleons"] = *c.n_nucleons;
  if (c.gamma) col["gamma"] = *c.gamma;
  doc["collapse"] = col;
  doc["time"] = {{"t_final", c.t_final}, {"dt", c.dt}, {"sample_times", c.sample_times}};
  if (c.absorption_threshold) doc["absorption_threshold"] = *c.absorption_threshold;
  doc["n_trajectories"] = c.n_trajectories;
  doc["master_seed"] = c.master_seed;
  doc["output"] = {{"path", c.output_path}, {"format", std::string(to_string(c.format))}};
  return doc;
}

std::string serialize_config(const ExperimentConfig& config) { return to_json(config).dump(2); }

json config_schema() {
  const json packet = {{"x0", "number, packet centre [r_C]"},
                       {"sigma", "number, position standard deviation [r_C], >= 2*dx"},
                       {"k0", "number, mean wavenumber [1/r_C], default 0"}};
  return json{
      {"model", "string: schrodinger | grw | csl (required)"},
      {"grid", {{"n_sites", "integer >= 8 (required)"}, {"dx", "number > 0 [r_C] (required)"},
                {"x_min", "number [r_C] (required)"}}},
      {"initial_state",
       {{"kind", "string: gaussian | cat (required)"},
        {"gaussian", packet},
        {"cat", {{"left", packet}, {"right", packet}, {"weights", "[a, b] real amplitudes, default [1, 1]"}}}}},
      {"physics", {{"hbar", "number > 0, default 1"}, {"mass", "number > 0 [m0], default 1"},
                   {"m0", "number > 0, default 1"}}},
      {"hamiltonian",
       {{"kinetic", "bool, default true; false with a zero potential gives H = 0"},
        {"potential", {{"kind", "zero | harmonic"}, {"omega", "number > 0"}, {"center", "number, default 0"}}}}},
      {"collapse",
       {{"lambda_rate", "number >= 0 [1/t_nat] (required for grw and csl)"},
        {"r_c", "number > 0, default 1"},
        {"n_nucleons", "integer >= 1, default round(mass/m0)"},
        {"gamma", "optional; derived from lambda_rate and r_c, rejected if inconsistent"}}},
      {"time",
       {{"t_final", "number > 0 (required)"},
        {"dt", "number > 0, at most the model's stability bound (required)"},
        {"sample_times", "sorted numbers in [0, t_final]"},
        {"n_samples", "integer; evenly spaced sample times from 0 to t_final (alternative to sample_times)"}}},
      {"absorption_threshold", "csl with cat only: stop a trajectory once one lobe exceeds this mass"},
      {"n_trajectories", "integer >= 1, default 1"},
      {"master_seed", "unsigned 64-bit integer, default 0"},
      {"output", {{"path", "string; stdout when empty"}, {"format", "table | tree, default tree"}}}};
}

LatticeGrid make_grid(const ExperimentConfig& c) { return LatticeGrid(c.n_sites, c.dx, c.x_min); }

WaveFunction make_initial_state(const ExperimentConfig& c) {
  const auto grid = make_grid(c);
  if (c.initial.kind == InitialStateSpec::Kind::gaussian) {
    const auto& p = c.initial.packet;
    return make_gaussian_packet(grid, p.x0, p.sigma, p.k0);
  }
  const auto left = make_gaussian_packet(grid, c.initial.left.x0, c.initial.left.sigma, c.initial.left.k0);
  const auto right = make_gaussian_packet(grid, c.initial.right.x0, c.initial.right.sigma, c.initial.right.k0);
  return superpose(c.initial.weight_left, left, c.initial.weight_right, right);
}

std::optional<TwoLobeBasis> make_lobe_basis(const ExperimentConfig& c) {
  if (c.initial.kind != InitialStateSpec::Kind::cat) return std::nullopt;
  const auto grid = make_grid(c);
  auto left = make_gaussian_packet(grid, c.initial.left.x0, c.initial.left.sigma, c.initial.left.k0);
  auto right = make_gaussian_packet(grid, c.initial.right.x0, c.initial.right.sigma, c.initial.right.k0);
  return TwoLobeBasis::from_templates(std::move(left), std::move(right));
}

HamiltonianSpec make_hamiltonian(const ExperimentConfig& c) {
  HamiltonianSpec h;
  h.mass = c.mass;
  h.hbar = c.hbar;
  h.kinetic = c.kinetic;
  if (c.potential.kind == PotentialSpec::Kind::harmonic) {
    h.potential = HamiltonianSpec::harmonic(make_grid(c), c.mass, c.potential.omega, c.potential.center, c.hbar).potential;
  }
  return h;
}

CollapseParams make_params(const ExperimentConfig& c) {
  return CollapseParams::make(c.lambda_rate, c.r_c, c.m0, c.hbar, c.mass, c.n_nucleons);
}

}  // namespace collapse::harness
