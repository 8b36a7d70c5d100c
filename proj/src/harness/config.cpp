#include "nlslab/harness/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nlslab/errors.hpp"

namespace nlslab::harness {

namespace {

std::string locate(const std::string& field, const std::string& message, int line, int column) {
  std::ostringstream out;
  if (line > 0) out << "line " << line << ", column " << column << ": ";
  if (!field.empty()) out << field << ": ";
  out << message;
  return out.str();
}

/// One YAML mapping with strict key accounting.
class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) fail(path_, node_, "expected a mapping");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_ && node_.IsMap() && node_[key] && !node_[key].IsNull();
  }

  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    return node_[key];
  }

  template <typename T>
  void read(const std::string& key, T& target) {
    if (!has(key)) return;
    target = convert<T>(node_[key], field(key));
  }

  bool is_auto(const std::string& key) {
    if (!has(key)) return true;
    const auto n = node_[key];
    return n.IsScalar() && n.Scalar() == "auto";
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  /// Rejects keys that were never asked for.
  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) fail(field(key), kv.first, "unknown key");
    }
  }

  template <typename T>
  static T convert(const YAML::Node& n, const std::string& field) {
    try {
      if constexpr (std::is_same_v<T, bool>) {
        return n.as<bool>();
      } else {
        if (!n.IsScalar()) fail(field, n, "expected a scalar");
        return n.as<T>();
      }
    } catch (const YAML::Exception&) {
      fail(field, n, "cannot convert '" + (n.IsScalar() ? n.Scalar() : std::string("<node>")) + "'");
    }
  }

  [[noreturn]] static void fail(const std::string& field, const YAML::Node& n, const std::string& msg) {
    int line = 0, column = 0;
    if (n.IsDefined()) {
      const auto m = n.Mark();
      if (!m.is_null()) {
        line = m.line + 1;
        column = m.column + 1;
      }
    }
    throw ConfigError(field, msg, line, column);
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

complex parse_amplitude(const YAML::Node& n, const std::string& field) {
  if (n.IsSequence()) {
    if (n.size() != 2) Section::fail(field, n, "expected [re, im]");
    return {Section::convert<double>(n[0], field), Section::convert<double>(n[1], field)};
  }
  return {Section::convert<double>(n, field), 0.0};
}

template <typename T>
std::vector<T> parse_list(const YAML::Node& n, const std::string& field) {
  if (!n.IsSequence()) Section::fail(field, n, "expected a list");
  std::vector<T> out;
  for (const auto& item : n) out.push_back(Section::convert<T>(item, field));
  return out;
}

ModeAmplitude parse_mode(const YAML::Node& n, const std::string& field) {
  Section sec(n, field);
  ModeAmplitude m;
  sec.read("n", m.n);
  if (sec.has("A")) m.A = parse_amplitude(sec.raw("A"), sec.field("A"));
  sec.finish();
  return m;
}

void require(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ConfigError(field, msg);
}

bool positive_multiple(double T, double dt) {
  const double r = T / dt;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r) && std::round(r) >= 1.0;
}

nlohmann::ordered_json amplitude_json(complex A) { return {A.real(), A.imag()}; }

}  // namespace

ConfigError::ConfigError(const std::string& field, const std::string& message, int line, int column)
    : std::runtime_error(locate(field, message, line, column)),
      field_(field),
      message_(message),
      line_(line),
      column_(column) {}

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::Solve: return "solve";
    case Experiment::GaugeCheck: return "gauge-check";
    case Experiment::Ledger: return "ledger";
    case Experiment::Norms: return "norms";
    case Experiment::Strichartz: return "strichartz";
    case Experiment::ResonanceAudit: return "resonance-audit";
    case Experiment::Oscillation: return "oscillation";
    case Experiment::Apriori: return "apriori";
    case Experiment::Bootstrap: return "bootstrap";
  }
  return "unknown";
}

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> all{
      Experiment::Solve,      Experiment::GaugeCheck,     Experiment::Ledger,
      Experiment::Norms,      Experiment::Strichartz,     Experiment::ResonanceAudit,
      Experiment::Oscillation, Experiment::Apriori,       Experiment::Bootstrap};
  return all;
}

Experiment parse_experiment(const std::string& name) {
  for (auto e : all_experiments()) {
    if (to_string(e) == name) return e;
  }
  throw ConfigError("experiment", "unknown experiment '" + name + "'");
}

std::string to_string(DataKind k) {
  switch (k) {
    case DataKind::Zero: return "zero";
    case DataKind::SingleMode: return "single_mode";
    case DataKind::TwoMode: return "two_mode";
    case DataKind::Random: return "random";
    case DataKind::HsNotL2: return "hs_not_l2";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (equation.model == Model::GammaNLS) {
    require(std::isfinite(equation.gamma), "equation.gamma", "must be finite");
  }
  require(grid.N >= 4 && grid.N % 2 == 0, "grid.N", "must be an even integer >= 4");
  require(grid.dt > 0.0 && std::isfinite(grid.dt), "grid.dt", "must be positive");
  require(grid.T > 0.0 && std::isfinite(grid.T), "grid.T", "must be positive");
  require(positive_multiple(grid.T, grid.dt), "grid.T", "must be a whole multiple of grid.dt");
  require(grid.record_every >= 1, "grid.record_every", "must be >= 1");
  const auto steps = static_cast<long long>(std::llround(grid.T / grid.dt));
  require(steps % grid.record_every == 0, "grid.record_every", "must divide T/dt");

  require(std::isfinite(params.s), "params.s", "must be finite");
  require(params.epsilon > 0.0, "params.epsilon", "must be positive");
  if (params.alpha) require(*params.alpha > 0.0, "params.alpha", "must be positive");
  if (params.M) {
    require(*params.M >= 0 && *params.M <= grid.N / 2 - 1, "params.M", "must lie in [0, N/2 - 1]");
  }
  require(params.b > 0.0, "params.b", "must be positive");

  const int K = grid.N / 2 - 1;
  switch (data.kind) {
    case DataKind::SingleMode:
    case DataKind::TwoMode: {
      const std::size_t want = data.kind == DataKind::SingleMode ? 1 : 2;
      require(data.modes.size() == want, "data.modes",
              data.kind == DataKind::SingleMode ? "single_mode takes one mode" : "two_mode takes two modes");
      for (const auto& m : data.modes) require(std::abs(m.n) <= K, "data.n", "mode outside the grid band");
      if (want == 2) require(data.modes[0].n != data.modes[1].n, "data.modes", "modes must differ");
      break;
    }
    case DataKind::Random:
      require(data.norm >= 0.0, "data.norm", "must be nonnegative");
      require(data.band >= 0 && data.band <= K, "data.band", "must lie in [0, N/2 - 1]");
      break;
    case DataKind::HsNotL2:
      require(data.tail_exponent >= -0.5 && data.tail_exponent < 0.0, "data.tail_exponent",
              "must lie in [-1/2, 0)");
      break;
    case DataKind::Zero: break;
  }

  require(resonance.radius >= 0 && resonance.radius <= 256, "resonance.radius", "must lie in [0, 256]");
  require(resonance.symbol_radius >= 0 && resonance.symbol_radius <= 128, "resonance.symbol_radius",
          "must lie in [0, 128]");

  require(!oscillation.cutoffs.empty(), "oscillation.cutoffs", "must not be empty");
  for (std::size_t i = 0; i < oscillation.cutoffs.size(); ++i) {
    require(oscillation.cutoffs[i] >= 1 && (i == 0 || oscillation.cutoffs[i] > oscillation.cutoffs[i - 1]),
            "oscillation.cutoffs", "must be positive and strictly increasing");
  }
  require(oscillation.tail_exponent >= -0.5 && oscillation.tail_exponent < 0.0,
          "oscillation.tail_exponent", "must lie in [-1/2, 0)");
  require(oscillation.dt > 0.0 && positive_multiple(oscillation.T, oscillation.dt), "oscillation.T",
          "must be a positive whole multiple of oscillation.dt");

  require(strichartz.samples >= 1, "strichartz.samples", "must be >= 1");
  require(strichartz.band >= 1, "strichartz.band", "must be >= 1");
  require(strichartz.dt > 0.0 && positive_multiple(strichartz.T, strichartz.dt), "strichartz.T",
          "must be a positive whole multiple of strichartz.dt");

  require(!apriori.amplitudes.empty(), "apriori.amplitudes", "must not be empty");
  for (double a : apriori.amplitudes) require(a >= 0.0, "apriori.amplitudes", "must be nonnegative");
  require(!apriori.horizons.empty(), "apriori.horizons", "must not be empty");
  for (double h : apriori.horizons) {
    require(h > 0.0, "apriori.horizons", "must be positive");
    if (!experiment || *experiment == Experiment::Apriori) {
      require(positive_multiple(h, grid.dt), "apriori.horizons",
              "each horizon must be a whole multiple of grid.dt");
    }
  }

  require(bootstrap.C1 > 0.0 && bootstrap.C2 > 0.0 && bootstrap.d > 0.0 && bootstrap.theta > 0.0,
          "bootstrap", "C1, C2, d and theta must be positive");
  if (bootstrap.c) require(*bootstrap.c >= 0.0, "bootstrap.c", "must be nonnegative");
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(source, e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  ExperimentConfig cfg;
  Section top(root, "");

  if (top.has("experiment")) {
    const auto n = top.raw("experiment");
    const auto name = Section::convert<std::string>(n, "experiment");
    try {
      cfg.experiment = parse_experiment(name);
    } catch (const ConfigError&) {
      Section::fail("experiment", n, "unknown experiment '" + name + "'");
    }
  }

  {
    Section sec(top.raw("equation"), "equation");
    if (sec.has("model")) {
      const auto n = sec.raw("model");
      try {
        cfg.equation.model = parse_model(Section::convert<std::string>(n, "equation.model"));
      } catch (const ParameterError& e) {
        Section::fail("equation.model", n, e.what());
      }
    }
    if (sec.has("sign")) {
      const auto n = sec.raw("sign");
      try {
        cfg.equation.sign = parse_sign(Section::convert<std::string>(n, "equation.sign"));
      } catch (const ParameterError& e) {
        Section::fail("equation.sign", n, e.what());
      }
    }
    cfg.equation.gamma = cfg.equation.renormalization();
    if (cfg.equation.model == Model::GammaNLS) {
      sec.read("gamma", cfg.equation.gamma);
    } else if (sec.has("gamma")) {
      const double g = Section::convert<double>(sec.raw("gamma"), "equation.gamma");
      if (g != cfg.equation.gamma) {
        Section::fail("equation.gamma", sec.raw("gamma"), "fixed by the model; only the gamma model takes it");
      }
    }
    sec.finish();
  }

  {
    Section sec(top.raw("grid"), "grid");
    sec.read("N", cfg.grid.N);
    sec.read("dt", cfg.grid.dt);
    sec.read("T", cfg.grid.T);
    sec.read("record_every", cfg.grid.record_every);
    sec.finish();
  }

  {
    Section sec(top.raw("params"), "params");
    sec.read("s", cfg.params.s);
    if (!sec.is_auto("alpha")) cfg.params.alpha = Section::convert<double>(sec.raw("alpha"), "params.alpha");
    if (!sec.is_auto("M")) cfg.params.M = Section::convert<int>(sec.raw("M"), "params.M");
    sec.read("epsilon", cfg.params.epsilon);
    sec.read("b", cfg.params.b);
    sec.finish();
  }

  {
    Section sec(top.raw("data"), "data");
    if (sec.has("kind")) {
      const auto n = sec.raw("kind");
      const auto name = Section::convert<std::string>(n, "data.kind");
      bool found = false;
      for (auto k : {DataKind::Zero, DataKind::SingleMode, DataKind::TwoMode, DataKind::Random,
                     DataKind::HsNotL2}) {
        if (to_string(k) == name) {
          cfg.data.kind = k;
          found = true;
        }
      }
      if (!found) {
        Section::fail("data.kind", n,
                      "unknown kind '" + name + "' (expected zero, single_mode, two_mode, random, hs_not_l2)");
      }
    }
    if (cfg.data.kind == DataKind::SingleMode) {
      ModeAmplitude m;
      sec.read("n", m.n);
      if (sec.has("A")) m.A = parse_amplitude(sec.raw("A"), "data.A");
      cfg.data.modes = {m};
    }
    if (sec.has("modes")) {
      const auto n = sec.raw("modes");
      if (cfg.data.kind != DataKind::TwoMode) Section::fail("data.modes", n, "only two_mode data takes modes");
      if (!n.IsSequence()) Section::fail("data.modes", n, "expected a list");
      for (const auto& item : n) cfg.data.modes.push_back(parse_mode(item, "data.modes"));
    }
    sec.read("seed", cfg.data.seed);
    sec.read("sobolev", cfg.data.sobolev);
    sec.read("norm", cfg.data.norm);
    sec.read("band", cfg.data.band);
    sec.read("tail_exponent", cfg.data.tail_exponent);
    if (cfg.data.kind != DataKind::SingleMode && (sec.has("n") || sec.has("A"))) {
      Section::fail("data", root["data"], "n and A belong to single_mode data");
    }
    sec.finish();
  }

  {
    Section sec(top.raw("output"), "output");
    sec.read("directory", cfg.output.directory);
    if (sec.has("formats")) {
      const auto formats = parse_list<std::string>(sec.raw("formats"), "output.formats");
      cfg.output.csv = false;
      bool json = false;
      for (const auto& f : formats) {
        if (f == "json") json = true;
        else if (f == "csv") cfg.output.csv = true;
        else Section::fail("output.formats", sec.raw("formats"), "unknown format '" + f + "'");
      }
      if (!json) Section::fail("output.formats", sec.raw("formats"), "json is always written; list it");
    }
    sec.read("trajectory", cfg.output.trajectory);
    sec.finish();
  }

  {
    Section sec(top.raw("resonance"), "resonance");
    sec.read("radius", cfg.resonance.radius);
    sec.read("symbol_radius", cfg.resonance.symbol_radius);
    sec.finish();
  }

  {
    Section sec(top.raw("oscillation"), "oscillation");
    if (sec.has("cutoffs")) cfg.oscillation.cutoffs = parse_list<int>(sec.raw("cutoffs"), "oscillation.cutoffs");
    sec.read("tail_exponent", cfg.oscillation.tail_exponent);
    sec.read("T", cfg.oscillation.T);
    sec.read("dt", cfg.oscillation.dt);
    sec.finish();
  }

  {
    Section sec(top.raw("strichartz"), "strichartz");
    sec.read("samples", cfg.strichartz.samples);
    sec.read("band", cfg.strichartz.band);
    sec.read("T", cfg.strichartz.T);
    sec.read("dt", cfg.strichartz.dt);
    sec.finish();
  }

  {
    Section sec(top.raw("apriori"), "apriori");
    if (sec.has("amplitudes")) cfg.apriori.amplitudes = parse_list<double>(sec.raw("amplitudes"), "apriori.amplitudes");
    if (sec.has("horizons")) cfg.apriori.horizons = parse_list<double>(sec.raw("horizons"), "apriori.horizons");
    sec.read("refine", cfg.apriori.refine);
    sec.finish();
  }

  {
    Section sec(top.raw("bootstrap"), "bootstrap");
    sec.read("C1", cfg.bootstrap.C1);
    sec.read("C2", cfg.bootstrap.C2);
    sec.read("d", cfg.bootstrap.d);
    sec.read("theta", cfg.bootstrap.theta);
    if (!sec.is_auto("c")) cfg.bootstrap.c = Section::convert<double>(sec.raw("c"), "bootstrap.c");
    sec.finish();
  }

  top.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), path);
  } catch (const ConfigError& e) {
    throw ConfigError(e.field(), e.message() + " [" + path + "]", e.line(), e.column());
  }
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  using J = nlohmann::ordered_json;
  J j;
  if (experiment) j["experiment"] = harness::to_string(*experiment);
  j["equation"] = {{"model", nlslab::to_string(equation.model)},
                   {"sign", nlslab::to_string(equation.sign)},
                   {"gamma", equation.renormalization()}};
  j["grid"] = {{"N", grid.N}, {"dt", grid.dt}, {"T", grid.T}, {"record_every", grid.record_every}};
  J p;
  p["s"] = params.s;
  p["alpha"] = params.alpha ? J(*params.alpha) : J("auto");
  p["M"] = params.M ? J(*params.M) : J("auto");
  p["epsilon"] = params.epsilon;
  p["b"] = params.b;
  j["params"] = p;

  J d;
  d["kind"] = to_string(data.kind);
  switch (data.kind) {
    case DataKind::SingleMode:
      d["n"] = data.modes.at(0).n;
      d["A"] = amplitude_json(data.modes.at(0).A);
      break;
    case DataKind::TwoMode: {
      J list = J::array();
      for (const auto& m : data.modes) list.push_back({{"n", m.n}, {"A", amplitude_json(m.A)}});
      d["modes"] = list;
      break;
    }
    case DataKind::Random:
      d["seed"] = data.seed;
      d["sobolev"] = data.sobolev;
      d["norm"] = data.norm;
      d["band"] = data.band;
      break;
    case DataKind::HsNotL2:
      d["tail_exponent"] = data.tail_exponent;
      break;
    case DataKind::Zero: break;
  }
  j["data"] = d;

  J formats = J::array({"json"});
  if (output.csv) formats.push_back("csv");
  j["output"] = {{"formats", formats}, {"trajectory", output.trajectory}};
  j["resonance"] = {{"radius", resonance.radius}, {"symbol_radius", resonance.symbol_radius}};
  j["oscillation"] = {{"cutoffs", oscillation.cutoffs},
                      {"tail_exponent", oscillation.tail_exponent},
                      {"T", oscillation.T},
                      {"dt", oscillation.dt}};
  j["strichartz"] = {{"samples", strichartz.samples},
                     {"band", strichartz.band},
                     {"T", strichartz.T},
                     {"dt", strichartz.dt}};
  j["apriori"] = {{"amplitudes", apriori.amplitudes},
                  {"horizons", apriori.horizons},
                  {"refine", apriori.refine}};
  J b;
  b["C1"] = bootstrap.C1;
  b["C2"] = bootstrap.C2;
  b["d"] = bootstrap.d;
  b["theta"] = bootstrap.theta;
  b["c"] = bootstrap.c ? J(*bootstrap.c) : J("auto");
  j["bootstrap"] = b;
  return j;
}

}  // namespace nlslab::harness
