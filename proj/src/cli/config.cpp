// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qudd/cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include "qudd/units.hpp"

namespace qudd::cli {
namespace {

using nlohmann::json;

// A JSON value plus its dotted path, for error messages.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return value_; }

  void allow(std::initializer_list<const char*> keys) const {
    require_object();
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : value_.items())
      if (!allowed.count(k)) throw ConfigError(join(k), "unknown key");
  }
  bool has(const char* key) const { return value_.is_object() && value_.contains(key); }
  Node at(const char* key) const {
    require_object();
    if (!value_.contains(key)) throw ConfigError(join(key), "missing required key");
    return Node(value_.at(key), join(key));
  }
  Node at(std::size_t index) const { return Node(value_.at(index), path_ + "[" + std::to_string(index) + "]"); }
  std::size_t size() const {
    if (!value_.is_array()) throw ConfigError(path_, "expected an array");
    return value_.size();
  }

  double quantity(Dimension d) const {
    if (!value_.is_string())
      throw ConfigError(path_, "expected a string with units, e.g. \"" + example(d) + "\"");
    try {
      return parse_quantity(value_.get<std::string>(), d);
    } catch (const UnitError& e) {
      throw ConfigError(path_, e.what());
    }
  }
  double number() const {
    if (!value_.is_number()) throw ConfigError(path_, "expected a number");
    return value_.get<double>();
  }
  long long integer() const {
    if (!value_.is_number_integer()) throw ConfigError(path_, "expected an integer");
    return value_.get<long long>();
  }
  std::size_t count(long long min = 1) const {
    const long long v = integer();
    if (v < min) throw ConfigError(path_, "must be >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
  }
  bool boolean() const {
    if (!value_.is_boolean()) throw ConfigError(path_, "expected true or false");
    return value_.get<bool>();
  }
  std::string str() const {
    if (!value_.is_string()) throw ConfigError(path_, "expected a string");
    return value_.get<std::string>();
  }

 private:
  void require_object() const {
    if (!value_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }
  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  static std::string example(Dimension d) {
    switch (d) {
      case Dimension::magnetic_field: return "13.23 mT";
      case Dimension::time: return "5 ms";
      case Dimension::frequency: return "150 Hz";
      case Dimension::sensitivity: return "14.01 MHz/mT";
      case Dimension::angle: return "0.1 rad";
    }
    return "";
  }

  const json& value_;
  std::string path_;
};

HalfInt half_int(const Node& n) {
  try {
    return HalfInt::from_double(n.number());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(n.path(), e.what());
  }
}

std::vector<std::size_t> level_list(const Node& n, std::size_t dim) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < n.size(); ++k) {
    const std::size_t l = n.at(k).count(0);
    if (l >= dim) throw ConfigError(n.at(k).path(), "level index out of range for a " + std::to_string(dim) + "-level system");
    out.push_back(l);
  }
  return out;
}

SystemConfig parse_system(const Node& n, const std::string& data_dir) {
  if (n.has("sensitivities")) {
    n.allow({"sensitivities", "labels"});
    const Node s = n.at("sensitivities");
    std::vector<double> deltas;
    for (std::size_t k = 0; k < s.size(); ++k) deltas.push_back(s.at(k).quantity(Dimension::sensitivity));
    std::vector<std::string> labels;
    if (n.has("labels")) {
      const Node l = n.at("labels");
      for (std::size_t k = 0; k < l.size(); ++k) labels.push_back(l.at(k).str());
    } else {
      for (std::size_t k = 0; k < deltas.size(); ++k) labels.push_back(std::to_string(k));
    }
    try {
      return SystemConfig{std::nullopt, 0.0, {}, LevelSystem(std::move(labels), std::move(deltas))};
    } catch (const std::invalid_argument& e) {
      throw ConfigError(n.path(), e.what());
    }
  }
  n.allow({"atom", "atoms_file", "field", "levels"});
  std::string file = n.has("atoms_file") ? n.at("atoms_file").str() : "atoms.json";
  if (std::filesystem::path(file).is_relative()) file = (std::filesystem::path(data_dir) / file).string();
  std::map<std::string, HyperfineAtom> atoms;
  try {
    atoms = load_atoms(file);
  } catch (const std::exception& e) {
    throw ConfigError(n.path().empty() ? "atoms_file" : n.path() + ".atoms_file", e.what());
  }
  const Node atom_node = n.at("atom");
  const auto it = atoms.find(atom_node.str());
  if (it == atoms.end()) throw ConfigError(atom_node.path(), "unknown atom \"" + atom_node.str() + "\" in " + file);
  const double B = n.at("field").quantity(Dimension::magnetic_field);
  if (!(B > 0.0)) throw ConfigError(n.path() + ".field", "must be > 0");
  const Node lv = n.at("levels");
  std::vector<LevelSpec> levels;
  for (std::size_t k = 0; k < lv.size(); ++k) {
    const Node pair = lv.at(k);
    if (pair.size() != 2) throw ConfigError(pair.path(), "expected [F, mF]");
    levels.push_back({half_int(pair.at(std::size_t{0})), half_int(pair.at(std::size_t{1}))});
  }
  try {
    return SystemConfig{it->second, B, levels, sensitivities_for(levels, it->second, B)};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(lv.path(), e.what());
  }
}

NoiseSpec parse_noise(const Node& n) {
  n.allow({"quasi_static", "harmonics", "broadband"});
  QuasiStaticComponent qs;
  if (n.has("quasi_static")) qs.sigma = n.at("quasi_static").quantity(Dimension::magnetic_field);
  std::vector<HarmonicComponent> harmonics;
  if (n.has("harmonics")) {
    const Node hs = n.at("harmonics");
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const Node h = hs.at(k);
      h.allow({"frequency", "amplitude", "phase"});
      HarmonicComponent c;
      c.frequency = h.at("frequency").quantity(Dimension::frequency);
      c.amplitude = h.at("amplitude").quantity(Dimension::magnetic_field);
      if (h.has("phase") && !(h.at("phase").raw().is_string() && h.at("phase").str() == "random"))
        c.phase = FixedPhase{h.at("phase").quantity(Dimension::angle)};
      harmonics.push_back(c);
    }
  }
  if (n.has("broadband")) {
    const Node b = n.at("broadband");
    b.allow({"count", "f_min", "f_max", "amplitude"});
    try {
      const auto extra = broadband_harmonics(b.at("count").count(1), b.at("f_min").quantity(Dimension::frequency),
                                             b.at("f_max").quantity(Dimension::frequency),
                                             b.at("amplitude").quantity(Dimension::magnetic_field));
      harmonics.insert(harmonics.end(), extra.begin(), extra.end());
    } catch (const ConfigError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(b.path(), e.what());
    }
  }
  try {
    return NoiseSpec(std::move(harmonics), qs);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(n.path(), e.what());
  }
}

std::vector<double> parse_grid(const Node& n) {
  std::vector<double> grid;
  if (n.raw().is_array()) {
    for (std::size_t k = 0; k < n.size(); ++k) grid.push_back(n.at(k).quantity(Dimension::time));
  } else {
    n.allow({"from", "to", "points"});
    grid = linear_grid(n.at("from").quantity(Dimension::time), n.at("to").quantity(Dimension::time),
                       n.at("points").count(2));
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= 0.0)) throw ConfigError(n.path(), "durations must be >= 0");
    if (k > 0 && !(grid[k] > grid[k - 1])) throw ConfigError(n.path(), "durations must be strictly increasing");
  }
  if (grid.empty()) throw ConfigError(n.path(), "empty duration grid");
  return grid;
}

std::string join_levels(const std::vector<std::size_t>& levels) {
  std::string s;
  for (auto l : levels) s += (s.empty() ? "" : "+") + std::to_string(l);
  return s;
}

// A state spec is "equal", {"levels": [...]}, or {"amplitudes": [...], "phases": [...]}.
std::pair<PureState, std::string> parse_state(const Node& n, std::size_t dim) {
  if (n.raw().is_string()) {
    if (n.str() != "equal") throw ConfigError(n.path(), "expected \"equal\" or an object");
    return {PureState::uniform(dim), "equal" + std::to_string(dim)};
  }
  if (n.has("levels")) {
    n.allow({"levels", "phases"});
    const auto levels = level_list(n.at("levels"), dim);
    std::vector<double> phases;
    if (n.has("phases")) {
      const Node p = n.at("phases");
      for (std::size_t k = 0; k < p.size(); ++k) phases.push_back(p.at(k).quantity(Dimension::angle));
    }
    try {
      return {PureState::superposition(dim, levels, phases), "sup" + join_levels(levels)};
    } catch (const std::invalid_argument& e) {
      throw ConfigError(n.path(), e.what());
    }
  }
  n.allow({"amplitudes", "phases"});
  const Node a = n.at("amplitudes");
  if (a.size() != dim) throw ConfigError(a.path(), "expected " + std::to_string(dim) + " amplitudes");
  std::vector<Complex> amps;
  for (std::size_t k = 0; k < dim; ++k) {
    double phase = 0.0;
    if (n.has("phases")) {
      const Node p = n.at("phases");
      if (p.size() != dim) throw ConfigError(p.path(), "expected " + std::to_string(dim) + " phases");
      phase = p.at(k).quantity(Dimension::angle);
    }
    amps.push_back(std::polar(a.at(k).number(), phase));
  }
  try {
    return {PureState(std::move(amps)), "custom"};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(n.path(), e.what());
  }
}

std::vector<DatasetConfig> parse_datasets(const Node& list, const LevelSystem& system) {
  std::vector<DatasetConfig> out;
  std::set<std::string> names;
  const std::size_t dim = system.dim();
  for (std::size_t k = 0; k < list.size(); ++k) {
    const Node d = list.at(k);
    d.allow({"name", "sequence", "state", "durations"});
    const std::string name = d.at("name").str();
    if (name.empty() || name.find_first_of("/\\,\n ") != std::string::npos)
      throw ConfigError(d.path() + ".name", "must be nonempty without spaces, commas or slashes");
    const Node seq = d.at("sequence");
    seq.allow({"family", "repetitions", "levels"});
    const std::string family = seq.at("family").str();
    const std::vector<double> grid = parse_grid(d.at("durations"));

    auto add = [&](const std::string& dataset_name, SequenceFamily fam, PureState prepared,
                   std::optional<PureState> readout, std::string label) {
      if (!names.insert(dataset_name).second) throw ConfigError(d.path() + ".name", "duplicate dataset name " + dataset_name);
      if (!std::holds_alternative<BareFamily>(fam) && !std::holds_alternative<RamseyFamily>(fam) && grid.front() <= 0.0)
        throw ConfigError(d.path() + ".durations", "decoupled sequences need durations > 0");
      out.push_back(DatasetConfig{dataset_name, fam, std::move(prepared), std::move(readout), std::move(label), grid});
    };

    if (family == "ramsey") {
      if (d.has("state")) throw ConfigError(d.path() + ".state", "Ramsey datasets prepare |i> and read out |j>");
      const auto lv = level_list(seq.at("levels"), dim);
      if (lv.size() != 2 || lv[0] == lv[1]) throw ConfigError(seq.path() + ".levels", "expected two distinct levels [i, j]");
      add(name, RamseyFamily{lv[0], lv[1]}, PureState::basis(dim, lv[0]), PureState::basis(dim, lv[1]),
          "ramsey" + join_levels(lv));
      continue;
    }
    auto [state, label] = d.has("state") ? parse_state(d.at("state"), dim) : std::pair{PureState::uniform(dim), "equal" + std::to_string(dim)};
    if (family == "bare") {
      seq.allow({"family"});
      add(name, BareFamily{}, state, std::nullopt, label);
      continue;
    }
    if (family != "mldd" && family != "cyclic")
      throw ConfigError(seq.path() + ".family", "unknown family \"" + family + "\" (mldd, cyclic, bare, ramsey)");
    LevelTriple triple{0, 1, 2};
    if (seq.has("levels")) {
      if (family == "cyclic") throw ConfigError(seq.path() + ".levels", "cyclic sequences use all levels");
      const auto lv = level_list(seq.at("levels"), dim);
      if (lv.size() != 3) throw ConfigError(seq.path() + ".levels", "expected three levels");
      triple = {lv[0], lv[1], lv[2]};
    }
    if (family == "mldd" && dim != 3 && !seq.has("levels"))
      throw ConfigError(seq.path() + ".levels", "required when the system does not have exactly three levels");
    const Node reps = seq.at("repetitions");
    std::vector<long long> list_n;
    if (reps.raw().is_array()) {
      for (std::size_t r = 0; r < reps.size(); ++r) list_n.push_back(static_cast<long long>(reps.at(r).count(0)));
    } else {
      list_n.push_back(static_cast<long long>(reps.count(0)));
    }
    for (long long n : list_n) {
      const std::string dn = reps.raw().is_array() ? name + "_N" + std::to_string(n) : name;
      if (n == 0) {
        add(dn, BareFamily{}, state, std::nullopt, label);
      } else if (family == "mldd") {
        add(dn, MlddFamily{triple, static_cast<int>(n)}, state, std::nullopt, label);
      } else {
        add(dn, CyclicFamily{static_cast<int>(n)}, state, std::nullopt, label);
      }
    }
  }
  return out;
}

FitConfig parse_fit(const Node& n) {
  n.allow({"mode", "share_g", "share_amplitudes", "fit_amplitudes", "fixed_amplitudes", "fit_g", "fixed_g",
           "frequencies", "quadrature_nodes", "starts", "bootstrap", "seed"});
  FitConfig f;
  if (n.has("mode")) {
    f.mode = n.at("mode").str();
    if (f.mode != "joint" && f.mode != "ramsey" && f.mode != "rb")
      throw ConfigError(n.path() + ".mode", "expected joint, ramsey or rb");
  }
  if (n.has("share_g")) f.spec.share_g = n.at("share_g").boolean();
  if (n.has("share_amplitudes")) f.spec.share_amplitudes = n.at("share_amplitudes").boolean();
  if (n.has("fit_amplitudes")) f.spec.fit_amplitudes = n.at("fit_amplitudes").boolean();
  if (n.has("fit_g")) f.spec.fit_g = n.at("fit_g").boolean();
  if (n.has("fixed_g")) {
    f.spec.fixed_g = n.at("fixed_g").number();
    if (!(f.spec.fixed_g > 0.0 && f.spec.fixed_g <= 1.0)) throw ConfigError(n.path() + ".fixed_g", "must be in (0, 1]");
  }
  if (n.has("frequencies")) {
    const Node fr = n.at("frequencies");
    f.spec.frequencies.clear();
    for (std::size_t k = 0; k < fr.size(); ++k) f.spec.frequencies.push_back(fr.at(k).quantity(Dimension::frequency));
  }
  if (n.has("fixed_amplitudes")) {
    const Node fa = n.at("fixed_amplitudes");
    f.spec.fixed_amplitudes.clear();
    for (std::size_t k = 0; k < fa.size(); ++k)
      f.spec.fixed_amplitudes.push_back(fa.at(k).quantity(Dimension::magnetic_field));
  } else {
    f.spec.fixed_amplitudes.assign(f.spec.frequencies.size(), 0.0);
  }
  if (!f.spec.fit_amplitudes && f.spec.fixed_amplitudes.size() != f.spec.frequencies.size())
    throw ConfigError(n.path() + ".fixed_amplitudes", "expected one amplitude per frequency");
  if (n.has("quadrature_nodes")) f.spec.model.quadrature_nodes = n.at("quadrature_nodes").count(2);
  if (n.has("starts")) f.options.starts = static_cast<int>(n.at("starts").count(1));
  if (n.has("bootstrap")) f.options.bootstrap = static_cast<int>(n.at("bootstrap").count(0));
  if (n.has("seed")) f.options.seed = static_cast<std::uint64_t>(n.at("seed").count(0));
  return f;
}

RbConfig parse_rb(const Node& n) {
  n.allow({"lengths", "sequences", "shots", "epsilon", "depolarizing", "over_rotation"});
  RbConfig r;
  const Node l = n.at("lengths");
  for (std::size_t k = 0; k < l.size(); ++k) r.lengths.push_back(static_cast<int>(l.at(k).count(0)));
  if (r.lengths.empty()) throw ConfigError(l.path(), "must be nonempty");
  if (n.has("sequences")) r.sequences = n.at("sequences").count(1);
  if (n.has("shots")) r.shots = n.at("shots").count(1);
  if (n.has("epsilon") && n.has("depolarizing"))
    throw ConfigError(n.path() + ".epsilon", "give either epsilon or depolarizing, not both");
  if (n.has("epsilon")) {
    const double eps = n.at("epsilon").number();
    if (!(eps >= 0.0 && eps < 0.5)) throw ConfigError(n.path() + ".epsilon", "must be in [0, 0.5)");
    r.injected_epsilon = eps;
    r.error.depolarizing = rb::depolarizing_for_epsilon(eps);
  }
  if (n.has("depolarizing")) {
    r.error.depolarizing = n.at("depolarizing").number();
    if (!(r.error.depolarizing >= 0.0 && r.error.depolarizing <= 1.0))
      throw ConfigError(n.path() + ".depolarizing", "must be in [0, 1]");
  }
  if (n.has("over_rotation")) r.error.over_rotation = n.at("over_rotation").quantity(Dimension::angle);
  if (r.error.over_rotation < 0.0) throw ConfigError(n.path() + ".over_rotation", "must be >= 0");
  return r;
}

}  // namespace

std::vector<double> linear_grid(double from, double to, std::size_t points) {
  if (points < 2) throw std::invalid_argument("linear_grid: need at least 2 points");
  if (!(to > from)) throw std::invalid_argument("linear_grid: 'to' must exceed 'from'");
  std::vector<double> g(points);
  for (std::size_t k = 0; k < points; ++k)
    g[k] = from + (to - from) * static_cast<double>(k) / static_cast<double>(points - 1);
  return g;
}

std::string default_data_dir() {
  if (const char* env = std::getenv("QUDD_DATA_DIR"); env && *env) return env;
#ifdef QUDD_DEFAULT_DATA_DIR
  return QUDD_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON in ") + path + ": " + e.what());
  }
}

ExperimentConfig parse_config(const nlohmann::json& document, const std::string& data_dir) {
  const Node root(document, "");
  root.allow({"system", "noise", "pulses", "detection", "trials", "seed", "datasets", "fit", "rb", "description"});
  ExperimentConfig cfg;
  cfg.document = document;
  if (root.has("system")) cfg.system = parse_system(root.at("system"), data_dir);
  if (root.has("noise")) cfg.noise = parse_noise(root.at("noise"));
  if (root.has("pulses")) {
    const Node p = root.at("pulses");
    p.allow({"error", "contrast"});
    if (p.has("error") && p.has("contrast")) throw ConfigError("pulses.error", "give either error or contrast, not both");
    if (p.has("error")) {
      cfg.pulse_error = p.at("error").number();
      if (!(cfg.pulse_error >= 0.0)) throw ConfigError("pulses.error", "must be >= 0");
    }
    if (p.has("contrast")) {
      const double g = p.at("contrast").number();
      if (!(g > 0.0 && g <= 1.0)) throw ConfigError("pulses.contrast", "must be in (0, 1]");
      cfg.target_contrast = g;
    }
  }
  if (root.has("detection")) {
    const Node d = root.at("detection");
    d.allow({"enabled", "bright_mean", "dark_mean", "threshold"});
    if (!d.has("enabled") || d.at("enabled").boolean()) {
      DetectionModel m;
      if (d.has("bright_mean")) m.bright_mean = d.at("bright_mean").number();
      if (d.has("dark_mean")) m.dark_mean = d.at("dark_mean").number();
      if (d.has("threshold")) m.threshold = static_cast<int>(d.at("threshold").count(0));
      try {
        m.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError("detection", e.what());
      }
      cfg.detection = m;
    }
  }
  if (root.has("trials")) cfg.trials = root.at("trials").count(1);
  if (root.has("seed")) cfg.seed = static_cast<std::uint64_t>(root.at("seed").count(0));
  if (root.has("datasets")) {
    if (!cfg.system) throw ConfigError("system", "required when datasets are given");
    cfg.datasets = parse_datasets(root.at("datasets"), cfg.system->system);
  }
  if (root.has("fit")) cfg.fit = parse_fit(root.at("fit"));
  if (root.has("rb")) cfg.rb = parse_rb(root.at("rb"));
  return cfg;
}

}  // namespace qudd::cli
