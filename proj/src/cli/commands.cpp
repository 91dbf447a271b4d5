// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qudd/cli/commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qudd/breit_rabi.hpp"
#include "qudd/ensemble.hpp"
#include "qudd/rb_sim.hpp"
#include "qudd/units.hpp"

namespace qudd::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;


struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string out_dir = ".";
};

std::string join_numbers(std::span<const double> v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + format_double(x);
  return s;
}

std::vector<double> split_numbers(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw CsvError("bad number \"" + tok + "\" in " + what);
    out.push_back(v);
  }
  return out;
}

const std::string* find_meta(const CsvMetadata& m, const std::string& key) {
  for (const auto& [k, v] : m)
    if (k == key) return &v;
  return nullptr;
}

std::string detection_text(const std::optional<DetectionModel>& d) {
  if (!d) return "off";
  std::ostringstream s;
  s << "bright_mean=" << format_double(d->bright_mean) << " dark_mean=" << format_double(d->dark_mean)
    << " threshold=" << d->threshold;
  return s.str();
}

ExperimentConfig load_config(const Globals& g, bool required) {
  json doc = json::object();
  if (!g.config_path.empty())
    doc = load_json_file(g.config_path);
  else if (required)
    throw ConfigError("--config", "this subcommand needs a configuration file");
  if (g.seed) doc["seed"] = *g.seed;
  return parse_config(doc, default_data_dir());
}

fs::path output_dir(const Globals& g) {
  fs::path dir(g.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw fs::filesystem_error("cannot write", path, std::make_error_code(std::errc::io_error));
  f << text;
  if (!f) throw fs::filesystem_error("write failed", path, std::make_error_code(std::errc::io_error));
}

json estimates_json(const FitReport& r) {
  json e = json::array();
  for (const auto& x : r.estimates) e.push_back({{"name", x.name}, {"value", x.value}, {"uncertainty", x.uncertainty}});
  return e;
}

json diagnostics_json(const FitDiagnostics& d) {
  return {{"converged", d.converged},          {"iterations", d.iterations},
          {"evaluations", d.evaluations},      {"starts", d.starts},
          {"objective", d.objective},          {"bootstrap_resamples", d.bootstrap_resamples},
          {"bootstrap_failures", d.bootstrap_failures}};
}

void print_estimates(std::ostream& out, const FitReport& r) {
  out << std::left << std::setw(14) << "parameter" << std::right << std::setw(16) << "value" << std::setw(16)
      << "uncertainty" << '\n';
  for (const auto& e : r.estimates) {
    const bool time = e.name.rfind("T2", 0) == 0;
    const bool field = e.name.rfind("amp", 0) == 0;
    const double scale = time ? 1e3 : field ? 1e9 : 1.0;
    const char* unit = time ? " ms" : field ? " nT" : "";
    std::ostringstream v, u;
    v << std::setprecision(6) << e.value * scale << unit;
    u << std::setprecision(3) << e.uncertainty * scale << unit;
    out << std::left << std::setw(14) << e.name << std::right << std::setw(16) << v.str() << std::setw(16) << u.str()
        << '\n';
  }
  out << "residual norm " << std::setprecision(6) << r.residual_norm << ", bootstrap resamples "
      << r.diagnostics.bootstrap_resamples << '\n';
}

int cmd_simulate(const Globals& g, std::ostream& out) {
  const ExperimentConfig cfg = load_config(g, true);
  if (cfg.datasets.empty()) throw ConfigError("datasets", "simulate needs at least one dataset");
  const auto results = run_simulation(cfg, g.threads);
  const fs::path dir = output_dir(g);
  out << std::left << std::setw(18) << "dataset" << std::setw(26) << "sequence" << std::right << std::setw(7) << "points"
      << std::setw(9) << "trials" << std::setw(12) << "F(first)" << std::setw(12) << "F(last)" << '\n';
  for (const auto& r : results) {
    std::ostringstream csv;
    write_decay_csv(csv, r.curve, r.metadata);
    write_text(dir / (r.name + ".csv"), csv.str());
    out << std::left << std::setw(18) << r.name << std::setw(26) << *find_meta(r.metadata, "sequence") << std::right
        << std::setw(7) << r.curve.points.size() << std::setw(9) << r.curve.trials << std::fixed
        << std::setprecision(4) << std::setw(12) << r.curve.points.front().fidelity << std::setw(12)
        << r.curve.points.back().fidelity << std::defaultfloat << '\n';
  }
  out << "wrote " << results.size() << " curve(s) to " << dir.string() << '\n';
  return kOk;
}

int cmd_fit(const Globals& g, const std::vector<std::string>& inputs, std::string mode, std::ostream& out) {
  const ExperimentConfig cfg = load_config(g, false);
  FitConfig fc = cfg.fit.value_or(FitConfig{});
  if (!mode.empty()) fc.mode = mode;
  if (g.seed) fc.options.seed = *g.seed;
  fc.options.threads = g.threads;
  if (inputs.empty()) throw ConfigError("inputs", "fit needs at least one CSV file");
  const fs::path dir = output_dir(g);
  json report{{"mode", fc.mode}, {"inputs", inputs}};

  if (fc.mode == "rb") {
    if (inputs.size() != 1) throw ConfigError("inputs", "rb mode takes one survival CSV");
    const SurvivalCsv csv = read_survival_csv_file(inputs[0]);
    const FitReport r = fit_rb(csv.curve.points, fc.options);
    report["estimates"] = estimates_json(r);
    report["average_gate_fidelity"] = 1.0 - r.at("epsilon").value;
    report["diagnostics"] = diagnostics_json(r.diagnostics);
    print_estimates(out, r);
    out << "average gate fidelity " << std::setprecision(6) << 1.0 - r.at("epsilon").value << '\n';
  } else {
    std::vector<DecayCsv> csvs;
    for (const auto& p : inputs) csvs.push_back(read_decay_csv_file(p));
    if (fc.mode == "ramsey") {
      report["fits"] = json::array();
      for (std::size_t k = 0; k < csvs.size(); ++k) {
        const FitReport r = fit_ramsey(csvs[k].curve, fc.options);
        out << inputs[k] << '\n';
        print_estimates(out, r);
        report["fits"].push_back({{"input", inputs[k]},
                                  {"estimates", estimates_json(r)},
                                  {"residuals", r.residuals.front()},
                                  {"diagnostics", diagnostics_json(r.diagnostics)}});
      }
    } else {
      const LevelSystem system = cfg.system ? cfg.system->system : system_from_metadata(csvs);
      const auto datasets = decay_datasets(csvs);
      const JointFit r = fit_joint(datasets, system, fc.spec, fc.options);
      print_estimates(out, r);
      report["estimates"] = estimates_json(r);
      report["diagnostics"] = diagnostics_json(r.diagnostics);
      report["datasets"] = json::array();
      for (std::size_t k = 0; k < datasets.size(); ++k) {
        ModelOptions mo = fc.spec.model;
        mo.populations = datasets[k].populations;
        json pts = json::array();
        for (std::size_t i = 0; i < datasets[k].curve.points.size(); ++i) {
          const auto& p = datasets[k].curve.points[i];
          pts.push_back({{"T_seconds", p.T},
                         {"fidelity", p.fidelity},
                         {"stderr", p.stderr},
                         {"model", model_fidelity(p.T, datasets[k].repetitions, r.params[k], system, mo)},
                         {"weighted_residual", r.residuals[k][i]}});
        }
        report["datasets"].push_back({{"input", inputs[k]},
                                      {"N", datasets[k].repetitions},
                                      {"T2_seconds", r.params[k].T2},
                                      {"g", r.params[k].g},
                                      {"points", pts}});
      }
    }
  }
  write_text(dir / "fit_report.json", report.dump(2) + "\n");
  out << "report: " << (dir / "fit_report.json").string() << '\n';
  return kOk;
}

int cmd_rb(const Globals& g, std::ostream& out) {
  const ExperimentConfig cfg = load_config(g, true);
  if (!cfg.rb) throw ConfigError("rb", "missing rb section");
  const RbConfig& rc = *cfg.rb;
  const rb::Curve curve = run_rb(rc.error, rc.lengths, rc.sequences, rc.shots, cfg.seed, g.threads);
  const fs::path dir = output_dir(g);
  json doc = cfg.document;
  CsvMetadata meta{{"config", doc.dump()},
                   {"seed", std::to_string(cfg.seed)},
                   {"depolarizing", format_double(rc.error.depolarizing)},
                   {"over_rotation_rad", format_double(rc.error.over_rotation)}};
  if (rc.injected_epsilon) meta.emplace_back("injected_epsilon", format_double(*rc.injected_epsilon));
  std::ostringstream csv;
  write_survival_csv(csv, curve, meta);
  write_text(dir / "rb_survival.csv", csv.str());

  FitOptions fo = cfg.fit ? cfg.fit->options : FitOptions{};
  fo.seed = cfg.seed;
  fo.threads = g.threads;
  const FitReport r = fit_rb(curve.points, fo);
  out << std::setw(6) << "l" << std::setw(12) << "survival" << std::setw(12) << "stderr" << '\n';
  for (const auto& p : curve.points)
    out << std::setw(6) << p.length << std::fixed << std::setprecision(5) << std::setw(12) << p.mean << std::setw(12)
        << p.stderr << std::defaultfloat << '\n';
  print_estimates(out, r);
  out << "average gate fidelity " << std::setprecision(6) << 1.0 - r.at("epsilon").value << '\n';
  json report{{"mode", "rb"},
              {"estimates", estimates_json(r)},
              {"average_gate_fidelity", 1.0 - r.at("epsilon").value},
              {"diagnostics", diagnostics_json(r.diagnostics)}};
  if (rc.injected_epsilon) report["injected_epsilon"] = *rc.injected_epsilon;
  write_text(dir / "rb_fit.json", report.dump(2) + "\n");
  return kOk;
}

LevelSpec parse_level_flag(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ConfigError("--level", "expected F,mF (e.g. 2,1), got \"" + s + "\"");
  try {
    return {HalfInt::from_double(std::stod(s.substr(0, comma))), HalfInt::from_double(std::stod(s.substr(comma + 1)))};
  } catch (const std::exception& e) {
    throw ConfigError("--level", "cannot parse \"" + s + "\": " + e.what());
  }
}

int cmd_breit_rabi(const std::string& atom_name, const std::string& field_text,
                   const std::vector<std::string>& level_flags, const std::string& atoms_file,
                   const std::string& sweep_to, std::size_t sweep_points, std::ostream& out) {
  std::string file = atoms_file.empty() ? (fs::path(default_data_dir()) / "atoms.json").string() : atoms_file;
  std::map<std::string, HyperfineAtom> atoms;
  try {
    atoms = load_atoms(file);
  } catch (const std::exception& e) {
    throw ConfigError("--atoms-file", e.what());
  }
  const auto it = atoms.find(atom_name);
  if (it == atoms.end()) throw ConfigError("--atom", "unknown atom \"" + atom_name + "\" in " + file);
  const HyperfineAtom& atom = it->second;
  double B = 0.0;
  try {
    B = parse_quantity(field_text, Dimension::magnetic_field);
  } catch (const UnitError& e) {
    throw ConfigError("--field", e.what());
  }
  if (!(B >= 0.0)) throw ConfigError("--field", "must be >= 0");

  constexpr double h = 1e-7;  // T, finite-difference step
  out << atom.name << " at B = " << std::setprecision(8) << B * 1e3 << " mT\n";
  out << std::left << std::setw(10) << "level" << std::right << std::setw(20) << "E (MHz)" << std::setw(18)
      << "dE/dB (MHz/mT)" << std::setw(20) << "fin. diff (MHz/mT)" << '\n';
  for (const auto& l : all_levels(atom, B)) {
    const double lo = std::max(B - h, 0.0);
    const double fd = (level_energy(atom, l.F, l.mF, B + h) - level_energy(atom, l.F, l.mF, lo)) / (B + h - lo);
    out << std::left << std::setw(10) << l.label() << std::right << std::fixed << std::setprecision(6)
        << std::setw(20) << l.energy * 1e-6 << std::setw(18) << l.sensitivity * 1e-9 << std::setw(20) << fd * 1e-9
        << std::defaultfloat << '\n';
  }
  if (!level_flags.empty()) {
    std::vector<LevelSpec> levels;
    for (const auto& s : level_flags) levels.push_back(parse_level_flag(s));
    out << "\nselected levels\n";
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const ZeemanLevel zl{levels[i].F, levels[i].mF};
      out << "  |" << i << "> = " << zl.label() << "  delta = 2pi x " << std::fixed << std::setprecision(4)
          << level_sensitivity(atom, levels[i].F, levels[i].mF, B) * 1e-9 << " MHz/mT" << std::defaultfloat << '\n';
    }
    out << "transitions\n";
    for (std::size_t i = 0; i < levels.size(); ++i)
      for (std::size_t j = i + 1; j < levels.size(); ++j)
        out << "  " << ZeemanLevel{levels[i].F, levels[i].mF}.label() << " <-> "
            << ZeemanLevel{levels[j].F, levels[j].mF}.label() << "  " << std::fixed << std::setprecision(4)
            << transition_frequency(atom, levels[i], levels[j], B) * 1e-6 << " MHz" << std::defaultfloat << '\n';
  }
  if (!sweep_to.empty()) {
    double B1 = 0.0;
    try {
      B1 = parse_quantity(sweep_to, Dimension::magnetic_field);
    } catch (const UnitError& e) {
      throw ConfigError("--sweep-to", e.what());
    }
    if (sweep_points < 2) throw ConfigError("--sweep-points", "must be >= 2");
    out << "\nB (mT)";
    for (const auto& l : all_levels(atom, 0.0)) out << ',' << l.label();
    out << '\n';
    for (std::size_t k = 0; k < sweep_points; ++k) {
      const double b = B1 * static_cast<double>(k) / static_cast<double>(sweep_points - 1);
      out << format_double(b * 1e3);
      for (const auto& l : all_levels(atom, b)) out << ',' << format_double(l.energy * 1e-6);
      out << '\n';
    }
  }
  return kOk;
}

int cmd_print_sequence(const std::string& family, int repetitions, const std::string& duration_text,
                       const std::string& levels_text, std::size_t dim, std::ostream& out) {
  double T = 0.0;
  try {
    T = parse_quantity(duration_text, Dimension::time);
  } catch (const UnitError& e) {
    throw ConfigError("--duration", e.what());
  }
  std::vector<std::size_t> lv;
  {
    std::istringstream in(levels_text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        lv.push_back(static_cast<std::size_t>(std::stoul(tok)));
      } catch (const std::exception&) {
        throw ConfigError("--levels", "expected comma-separated level indices, got \"" + levels_text + "\"");
      }
    }
  }
  if (dim < 2) throw ConfigError("--dim", "must be >= 2");
  const LevelSystem system(std::vector<double>(dim, 0.0));
  SequenceFamily fam;
  if (family == "mldd") {
    if (lv.size() != 3) throw ConfigError("--levels", "mldd needs three levels");
    fam = MlddFamily{{lv[0], lv[1], lv[2]}, repetitions};
  } else if (family == "cyclic") {
    fam = CyclicFamily{repetitions};
  } else if (family == "ramsey") {
    if (lv.size() < 2) throw ConfigError("--levels", "ramsey needs two levels");
    fam = RamseyFamily{lv[0], lv[1]};
  } else if (family == "bare") {
    fam = BareFamily{};
  } else {
    throw ConfigError("--family", "unknown family \"" + family + "\" (mldd, cyclic, bare, ramsey)");
  }
  for (std::size_t l : lv)
    if (l >= dim) throw ConfigError("--levels", "level index out of range");
  const SequenceSpec seq = build_for_duration(fam, system, T);
  out << describe(fam) << ", T = " << duration_text << ", " << pulse_count(seq) << " pulses\n";
  out << format_event_table(seq);
  return kOk;
}

}  // namespace

double resolve_pulse_error(const ExperimentConfig& cfg) {
  if (!cfg.target_contrast) return cfg.pulse_error;
  if (!cfg.system) throw ConfigError("pulses.contrast", "needs a system");
  if (cfg.system->system.dim() != 3) throw ConfigError("pulses.contrast", "calibration needs a three-level system");
  return calibrate_pulse_error(*cfg.target_contrast, cfg.system->system);
}

std::vector<SimulatedDataset> run_simulation(const ExperimentConfig& cfg, unsigned threads) {
  if (!cfg.system) throw ConfigError("system", "missing system section");
  const LevelSystem& system = cfg.system->system;
  const double pulse_error = resolve_pulse_error(cfg);
  std::vector<std::string> labels = system.labels();
  std::string label_text;
  for (const auto& l : labels) label_text += (label_text.empty() ? "" : " ") + l;

  std::vector<SimulatedDataset> out;
  for (std::size_t k = 0; k < cfg.datasets.size(); ++k) {
    const DatasetConfig& d = cfg.datasets[k];
    const std::uint64_t seed = Stream::derive({cfg.seed, k});
    CurveOptions opts;
    opts.readout = d.readout;
    opts.detection = cfg.detection;
    opts.pulse_error = pulse_error;
    opts.state_label = d.state_label;
    opts.threads = threads;
    DecayCurve curve = monte_carlo_curve(d.family, system, cfg.noise, d.prepared, d.T_grid, cfg.trials, seed, opts);
    const auto pops = d.prepared.populations();
    CsvMetadata meta{{"config", cfg.document.dump()},
                     {"run_seed", std::to_string(cfg.seed)},
                     {"dataset", d.name},
                     {"sequence", describe(d.family)},
                     {"repetitions", std::to_string(family_repetitions(d.family))},
                     {"state_label", d.state_label},
                     {"populations", join_numbers(pops)},
                     {"readout", d.readout ? "custom" : "prepared"},
                     {"levels", label_text},
                     {"sensitivities_rad_per_s_per_T", join_numbers(system.sensitivities())},
                     {"pulse_error", format_double(pulse_error)},
                     {"detection", detection_text(cfg.detection)}};
    out.push_back({d.name, std::move(curve), std::move(meta)});
  }
  return out;
}

LevelSystem system_from_metadata(const std::vector<DecayCsv>& csvs) {
  std::optional<std::vector<double>> deltas;
  for (const auto& c : csvs) {
    const std::string* s = find_meta(c.metadata, "sensitivities_rad_per_s_per_T");
    if (!s) throw ConfigError("system", "CSV lacks sensitivity metadata; give a config with a system section");
    auto v = split_numbers(*s, "sensitivities metadata");
    if (deltas && *deltas != v) throw ConfigError("system", "input CSVs were simulated with different sensitivities");
    deltas = std::move(v);
  }
  return LevelSystem(*deltas);
}

std::vector<DecayDataset> decay_datasets(const std::vector<DecayCsv>& csvs) {
  std::vector<DecayDataset> out;
  for (const auto& c : csvs) {
    DecayDataset d;
    d.curve = c.curve;
    d.repetitions = c.curve.repetitions;
    if (const std::string* p = find_meta(c.metadata, "populations")) d.populations = split_numbers(*p, "populations metadata");
    out.push_back(std::move(d));
  }
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qudd: qudit dynamical decoupling simulator and fitting toolkit"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config_path, "Experiment configuration (JSON)");
  auto* seed_opt = app.add_option("--seed", seed, "Override the configured seed");
  app.add_option("--threads", g.threads, "Worker threads (outputs do not depend on this)")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out_dir, "Output directory");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo decay curves, one CSV per dataset");
  auto* fit = app.add_subcommand("fit", "Fit decay, Ramsey or RB CSVs");
  std::vector<std::string> inputs;
  std::string mode;
  fit->add_option("inputs", inputs, "CSV files")->required();
  fit->add_option("--mode", mode, "joint | ramsey | rb (default from config, else joint)")
      ->check(CLI::IsMember({"joint", "ramsey", "rb"}));
  auto* br = app.add_subcommand("breit-rabi", "Hyperfine Zeeman levels, sensitivities and transitions");
  std::string atom = "9Be+", field, atoms_file, sweep_to;
  std::vector<std::string> level_flags;
  std::size_t sweep_points = 21;
  br->add_option("--atom", atom, "Atom name in the constants file");
  br->add_option("--field", field, "Magnetic field, e.g. \"13.23 mT\"")->required();
  br->add_option("--level", level_flags, "Level F,mF (repeatable)");
  br->add_option("--atoms-file", atoms_file, "Atom constants file");
  br->add_option("--sweep-to", sweep_to, "Print energies from 0 to this field");
  br->add_option("--sweep-points", sweep_points, "Points in the sweep");
  auto* rbc = app.add_subcommand("rb", "Randomized benchmarking simulation and fit");
  auto* ps = app.add_subcommand("print-sequence", "Print a pulse sequence as an event table");
  std::string family = "mldd", duration, levels_text = "0,1,2";
  int repetitions = 1;
  std::size_t dim = 3;
  ps->add_option("--family", family, "mldd | cyclic | bare | ramsey");
  ps->add_option("--repetitions", repetitions, "Repetitions N")->check(CLI::PositiveNumber);
  ps->add_option("--duration", duration, "Total duration, e.g. \"3 ms\"")->required();
  ps->add_option("--levels", levels_text, "Level indices, comma separated");
  ps->add_option("--dim", dim, "Number of levels");
  for (auto* s : {sim, fit, br, rbc, ps}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (*sim) return cmd_simulate(g, out);
    if (*fit) return cmd_fit(g, inputs, mode, out);
    if (*br) return cmd_breit_rabi(atom, field, level_flags, atoms_file, sweep_to, sweep_points, out);
    if (*rbc) return cmd_rb(g, out);
    if (*ps) return cmd_print_sequence(family, repetitions, duration, levels_text, dim, out);
  } catch (const FitError& e) {
    const auto& d = e.diagnostics();
    err << "numerical failure: " << e.what() << " (converged=" << d.converged << ", iterations=" << d.iterations
        << ", evaluations=" << d.evaluations << ", objective=" << d.objective << ")\n";
    return kNumericalError;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const CsvError& e) {
    err << "input error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::runtime_error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  }
  return kOk;
}

}  // namespace qudd::cli
