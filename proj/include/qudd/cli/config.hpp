// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qudd/breit_rabi.hpp"
#include "qudd/ensemble.hpp"
#include "qudd/fitting.hpp"
#include "qudd/noise_model.hpp"
#include "qudd/qudit_core.hpp"
#include "qudd/rb_sim.hpp"
#include "qudd/sequences.hpp"

namespace qudd::cli {

/// Invalid configuration. `key` is the dotted path of the offending entry.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : std::invalid_argument("config key '" + key + "': " + message), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct SystemConfig {
  std::optional<HyperfineAtom> atom;  // set when built from atom constants
  double field = 0.0;                 // T
  std::vector<LevelSpec> levels;
  LevelSystem system;
};

struct DatasetConfig {
  std::string name;
  SequenceFamily family;
  PureState prepared;
  std::optional<PureState> readout;
  std::string state_label;
  std::vector<double> T_grid;  // s
};

struct FitConfig {
  std::string mode = "joint";  // joint | ramsey | rb
  JointFitSpec spec;
  FitOptions options;
};

struct RbConfig {
  rb::GateErrorModel error;
  std::optional<double> injected_epsilon;
  std::vector<int> lengths;
  std::size_t sequences = 30;
  std::size_t shots = 1000;
};

struct ExperimentConfig {
  /// The parsed document with command-line overrides applied; echoed into outputs.
  nlohmann::json document;
  std::optional<SystemConfig> system;
  NoiseSpec noise;
  double pulse_error = 0.0;
  std::optional<double> target_contrast;  // calibrate pulse_error to this g
  std::optional<DetectionModel> detection;
  std::size_t trials = 300;
  std::uint64_t seed = 1;
  std::vector<DatasetConfig> datasets;
  std::optional<FitConfig> fit;
  std::optional<RbConfig> rb;
};

/// Validates and converts a configuration document. Relative "atoms_file"
/// paths resolve against `data_dir`. Unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& document, const std::string& data_dir);

nlohmann::json load_json_file(const std::string& path);

/// Default atom constants directory (compiled in, overridable with QUDD_DATA_DIR).
std::string default_data_dir();

/// Evenly spaced grid; both ends included.
std::vector<double> linear_grid(double from, double to, std::size_t points);

}  // namespace qudd::cli
