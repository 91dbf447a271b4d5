// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qudd/cli/config.hpp"
#include "qudd/curve_io.hpp"
#include "qudd/fitting.hpp"

namespace qudd::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kConfigError = 2, kNumericalError = 3 };

struct SimulatedDataset {
  std::string name;
  DecayCurve curve;
  CsvMetadata metadata;
};

/// pulses.error, or the value calibrated to pulses.contrast.
double resolve_pulse_error(const ExperimentConfig& cfg);

/// One Monte Carlo curve per configured dataset. Dataset k runs with seed
/// Stream::derive({cfg.seed, k}); outputs do not depend on `threads`.
std::vector<SimulatedDataset> run_simulation(const ExperimentConfig& cfg, unsigned threads);

/// Rebuilds fit inputs from decay CSVs. Sensitivities come from `system` when
/// given, otherwise from the CSV metadata written by `simulate`.
std::vector<DecayDataset> decay_datasets(const std::vector<DecayCsv>& csvs);
LevelSystem system_from_metadata(const std::vector<DecayCsv>& csvs);

/// Entry point of the `qudd` tool. Returns an ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qudd::cli
