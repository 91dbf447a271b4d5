// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qudd/ensemble.hpp"
#include "qudd/rb_sim.hpp"

namespace qudd {

/// Ordered "# key: value" header lines. Values must be single-line.
using CsvMetadata = std::vector<std::pair<std::string, std::string>>;

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kDecayCsvHeader = "T_seconds,fidelity,stderr,N,state_label,trials,seed";
inline constexpr const char* kSurvivalCsvHeader = "l,mean,stderr,sequences,shots,seed";

/// Shortest round-trip decimal form.
std::string format_double(double v);

void write_decay_csv(std::ostream& out, const DecayCurve& curve, const CsvMetadata& metadata = {});

struct DecayCsv {
  DecayCurve curve;
  CsvMetadata metadata;
};

DecayCsv read_decay_csv(std::istream& in);
DecayCsv read_decay_csv_file(const std::string& path);

void write_survival_csv(std::ostream& out, const rb::Curve& curve, const CsvMetadata& metadata = {});

struct SurvivalCsv {
  rb::Curve curve;
  CsvMetadata metadata;
};

SurvivalCsv read_survival_csv(std::istream& in);
SurvivalCsv read_survival_csv_file(const std::string& path);

}  // namespace qudd
