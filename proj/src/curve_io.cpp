// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qudd/curve_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace qudd {
namespace {

void write_metadata(std::ostream& out, const CsvMetadata& metadata) {
  for (const auto& [key, value] : metadata) {
    if (key.find_first_of(":\n\r") != std::string::npos || value.find_first_of("\n\r") != std::string::npos)
      throw CsvError("metadata key/value must be single-line (key without ':'): " + key);
    out << "# " << key << ": " << value << '\n';
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_cell(const std::string& cell, std::size_t line_no, const char* column) {
  T v{};
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size())
    throw CsvError("line " + std::to_string(line_no) + ": bad value \"" + cell + "\" in column " + column);
  return v;
}

// Reads metadata lines and the header; returns data rows with their line numbers.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_table(std::istream& in, const char* header,
                                                                         CsvMetadata& metadata) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!have_header && line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ");
      if (colon == std::string::npos) throw CsvError("line " + std::to_string(line_no) + ": malformed metadata line");
      metadata.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    if (!have_header) {
      if (line != header)
        throw CsvError("schema mismatch: expected header \"" + std::string(header) + "\", found \"" + line + "\"");
      have_header = true;
      continue;
    }
    rows.emplace_back(line_no, split(line));
  }
  if (!have_header) throw CsvError("schema mismatch: missing header \"" + std::string(header) + "\"");
  return rows;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path);
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw CsvError("cannot format number");
  return std::string(buf, ptr);
}

void write_decay_csv(std::ostream& out, const DecayCurve& curve, const CsvMetadata& metadata) {
  if (curve.state_label.find_first_of(",\n\r") != std::string::npos)
    throw CsvError("state label must not contain commas or line breaks");
  write_metadata(out, metadata);
  out << kDecayCsvHeader << '\n';
  for (const auto& p : curve.points) {
    out << format_double(p.T) << ',' << format_double(p.fidelity) << ',' << format_double(p.stderr) << ','
        << curve.repetitions << ',' << curve.state_label << ',' << curve.trials << ',' << curve.seed << '\n';
  }
}

DecayCsv read_decay_csv(std::istream& in) {
  DecayCsv out;
  const auto rows = read_table(in, kDecayCsvHeader, out.metadata);
  if (rows.empty()) throw CsvError("decay CSV has no data rows");
  bool first = true;
  for (const auto& [line_no, cells] : rows) {
    if (cells.size() != 7)
      throw CsvError("line " + std::to_string(line_no) + ": expected 7 columns, found " + std::to_string(cells.size()));
    DecayPoint p;
    p.T = parse_cell<double>(cells[0], line_no, "T_seconds");
    p.fidelity = parse_cell<double>(cells[1], line_no, "fidelity");
    p.stderr = parse_cell<double>(cells[2], line_no, "stderr");
    const int N = parse_cell<int>(cells[3], line_no, "N");
    const auto trials = parse_cell<std::size_t>(cells[5], line_no, "trials");
    const auto seed = parse_cell<std::uint64_t>(cells[6], line_no, "seed");
    if (first) {
      out.curve.repetitions = N;
      out.curve.state_label = cells[4];
      out.curve.trials = trials;
      out.curve.seed = seed;
      first = false;
    } else if (N != out.curve.repetitions || cells[4] != out.curve.state_label || trials != out.curve.trials ||
               seed != out.curve.seed) {
      throw CsvError("line " + std::to_string(line_no) + ": N/state_label/trials/seed differ within one curve");
    }
    out.curve.points.push_back(p);
  }
  return out;
}

DecayCsv read_decay_csv_file(const std::string& path) {
  auto in = open(path);
  try {
    return read_decay_csv(in);
  } catch (const CsvError& e) {
    throw CsvError(path + ": " + e.what());
  }
}

void write_survival_csv(std::ostream& out, const rb::Curve& curve, const CsvMetadata& metadata) {
  write_metadata(out, metadata);
  out << kSurvivalCsvHeader << '\n';
  for (const auto& p : curve.points) {
    out << p.length << ',' << format_double(p.mean) << ',' << format_double(p.stderr) << ',' << p.sequences << ','
        << p.shots << ',' << curve.seed << '\n';
  }
}

SurvivalCsv read_survival_csv(std::istream& in) {
  SurvivalCsv out;
  const auto rows = read_table(in, kSurvivalCsvHeader, out.metadata);
  if (rows.empty()) throw CsvError("survival CSV has no data rows");
  for (const auto& [line_no, cells] : rows) {
    if (cells.size() != 6)
      throw CsvError("line " + std::to_string(line_no) + ": expected 6 columns, found " + std::to_string(cells.size()));
    rb::SurvivalPoint p;
    p.length = parse_cell<int>(cells[0], line_no, "l");
    p.mean = parse_cell<double>(cells[1], line_no, "mean");
    p.stderr = parse_cell<double>(cells[2], line_no, "stderr");
    p.sequences = parse_cell<std::size_t>(cells[3], line_no, "sequences");
    p.shots = parse_cell<std::size_t>(cells[4], line_no, "shots");
    out.curve.seed = parse_cell<std::uint64_t>(cells[5], line_no, "seed");
    out.curve.points.push_back(p);
  }
  return out;
}

SurvivalCsv read_survival_csv_file(const std::string& path) {
  auto in = open(path);
  try {
    return read_survival_csv(in);
  } catch (const CsvError& e) {
    throw CsvError(path + ": " + e.what());
  }
}

}  // namespace qudd
