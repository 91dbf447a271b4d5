// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qudd/breit_rabi.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qudd/units.hpp"

namespace qudd {
namespace {

void check_level(const HyperfineAtom& atom, HalfInt F, HalfInt mF) {
  atom.validate();
  const int upper = atom.I.twice + 1;
  const int lower = atom.I.twice - 1;
  if (F.twice != upper && F.twice != lower)
    throw std::invalid_argument("Breit-Rabi: F = " + to_string(F) + " is not I +/- 1/2 for I = " + to_string(atom.I));
  if (std::abs(mF.twice) > F.twice || (F.twice - mF.twice) % 2 != 0)
    throw std::invalid_argument("Breit-Rabi: invalid mF = " + to_string(mF) + " for F = " + to_string(F));
}

void check_field(double B) {
  if (!(B >= 0.0) || !std::isfinite(B)) throw std::invalid_argument("Breit-Rabi: B must be >= 0");
}

bool stretched(const HyperfineAtom& atom, HalfInt mF) { return std::abs(mF.twice) == atom.I.twice + 1; }

}  // namespace

HalfInt HalfInt::from_double(double v) {
  const double twice = 2.0 * v;
  const double r = std::round(twice);
  if (!std::isfinite(v) || std::abs(twice - r) > 1e-9) throw std::invalid_argument("not a half-integer: " + std::to_string(v));
  return HalfInt{static_cast<int>(r)};
}

std::string to_string(HalfInt h) {
  if (h.twice % 2 == 0) return std::to_string(h.twice / 2);
  return std::to_string(h.twice) + "/2";
}

void HyperfineAtom::validate() const {
  if (I.twice < 1) throw std::invalid_argument("HyperfineAtom: I must be >= 1/2");
  if (!(A_hfs != 0.0) || !std::isfinite(A_hfs)) throw std::invalid_argument("HyperfineAtom: A_hfs must be nonzero");
  if (!std::isfinite(g_J) || !std::isfinite(g_I)) throw std::invalid_argument("HyperfineAtom: g-factors must be finite");
  if (!(mu_B > 0.0)) throw std::invalid_argument("HyperfineAtom: mu_B must be > 0");
}

std::string ZeemanLevel::label() const { return "|" + to_string(F) + "," + to_string(mF) + ">"; }

double level_energy(const HyperfineAtom& atom, HalfInt F, HalfInt mF, double B) {
  check_level(atom, F, mF);
  check_field(B);
  const double I = atom.I.value();
  const double m = mF.value();
  if (stretched(atom, mF)) {
    const double sign = m > 0 ? 1.0 : -1.0;
    return atom.A_hfs * I / 2.0 + sign * (atom.g_J / 2.0 + atom.g_I * I) * atom.mu_B * B;
  }
  const double dW = atom.A_hfs * (I + 0.5);
  const double x = (atom.g_J - atom.g_I) * atom.mu_B * B / dW;
  const double branch = F.twice == atom.I.twice + 1 ? 1.0 : -1.0;
  return -dW / (2.0 * (2.0 * I + 1.0)) + atom.g_I * atom.mu_B * m * B +
         branch * dW / 2.0 * std::sqrt(1.0 + 4.0 * m * x / (2.0 * I + 1.0) + x * x);
}

double level_sensitivity(const HyperfineAtom& atom, HalfInt F, HalfInt mF, double B) {
  check_level(atom, F, mF);
  check_field(B);
  const double I = atom.I.value();
  const double m = mF.value();
  if (stretched(atom, mF)) return (m > 0 ? 1.0 : -1.0) * (atom.g_J / 2.0 + atom.g_I * I) * atom.mu_B;
  const double dW = atom.A_hfs * (I + 0.5);
  const double dx = (atom.g_J - atom.g_I) * atom.mu_B / dW;
  const double x = dx * B;
  const double branch = F.twice == atom.I.twice + 1 ? 1.0 : -1.0;
  const double root = std::sqrt(1.0 + 4.0 * m * x / (2.0 * I + 1.0) + x * x);
  return atom.g_I * atom.mu_B * m + branch * dW / 4.0 * (4.0 * m / (2.0 * I + 1.0) + 2.0 * x) * dx / root;
}

std::vector<ZeemanLevel> all_levels(const HyperfineAtom& atom, double B) {
  atom.validate();
  std::vector<ZeemanLevel> out;
  for (int F2 : {atom.I.twice + 1, atom.I.twice - 1}) {
    for (int m2 = F2; m2 >= -F2; m2 -= 2) {
      const HalfInt F{F2}, mF{m2};
      out.push_back({F, mF, level_energy(atom, F, mF, B), level_sensitivity(atom, F, mF, B)});
    }
  }
  return out;
}

double transition_frequency(const HyperfineAtom& atom, const LevelSpec& a, const LevelSpec& b, double B) {
  return std::abs(level_energy(atom, a.F, a.mF, B) - level_energy(atom, b.F, b.mF, B));
}

LevelSystem sensitivities_for(std::span<const LevelSpec> levels, const HyperfineAtom& atom, double B) {
  std::vector<std::string> labels;
  std::vector<double> deltas;
  std::set<std::pair<int, int>> seen;
  for (const auto& l : levels) {
    if (!seen.insert({l.F.twice, l.mF.twice}).second)
      throw std::invalid_argument("sensitivities_for: level |" + to_string(l.F) + "," + to_string(l.mF) +
                                  "> listed twice");
    labels.push_back(ZeemanLevel{l.F, l.mF}.label());
    deltas.push_back(2.0 * std::numbers::pi * level_sensitivity(atom, l.F, l.mF, B));
  }
  return LevelSystem(std::move(labels), std::move(deltas));
}

std::map<std::string, HyperfineAtom> parse_atoms(const std::string& json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("atoms file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("atoms") || !doc["atoms"].is_object())
    throw std::invalid_argument("atoms file: missing \"atoms\" object");
  double mu_B = HyperfineAtom{}.mu_B;
  if (doc.contains("mu_B_over_h_Hz_per_T")) mu_B = doc["mu_B_over_h_Hz_per_T"].get<double>();
  std::map<std::string, HyperfineAtom> out;
  for (const auto& [name, entry] : doc["atoms"].items()) {
    try {
      HyperfineAtom a;
      a.name = name;
      a.I = HalfInt::from_double(entry.at("I").get<double>());
      a.A_hfs = parse_quantity(entry.at("A_hfs").get<std::string>(), Dimension::frequency);
      a.g_J = entry.at("g_J").get<double>();
      a.g_I = entry.at("g_I").get<double>();
      a.mu_B = mu_B;
      a.validate();
      out.emplace(name, a);
    } catch (const json::exception& e) {
      throw std::invalid_argument("atoms file: atom \"" + name + "\": " + e.what());
    }
  }
  return out;
}

std::map<std::string, HyperfineAtom> load_atoms(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open atoms file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_atoms(ss.str());
}

}  // namespace qudd
