// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qudd/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

namespace qudd {
namespace {

struct Unit {
  std::string_view symbol;
  double scale;
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr std::array kField{Unit{"T", 1.0}, Unit{"mT", 1e-3}, Unit{"uT", 1e-6}, Unit{"µT", 1e-6},
                            Unit{"μT", 1e-6}, Unit{"nT", 1e-9}, Unit{"pT", 1e-12}, Unit{"G", 1e-4}};
constexpr std::array kTime{Unit{"s", 1.0}, Unit{"ms", 1e-3}, Unit{"us", 1e-6}, Unit{"µs", 1e-6},
                           Unit{"μs", 1e-6}, Unit{"ns", 1e-9}};
constexpr std::array kFrequency{Unit{"Hz", 1.0}, Unit{"kHz", 1e3}, Unit{"MHz", 1e6}, Unit{"GHz", 1e9}};
constexpr std::array kAngle{Unit{"rad", 1.0}, Unit{"mrad", 1e-3}, Unit{"deg", std::numbers::pi / 180.0}};
constexpr std::array kSensitivity{Unit{"rad/s/T", 1.0},        Unit{"Hz/T", kTwoPi},
                                  Unit{"kHz/mT", kTwoPi * 1e6}, Unit{"MHz/mT", kTwoPi * 1e9},
                                  Unit{"MHz/T", kTwoPi * 1e6},  Unit{"GHz/T", kTwoPi * 1e9}};

template <std::size_t N>
bool lookup(const std::array<Unit, N>& table, std::string_view symbol, double& scale) {
  for (const auto& u : table) {
    if (u.symbol == symbol) {
      scale = u.scale;
      return true;
    }
  }
  return false;
}

template <std::size_t N>
std::string allowed(const std::array<Unit, N>& table) {
  std::string s;
  for (const auto& u : table) {
    if (!s.empty()) s += ", ";
    s += u.symbol;
  }
  return s;
}

}  // namespace

std::string_view dimension_name(Dimension dimension) {
  switch (dimension) {
    case Dimension::magnetic_field: return "magnetic field";
    case Dimension::time: return "time";
    case Dimension::frequency: return "frequency";
    case Dimension::sensitivity: return "sensitivity";
    case Dimension::angle: return "angle";
  }
  return "unknown";
}

double parse_quantity(std::string_view text, Dimension dimension) {
  const std::string quoted = "\"" + std::string(text) + "\"";
  const auto first = text.find_first_not_of(' ');
  if (first == std::string_view::npos) throw UnitError("empty quantity, expected \"<number> <unit>\"");
  text.remove_prefix(first);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || !std::isfinite(value)) throw UnitError("cannot parse number in " + quoted);
  std::string_view rest(ptr, static_cast<std::size_t>(text.data() + text.size() - ptr));
  if (rest.empty() || rest.front() != ' ')
    throw UnitError("missing unit in " + quoted + " (expected \"<number> <unit>\")");
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  while (!rest.empty() && rest.back() == ' ') rest.remove_suffix(1);

  double scale = 0.0;
  bool ok = false;
  std::string expected;
  switch (dimension) {
    case Dimension::magnetic_field:
      ok = lookup(kField, rest, scale);
      expected = allowed(kField);
      break;
    case Dimension::time:
      ok = lookup(kTime, rest, scale);
      expected = allowed(kTime);
      break;
    case Dimension::frequency:
      ok = lookup(kFrequency, rest, scale);
      expected = allowed(kFrequency);
      break;
    case Dimension::sensitivity:
      ok = lookup(kSensitivity, rest, scale);
      expected = allowed(kSensitivity);
      break;
    case Dimension::angle:
      ok = lookup(kAngle, rest, scale);
      expected = allowed(kAngle);
      break;
  }
  if (!ok)
    throw UnitError("unit \"" + std::string(rest) + "\" in " + quoted + " is not a " +
                    std::string(dimension_name(dimension)) + " unit (allowed: " + expected + ")");
  return value * scale;
}

}  // namespace qudd
