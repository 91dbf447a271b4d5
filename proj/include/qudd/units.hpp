// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qudd {

enum class Dimension { magnetic_field, time, frequency, sensitivity, angle };

class UnitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses "<number> <unit>" and returns the value in SI: T, s, Hz, rad, or
/// rad·s⁻¹·T⁻¹ for sensitivities. Cyclic sensitivity units (Hz/T, kHz/mT,
/// MHz/mT, MHz/T, GHz/T) are multiplied by 2π; "rad/s/T" is taken as is.
/// Anything else, including a missing unit or trailing text, throws UnitError.
double parse_quantity(std::string_view text, Dimension dimension);

std::string_view dimension_name(Dimension dimension);

}  // namespace qudd
