// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "qudd/kernels/phasor.hpp"

namespace qudd::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(QUDD_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  if (const char* forced = std::getenv("QUDD_KERNELS")) {
    const std::string want(forced);
    if (want == "scalar") return detail::scalar_table;
    if (want == "avx2" && available(Isa::avx2)) return table(Isa::avx2);
  }
  return available(Isa::avx2) ? table(Isa::avx2) : detail::scalar_table;
}

}  // namespace

bool available(Isa isa) {
  if (isa == Isa::scalar) return true;
  static const bool avx2 = cpu_has_avx2();
  return avx2;
}

const KernelTable& table(Isa isa) {
  if (!available(isa)) throw std::runtime_error("kernel variant not available: " + std::string(name(isa)));
#if defined(QUDD_HAVE_AVX2_KERNELS)
  if (isa == Isa::avx2) return detail::avx2_table;
#endif
  return detail::scalar_table;
}

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace qudd::kernels
