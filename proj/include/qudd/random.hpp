// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace qudd {

/// Counter-based random stream (Philox4x32-10).
///
/// A stream is addressed by (seed, stream_id). Every work item derives its own
/// stream id from its logical coordinates (dataset, grid point, trial, ...), so
/// results do not depend on how items are scheduled across threads.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id);

  /// Mixes an ordered list of integer coordinates into a stream id.
  static std::uint64_t derive(std::initializer_list<std::uint64_t> coords);

  std::uint64_t next_u64();
  std::uint32_t next_u32();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller, no cached second variate).
  double normal();
  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
};

}  // namespace qudd
