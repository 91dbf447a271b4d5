// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include "qudd/sequences.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace qudd {
namespace {

void require_positive(double tau, const char* who) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument(std::string(who) + ": tau must be > 0");
}

void require_repetitions(int n, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": repetitions must be >= 1");
}

double event_start(const SequenceEvent& e) {
  return std::visit([](const auto& ev) {
    if constexpr (std::is_same_v<std::decay_t<decltype(ev)>, Pulse>)
      return ev.at;
    else
      return ev.from;
  }, e);
}

}  // namespace

SequenceSpec build_mldd(LevelTriple levels, double tau, int repetitions) {
  const auto [l, m, n] = levels;
  if (l == m || m == n || l == n) throw std::invalid_argument("build_mldd: levels must be distinct");
  require_positive(tau, "build_mldd");
  require_repetitions(repetitions, "build_mldd");

  SequenceSpec seq;
  seq.repetitions = repetitions;
  seq.total_duration = 3.0 * repetitions * tau;
  const std::array<std::array<std::size_t, 2>, 3> pairs{{{l, m}, {m, n}, {n, l}}};
  for (int k = 0; k < repetitions; ++k) {
    for (int s = 0; s < 3; ++s) {
      const double t0 = (3.0 * k + s) * tau;
      const double t1 = (3.0 * k + s + 1) * tau;
      const auto [a, b] = pairs[s];
      seq.events.push_back(Pulse{a, b, std::numbers::pi, 0.0, t0});
      seq.events.push_back(Wait{t0, t1});
      seq.events.push_back(Pulse{a, b, std::numbers::pi, 0.0, t1});
    }
  }
  // The last wait must end exactly on total_duration.
  std::get<Wait>(seq.events[seq.events.size() - 2]).to = seq.total_duration;
  std::get<Pulse>(seq.events.back()).at = seq.total_duration;
  return seq;
}

SequenceSpec build_cyclic_mldd(const LevelSystem& system, double tau, int repetitions) {
  require_positive(tau, "build_cyclic_mldd");
  require_repetitions(repetitions, "build_cyclic_mldd");
  const std::size_t d = system.dim();
  SequenceSpec seq;
  seq.repetitions = repetitions;
  seq.total_duration = static_cast<double>(d) * repetitions * tau;
  const std::size_t segments = d * static_cast<std::size_t>(repetitions);
  for (std::size_t s = 0; s < segments; ++s) {
    const double t0 = static_cast<double>(s) * tau;
    const double t1 = s + 1 == segments ? seq.total_duration : static_cast<double>(s + 1) * tau;
    seq.events.push_back(Wait{t0, t1});
    for (std::size_t k = d - 1; k-- > 0;) seq.events.push_back(Pulse{k, k + 1, std::numbers::pi, 0.0, t1});
  }
  return seq;
}

SequenceSpec build_ramsey(std::size_t i, std::size_t j, double wait) {
  if (i == j) throw std::invalid_argument("build_ramsey: levels must differ");
  if (!(wait >= 0.0) || !std::isfinite(wait)) throw std::invalid_argument("build_ramsey: wait must be >= 0");
  SequenceSpec seq;
  seq.total_duration = wait;
  seq.events = {Pulse{i, j, 0.5 * std::numbers::pi, 0.0, 0.0}, Wait{0.0, wait},
                Pulse{i, j, 0.5 * std::numbers::pi, 0.0, wait}};
  return seq;
}

SequenceSpec build_bare_wait(double total) {
  if (!(total >= 0.0) || !std::isfinite(total)) throw std::invalid_argument("build_bare_wait: total must be >= 0");
  SequenceSpec seq;
  seq.total_duration = total;
  seq.events = {Wait{0.0, total}};
  return seq;
}

void validate(const SequenceSpec& seq) {
  if (!(seq.total_duration >= 0.0)) throw MalformedSequence("sequence: negative total duration");
  double cursor = 0.0;     // end of the tiled region so far
  double last_time = 0.0;  // events must be time-ordered
  for (const auto& e : seq.events) {
    const double start = event_start(e);
    if (start < 0.0) throw MalformedSequence("sequence: negative event time");
    if (start < last_time) throw MalformedSequence("sequence: events are not time-ordered");
    last_time = start;
    if (const auto* w = std::get_if<Wait>(&e)) {
      if (w->to < w->from) throw MalformedSequence("sequence: wait ends before it starts");
      if (w->from != cursor) throw MalformedSequence(w->from > cursor ? "sequence: gap between waits"
                                                                       : "sequence: overlapping waits");
      cursor = w->to;
      last_time = w->to;
    } else {
      const auto& p = std::get<Pulse>(e);
      if (p.at != cursor) throw MalformedSequence("sequence: pulse lies inside a wait");
      if (p.i == p.j) throw MalformedSequence("sequence: pulse on a single level");
    }
  }
  if (cursor != seq.total_duration) throw MalformedSequence("sequence: waits do not cover the total duration");
}

std::size_t pulse_count(const SequenceSpec& seq) {
  std::size_t n = 0;
  for (const auto& e : seq.events) n += std::holds_alternative<Pulse>(e);
  return n;
}

std::string format_event_table(const SequenceSpec& seq) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-4s %-6s %-14s %-14s %s\n", "#", "kind", "start_ms", "end_ms", "detail");
  os << line;
  std::size_t idx = 0;
  for (const auto& e : seq.events) {
    if (const auto* p = std::get_if<Pulse>(&e)) {
      std::snprintf(line, sizeof line, "%-4zu %-6s %-14.6f %-14.6f pi_%zu%zu angle=%.6f*pi phase=%.6f rad\n", idx, "pulse",
                    p->at * 1e3, p->at * 1e3, p->i, p->j, p->angle / std::numbers::pi, p->axis_phase);
    } else {
      const auto& w = std::get<Wait>(e);
      std::snprintf(line, sizeof line, "%-4zu %-6s %-14.6f %-14.6f tau=%.6f ms\n", idx, "wait", w.from * 1e3,
                    w.to * 1e3, (w.to - w.from) * 1e3);
    }
    os << line;
    ++idx;
  }
  std::snprintf(line, sizeof line, "total_duration_ms=%.6f repetitions=%d pulses=%zu\n", seq.total_duration * 1e3,
                seq.repetitions, pulse_count(seq));
  os << line;
  return os.str();
}

SequenceSpec build_for_duration(const SequenceFamily& family, const LevelSystem& system, double T) {
  return std::visit(
      [&](const auto& f) -> SequenceSpec {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, BareFamily>) {
          return build_bare_wait(T);
        } else if constexpr (std::is_same_v<F, MlddFamily>) {
          return build_mldd(f.levels, T / (3.0 * f.repetitions), f.repetitions);
        } else if constexpr (std::is_same_v<F, CyclicFamily>) {
          return build_cyclic_mldd(system, T / (static_cast<double>(system.dim()) * f.repetitions), f.repetitions);
        } else {
          return build_ramsey(f.i, f.j, T);
        }
      },
      family);
}

int family_repetitions(const SequenceFamily& family) {
  if (const auto* m = std::get_if<MlddFamily>(&family)) return m->repetitions;
  if (const auto* c = std::get_if<CyclicFamily>(&family)) return c->repetitions;
  return 0;
}

std::string describe(const SequenceFamily& family) {
  return std::visit(
      [](const auto& f) -> std::string {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, BareFamily>)
          return "bare";
        else if constexpr (std::is_same_v<F, MlddFamily>)
          return "mldd " + std::to_string(f.levels[0]) + " " + std::to_string(f.levels[1]) + " " +
                 std::to_string(f.levels[2]) + " N=" + std::to_string(f.repetitions);
        else if constexpr (std::is_same_v<F, CyclicFamily>)
          return "cyclic N=" + std::to_string(f.repetitions);
        else
          return "ramsey " + std::to_string(f.i) + " " + std::to_string(f.j);
      },
      family);
}

}  // namespace qudd
