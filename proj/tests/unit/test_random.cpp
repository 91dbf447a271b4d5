// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include <set>

#include "doctest.h"
#include "qudd/parallel.hpp"
#include "qudd/random.hpp"

using namespace qudd;

TEST_CASE("streams are reproducible and distinct") {
  Stream a(1, 2), b(1, 2), c(1, 3), d(2, 2);
  for (int k = 0; k < 100; ++k) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
  }
}

TEST_CASE("derived stream ids depend on order and value") {
  std::set<std::uint64_t> ids;
  for (std::uint64_t i = 0; i < 50; ++i)
    for (std::uint64_t j = 0; j < 50; ++j) ids.insert(Stream::derive({i, j}));
  CHECK(ids.size() == 2500);
  CHECK(Stream::derive({1, 2}) != Stream::derive({2, 1}));
  CHECK(Stream::derive({1}) != Stream::derive({1, 0}));
}

TEST_CASE("uniform and bounded draws") {
  Stream s(9, 9);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double z = s.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.01));
  int counts[7] = {};
  for (int k = 0; k < 70000; ++k) ++counts[s.below(7)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("parallel_for covers every index once for any thread count") {
  for (unsigned threads : {1u, 2u, 3u, 8u}) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
  CHECK_THROWS_AS(parallel_for(10, 4, [](std::size_t i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}
