// Copyright 2026 The qudd Authors
// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include "doctest.h"
#include "qudd/curve_io.hpp"
#include "qudd/units.hpp"

using namespace qudd;

TEST_CASE("quantities with units") {
  CHECK(parse_quantity("13.23 mT", Dimension::magnetic_field) == doctest::Approx(13.23e-3));
  CHECK(parse_quantity("10 nT", Dimension::magnetic_field) == doctest::Approx(1e-8));
  CHECK(parse_quantity("132.3 G", Dimension::magnetic_field) == doctest::Approx(13.23e-3));
  CHECK(parse_quantity("5 ms", Dimension::time) == doctest::Approx(5e-3));
  CHECK(parse_quantity("25.11 µs", Dimension::time) == doctest::Approx(25.11e-6));
  CHECK(parse_quantity("150 Hz", Dimension::frequency) == 150.0);
  CHECK(parse_quantity("-625.008837048 MHz", Dimension::frequency) == doctest::Approx(-625.008837048e6));
  CHECK(parse_quantity("14.01 MHz/mT", Dimension::sensitivity) ==
        doctest::Approx(2 * std::numbers::pi * 14.01e9));
  CHECK(parse_quantity("1e9 rad/s/T", Dimension::sensitivity) == 1e9);
  CHECK(parse_quantity("90 deg", Dimension::angle) == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("unit grammar is strict") {
  CHECK_THROWS_AS(parse_quantity("13.23", Dimension::magnetic_field), UnitError);
  CHECK_THROWS_AS(parse_quantity("13.23mT", Dimension::magnetic_field), UnitError);
  CHECK_THROWS_AS(parse_quantity("13.23 ms", Dimension::magnetic_field), UnitError);
  CHECK_THROWS_AS(parse_quantity("13.23 mT extra", Dimension::magnetic_field), UnitError);
  CHECK_THROWS_AS(parse_quantity("abc mT", Dimension::magnetic_field), UnitError);
  CHECK_THROWS_AS(parse_quantity("", Dimension::time), UnitError);
  CHECK_THROWS_AS(parse_quantity("5 mt", Dimension::time), UnitError);
}

TEST_CASE("decay CSV round trip") {
  DecayCurve c;
  c.repetitions = 4;
  c.state_label = "equal3";
  c.trials = 300;
  c.seed = 1234567890123ULL;
  c.points = {{1e-3, 0.9123456789012345, 0.0123}, {2.5e-3, 1.0 / 3.0, 0.027}};
  const CsvMetadata meta{{"config", R"({"a":1})"}, {"run_seed", "7"}};
  std::ostringstream os;
  write_decay_csv(os, c, meta);
  CHECK(os.str().find(kDecayCsvHeader) != std::string::npos);
  std::istringstream is(os.str());
  const DecayCsv back = read_decay_csv(is);
  CHECK(back.metadata == meta);
  CHECK(back.curve.repetitions == 4);
  CHECK(back.curve.state_label == "equal3");
  CHECK(back.curve.trials == 300);
  CHECK(back.curve.seed == c.seed);
  REQUIRE(back.curve.points.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.curve.points[i].T == c.points[i].T);
    CHECK(back.curve.points[i].fidelity == c.points[i].fidelity);
    CHECK(back.curve.points[i].stderr == c.points[i].stderr);
  }
  std::ostringstream again;
  write_decay_csv(again, back.curve, back.metadata);
  CHECK(again.str() == os.str());
}

TEST_CASE("survival CSV round trip") {
  rb::Curve c;
  c.seed = 9;
  c.points = {{1, 0.99, 0.001, 30, 1000}, {16, 0.95, 0.002, 30, 1000}};
  std::ostringstream os;
  write_survival_csv(os, c);
  std::istringstream is(os.str());
  const SurvivalCsv back = read_survival_csv(is);
  REQUIRE(back.curve.points.size() == 2);
  CHECK(back.curve.points[1].length == 16);
  CHECK(back.curve.points[1].mean == 0.95);
  CHECK(back.curve.seed == 9);
}

TEST_CASE("CSV schema errors") {
  std::istringstream wrong("l,mean,stderr,sequences,shots,seed\n1,0.9,0.01,30,1000,1\n");
  CHECK_THROWS_AS(read_decay_csv(wrong), CsvError);
  std::istringstream bad_row(std::string(kDecayCsvHeader) + "\n0.001,abc,0.01,1,x,300,1\n");
  CHECK_THROWS_AS(read_decay_csv(bad_row), CsvError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_decay_csv(empty), CsvError);
  CHECK_THROWS(read_decay_csv_file("/nonexistent/qudd.csv"));
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-3) == "0.001");
}
