// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "mnns/error.hpp"
#include "mnns/exponents.hpp"
#include "mnns/field_io.hpp"
#include "mnns/grid.hpp"
#include "mnns/rng.hpp"

using namespace mnns;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}
}  // namespace

TEST_CASE("exponent validation and infinity tag") {
  CHECK(code_of([] { Exponent(0.5); }) == ErrorCode::hypothesis);
  CHECK(code_of([] { Exponent(std::nan("")); }) == ErrorCode::hypothesis);
  Exponent e(kInf);
  CHECK(e.is_infinite());
  CHECK(e.reciprocal() == 0.0);
  CHECK(e == Exponent::infinity());
  CHECK(e.to_string() == "inf");
  CHECK(Exponent(4.0).divided_by(0.5).value() == 8.0);
  CHECK(Exponent::infinity().divided_by(0.25).is_infinite());
  CHECK(code_of([] { Exponent(1.5).divided_by(2.0); }) == ErrorCode::hypothesis);
}

TEST_CASE("criticality sum depends only on the reciprocals") {
  auto p = MixedExponents::from_values({3.0, 6.0, kInf});
  CHECK(p.criticality_sum() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_FALSE(p.all_finite());
  CHECK(MixedExponents::from_values({8.0, 16.0 / 7.0, 16.0 / 7.0}).criticality_sum() ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.to_string() == "(3, 6, inf)");
}

TEST_CASE("grid geometry puts the origin on a node") {
  TensorGrid g({2.0, 4.0}, {8, 16});
  CHECK(g.size() == 128);
  CHECK(g.spacing(0) == 0.5);
  CHECK(g.coordinate(0, 4) == 0.0);
  CHECK(g.coordinate(1, 8) == 0.0);
  CHECK(g.stride(1) == 8);
  std::vector<double> x(2);
  g.position(8 * 3 + 5, x);
  CHECK(x[0] == doctest::Approx(0.5));
  CHECK(x[1] == doctest::Approx(-4.0 + 3 * 0.5));
  CHECK(g.cell_volume() == 0.25);
}

TEST_CASE("grid rejects odd or tiny counts") {
  CHECK(code_of([] { TensorGrid({1.0}, {5}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { TensorGrid({1.0}, {2}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { TensorGrid({1.0, 1.0}, {4}); }) == ErrorCode::dimension_mismatch);
  CHECK(code_of([] { TensorGrid({-1.0}, {4}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("fields reject non-finite samples and mismatched grids") {
  auto g = TensorGrid::cube(1, 1.0, 4);
  CHECK(code_of([&] { ScalarField(g, {0, 1, kInf, 0}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { ScalarField(g, {0, 1}); }) == ErrorCode::dimension_mismatch);
  auto a = ScalarField::zeros(g);
  auto b = ScalarField::zeros(TensorGrid::cube(1, 2.0, 4));
  CHECK(code_of([&] { (void)(a + b); }) == ErrorCode::dimension_mismatch);
  CHECK(code_of([&] { VectorField({a, b}); }) == ErrorCode::dimension_mismatch);
}

TEST_CASE("field arithmetic") {
  auto g = TensorGrid::cube(2, 1.0, 4);
  auto f = ScalarField::sample(g, [](std::span<const double> x) { return x[0] + 2 * x[1]; });
  auto h = (2.0 * f) - f;
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(h[i] == f[i]);
  auto sq = pointwise_product(f, f);
  CHECK(sq[3] == f[3] * f[3]);
  // Nodes -1, -0.5, 0, 0.5 on each axis: sum of x0 + 2 x1 is -12, cell volume 1/4.
  CHECK(f.integral() == doctest::Approx(-3.0));
}

TEST_CASE("MNF1 round trip is bit exact") {
  TensorGrid g({1.5, 0.1}, {4, 6});
  SplitMix64 rng(3);
  std::vector<ScalarField> comps;
  for (int c = 0; c < 2; ++c) {
    std::vector<double> v(g.size());
    for (auto& x : v) x = rng.normal();
    comps.emplace_back(g, v);
  }
  VectorField f(comps);
  std::stringstream ss;
  write_mnf1(ss, f);
  const auto text = ss.str();
  CHECK(text.rfind("MNF1 2 4 6 1.5 0.10000000000000001 2\n", 0) == 0);
  CHECK(text.size() == text.find('\n') + 1 + 8 * 2 * g.size());
  auto back = read_mnf1(ss);
  CHECK(back.grid() == g);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[c][i] == f[c][i]);
}

TEST_CASE("MNF1 payload is little endian, component major") {
  auto g = TensorGrid::cube(1, 1.0, 4);
  VectorField f({ScalarField(g, {1, 0, 0, 0}), ScalarField(g, {0, 0, 0, 2})});
  std::stringstream ss;
  write_mnf1(ss, f);
  auto s = ss.str();
  auto body = s.substr(s.find('\n') + 1);
  // 1.0 = 0x3ff0000000000000, least significant byte first.
  CHECK(static_cast<unsigned char>(body[7]) == 0x3f);
  CHECK(static_cast<unsigned char>(body[6]) == 0xf0);
  // 2.0 is the last double of the second component.
  CHECK(static_cast<unsigned char>(body[8 * 7 + 7]) == 0x40);
}

TEST_CASE("MNF1 reader rejects unknown magic and short payloads") {
  std::stringstream bad("MNF2 1 4 1 1\n");
  CHECK(code_of([&] { read_mnf1(bad); }) == ErrorCode::io);
  std::stringstream shortp("MNF1 1 4 1 1\nabc");
  CHECK(code_of([&] { read_mnf1(shortp); }) == ErrorCode::io);
}

TEST_CASE("SplitMix64 reference values") {
  // First outputs for seed 0, as published with the reference implementation.
  SplitMix64 r(0);
  CHECK(r.next() == 0xe220a8397b1dcdafULL);
  CHECK(r.next() == 0x6e789e6aa1b965f4ULL);
  CHECK(r.next() == 0x06c45d188009454fULL);
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.uniform() == b.uniform());
}
