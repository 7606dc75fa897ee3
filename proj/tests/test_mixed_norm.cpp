// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "mnns/error.hpp"
#include "mnns/mixed_norm.hpp"
#include "mnns/rng.hpp"
#include "mnns/samples.hpp"

using namespace mnns;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// Indicator of the half-open box prod [lo_k, hi_k).
PointFunction box(std::vector<double> lo, std::vector<double> hi) {
  return [lo, hi](std::span<const double> x) {
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k] < lo[k] - 1e-12 || x[k] >= hi[k] - 1e-12) return 0.0;
    return 1.0;
  };
}

PointFunction gaussian(double a = 1.0) {
  return [a](std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return std::exp(-a * r2);
  };
}
}  // namespace

TEST_CASE("zero field has zero norm") {
  auto g = TensorGrid::cube(3, 2.0, 8);
  CHECK(mixed_norm(ScalarField::zeros(g), MixedExponents::from_values({1, 3, kInf})) == 0.0);
}

TEST_CASE("separable indicator matches the iterated integral") {
  TensorGrid g({4.0, 4.0, 4.0}, {64, 32, 16});
  auto p = MixedExponents::from_values({3.0, 1.5, 7.0});
  // a_k are multiples of the spacing so the box is resolved exactly.
  const std::vector<double> a{1.25, 2.0, 3.0};
  auto f = ScalarField::sample(g, box({0, 0, 0}, a));
  double expect = 1.0;
  for (int k = 0; k < 3; ++k) expect *= std::pow(a[k], 1.0 / p[k].value());
  CHECK(mixed_norm(f, p) == doctest::Approx(expect).epsilon(1e-13));
  auto unit = ScalarField::sample(g, box({0, 0, 0}, {1, 1, 1}));
  CHECK(mixed_norm(unit, p) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("Gaussian product against the one-dimensional integrals") {
  for (std::size_t n = 1; n <= 3; ++n) {
    auto g = TensorGrid::cube(n, 6.0, 48);
    auto f = ScalarField::sample(g, gaussian());
    // int e^{-2 s^2} ds = sqrt(pi/2) and int e^{-s^2} ds = sqrt(pi).
    CHECK(plain_lp_norm(f, 2.0) == doctest::Approx(std::pow(kPi / 2, n / 4.0)).epsilon(1e-12));
    CHECK(plain_lp_norm(f, 1.0) == doctest::Approx(std::pow(kPi, n / 2.0)).epsilon(1e-12));
    CHECK(mixed_norm(f, MixedExponents::uniform(n, 2.0)) == plain_lp_norm(f, 2.0));
  }
}

TEST_CASE("mixed Gaussian norm factorizes over axes") {
  // ||prod_k e^{-x_k^2}||_p = prod_k (sqrt(pi/p_k))^{1/p_k}, with 1 for p_k = inf.
  auto g = TensorGrid::cube(3, 6.0, 48);
  auto f = ScalarField::sample(g, gaussian());
  auto p = MixedExponents::from_values({1.5, kInf, 4.0});
  double expect = 1.0;
  for (double pk : {1.5, 4.0}) expect *= std::pow(std::sqrt(kPi / pk), 1.0 / pk);
  CHECK(mixed_norm(f, p) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("axis order matters for non-separable data") {
  auto g = TensorGrid::cube(2, 4.0, 32);
  auto f = ScalarField::sample(g, [](std::span<const double> x) {
    return std::exp(-x[0] * x[0] - 3 * x[1] * x[1] - x[0] * x[1]);
  });
  auto a = mixed_norm(f, MixedExponents::from_values({1.0, 4.0}));
  auto b = mixed_norm(f, MixedExponents::from_values({4.0, 1.0}));
  CHECK(std::abs(a - b) > 1e-3);
}

TEST_CASE("norm invariants on random fields") {
  SplitMix64 rng(11);
  auto g = TensorGrid::cube(2, 1.0, 16);
  for (int trial = 0; trial < 50; ++trial) {
    auto f = random_field(g, rng);
    auto h = random_field(g, rng);
    std::vector<double> pv{rng.uniform(1, 6), rng.uniform() < 0.2 ? kInf : rng.uniform(1, 6)};
    auto p = MixedExponents::from_values(pv);
    const double c = rng.uniform(-100, 100);
    const double nf = mixed_norm(f, p);
    CHECK(mixed_norm(c * f, p) == doctest::Approx(std::abs(c) * nf).epsilon(1e-13));
    CHECK(mixed_norm(f + h, p) <= nf + mixed_norm(h, p) + 1e-12);
  }
}

TEST_CASE("infinite exponent never decreases the norm inside a unit box") {
  // On a set of measure at most 1 per axis, an L_p average is below the max.
  SplitMix64 rng(5);
  TensorGrid g({1.0, 1.0, 1.0}, {16, 16, 16});
  auto support = ScalarField::sample(g, box({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}));
  for (int trial = 0; trial < 30; ++trial) {
    auto f = pointwise_product(random_field(g, rng), support);
    std::vector<double> pv{rng.uniform(1, 5), rng.uniform(1, 5), rng.uniform(1, 5)};
    const double base = mixed_norm(f, MixedExponents::from_values(pv));
    for (std::size_t k = 0; k < 3; ++k) {
      auto pk = pv;
      pk[k] = kInf;
      CHECK(mixed_norm(f, MixedExponents::from_values(pk)) >= base * (1 - 1e-13));
    }
  }
}

TEST_CASE("tail fractions flag mass at the edge") {
  auto g = TensorGrid::cube(2, 1.0, 16);
  auto inner = ScalarField::sample(g, box({-0.5, -0.5}, {0.5, 0.5}));
  auto r = mixed_norm_report(inner, MixedExponents::uniform(2, 2.0));
  CHECK(r.tail_fraction[0] == 0.0);
  CHECK(r.tail_fraction[1] == 0.0);
  auto edge = ScalarField::sample(g, [](std::span<const double> x) { return x[0] > 0.8 ? 1.0 : 0.0; });
  auto t = tail_fractions(edge);
  CHECK(t[0] == doctest::Approx(1.0));
}

TEST_CASE("dimension mismatch is reported") {
  auto g = TensorGrid::cube(2, 1.0, 8);
  CHECK_THROWS_AS(mixed_norm(ScalarField::zeros(g), MixedExponents::uniform(3, 2.0)), Error);
  CHECK_THROWS_AS(plain_lp_norm(ScalarField::zeros(g), 0.5), Error);
}

TEST_CASE("scaling ratio for analytic data") {
  auto g3 = TensorGrid::cube(3, 8.0, 128);
  auto p3 = MixedExponents::uniform(3, 3.0);
  CHECK(scaling_ratio(gaussian(), g3, 1.0, p3) == 1.0);
  CHECK(scaling_ratio(gaussian(), g3, 2.0, p3) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(scaling_ratio(gaussian(), g3, 0.5, p3) == doctest::Approx(1.0).epsilon(1e-10));

  auto g2 = TensorGrid::cube(2, 8.0, 256);
  auto p2 = MixedExponents::from_values({2.0, 4.0});
  CHECK(scaling_ratio(gaussian(), g2, 2.0, p2) ==
        doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-10));
  // An anisotropic profile still scales by the same power.
  auto aniso = [](std::span<const double> x) {
    return std::exp(-x[0] * x[0] - 4 * std::pow(x[1], 4));
  };
  CHECK(scaling_ratio(aniso, g2, 0.5, p2) ==
        doctest::Approx(std::pow(0.5, 0.25)).epsilon(1e-8));
}

TEST_CASE("scaling ratio for sampled data uses interpolation") {
  auto g = TensorGrid::cube(2, 12.0, 256);
  auto f = ScalarField::sample(g, gaussian());
  auto p = MixedExponents::from_values({2.0, 4.0});
  CHECK(scaling_ratio(f, 2.0, p) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-3));
  CHECK(scaling_ratio(f, 0.5, p) == doctest::Approx(std::pow(0.5, 0.25)).epsilon(1e-3));
}

TEST_CASE("scaling ratio refuses when the support escapes") {
  auto g = TensorGrid::cube(1, 3.0, 64);
  auto wide = ScalarField::sample(g, gaussian(0.5));
  CHECK_THROWS_AS(scaling_ratio(wide, 0.5, MixedExponents::uniform(1, 2.0)), Error);
  CHECK_THROWS_AS(scaling_ratio(gaussian(0.5), g, 0.5, MixedExponents::uniform(1, 2.0)), Error);
  CHECK_THROWS_AS(scaling_ratio(wide, -1.0, MixedExponents::uniform(1, 2.0)), Error);
}

TEST_CASE("interpolation is exact for multilinear functions") {
  auto g = TensorGrid::cube(2, 2.0, 16);
  auto f = ScalarField::sample(g, [](std::span<const double> x) { return 1 + x[0] - 2 * x[1] + x[0] * x[1]; });
  std::vector<double> x{0.31, -1.07};
  CHECK(interpolate(f, x) == doctest::Approx(1 + 0.31 + 2.14 - 0.31 * 1.07).epsilon(1e-13));
  std::vector<double> out{2.5, 0.0};
  CHECK(interpolate(f, out) == 0.0);
}

TEST_CASE("convolution with a unit cell reproduces the other factor") {
  auto g = TensorGrid::cube(2, 4.0, 32);
  std::vector<double> d(g.size(), 0.0);
  d[16 + 32 * 16] = 1.0 / g.cell_volume();
  ScalarField delta(g, d);
  auto f = ScalarField::sample(g, gaussian(2.0));
  auto c = convolve(delta, f);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(c[i] - f[i]) <= 1e-10);
}

TEST_CASE("Gaussian convolution closed form") {
  // e^{-s^2/2} * e^{-s^2/2} = sqrt(pi) e^{-s^2/4} per axis.
  auto g = TensorGrid::cube(2, 12.0, 96);
  auto f = ScalarField::sample(g, gaussian(0.5));
  auto c = convolve(f, f);
  auto exact = ScalarField::sample(g, [](std::span<const double> x) {
    return kPi * std::exp(-(x[0] * x[0] + x[1] * x[1]) / 4);
  });
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(c[i] - exact[i]));
  CHECK(err < 1e-10);
}

TEST_CASE("box convolved with box is a hat") {
  auto g = TensorGrid::cube(1, 2.0, 64);
  auto b = ScalarField::sample(g, box({-0.5}, {0.5}));
  auto c = convolve(b, b);
  for (std::size_t i = 0; i < g.size(); ++i) {
    // The sampled half-open box is centred at -h/2, so the hat sits at -h.
    const double x = g.coordinate(0, i) + g.spacing(0);
    CHECK(c[i] == doctest::Approx(std::max(0.0, 1 - std::abs(x))).epsilon(1e-12));
  }
}

TEST_CASE("convolution refuses heavy tails") {
  auto g = TensorGrid::cube(1, 2.0, 32);
  auto wide = ScalarField::sample(g, gaussian(0.1));
  auto err = ErrorCode{};
  try {
    convolve(wide, wide);
  } catch (const Error& e) {
    err = e.code();
  }
  CHECK(err == ErrorCode::domain_escape);
}

TEST_CASE("Young ratio edge cases") {
  auto g = TensorGrid::cube(2, 4.0, 32);
  auto f = ScalarField::sample(g, box({0, 0}, {1, 1}));
  auto one = MixedExponents::uniform(2, 1.0);
  CHECK(young_ratio(ScalarField::zeros(g), f, one, one, one) == 0.0);
  // L1 * L1 -> L1 is an equality for non-negative data.
  CHECK(young_ratio(f, f, one, one, one) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(young_ratio(f, f, MixedExponents::uniform(2, 2.0), one, one), Error);
}

TEST_CASE("Young ratio with mixed finite exponents on Gaussians") {
  auto g = TensorGrid::cube(3, 8.0, 32);
  auto q = MixedExponents::from_values({2.0, 3.0, 6.0});
  auto r = MixedExponents::from_values({2.0, 1.5, 1.2});
  auto p = MixedExponents::from_values({kInf, kInf, kInf});
  auto f = ScalarField::sample(g, gaussian(1.0));
  auto h = ScalarField::sample(g, [](std::span<const double> x) {
    return std::exp(-0.7 * x[0] * x[0] - 1.3 * (x[1] - 0.5) * (x[1] - 0.5) - x[2] * x[2]);
  });
  CHECK(young_ratio(f, h, p, q, r) <= 1 + 1e-3);
  auto p2 = MixedExponents::from_values({3.0, 2.0, 1.5});
  auto q2 = MixedExponents::from_values({1.5, 2.0, 1.2});
  auto r2 = MixedExponents::from_values({1.5, 1.0, 1.0 / (1 / 1.5 + 1 - 1 / 1.2)});
  CHECK(young_ratio(f, h, p2, q2, r2) <= 1 + 1e-3);
}

TEST_CASE("Young inequality on random triples") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.below(3);
    auto g = TensorGrid::cube(n, 4.0, n == 3 ? 16 : 32);
    auto t = random_young_triple(n, rng);
    auto f = random_bump(g, rng);
    auto h = random_bump(g, rng);
    CHECK(young_ratio(f, h, t.p, t.q, t.r) <= 1 + 5e-3);
  }
}

TEST_CASE("Hoelder ratio") {
  auto g = TensorGrid::cube(2, 8.0, 64);
  auto p = MixedExponents::uniform(2, 4.0);
  const std::vector<double> one{1.0, 1.0};
  auto f = ScalarField::sample(g, gaussian(1.0));
  CHECK(mixed_holder_ratio(f, f, p, one, one) <= 1 + 1e-12);
  auto shifted = ScalarField::sample(g, [](std::span<const double> x) {
    return std::exp(-(x[0] - 1) * (x[0] - 1) - (x[1] + 0.5) * (x[1] + 0.5));
  });
  CHECK(mixed_holder_ratio(f, shifted, p, one, one) <= 1 + 1e-3);
  auto unit = ScalarField::sample(g, box({0, 0}, {1, 1}));
  const std::vector<double> a{0.3, 0.9}, b{0.5, 0.2};
  CHECK(mixed_holder_ratio(unit, unit, p, a, b) == doctest::Approx(1.0).epsilon(1e-9));
  const std::vector<double> bad{1.5, 0.5};
  CHECK_THROWS_AS(mixed_holder_ratio(f, f, p, bad, one), Error);
}

TEST_CASE("Hoelder on random splits") {
  SplitMix64 rng(99);
  auto g = TensorGrid::cube(2, 1.0, 16);
  for (int trial = 0; trial < 50; ++trial) {
    auto f = random_field(g, rng);
    auto h = random_field(g, rng);
    auto p = MixedExponents::from_values({rng.uniform(2, 8), rng.uniform(2, 8)});
    std::vector<double> a{rng.uniform(0.1, 1), rng.uniform(0.1, 1)};
    std::vector<double> b{rng.uniform(0.1, 1), rng.uniform(0.1, 1)};
    CHECK(mixed_holder_ratio(f, h, p, a, b) <= 1 + 1e-12);
  }
}
