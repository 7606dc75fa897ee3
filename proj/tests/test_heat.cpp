// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "mnns/error.hpp"
#include "mnns/heat.hpp"
#include "mnns/mixed_norm.hpp"
#include "mnns/rng.hpp"
#include "mnns/samples.hpp"

using namespace mnns;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// Fine rectangle-rule L_r norm of a 1-D function on [-R, R].
double quad_norm(const std::function<double(double)>& f, double r, double R) {
  const int N = 400000;
  const double h = 2 * R / N;
  double s = 0.0, m = 0.0;
  for (int i = 0; i <= N; ++i) {
    const double v = std::abs(f(-R + i * h));
    m = std::max(m, v);
    if (std::isfinite(r)) s += std::pow(v, r) * h;
  }
  return std::isfinite(r) ? std::pow(s, 1 / r) : m;
}

// exp(-|x|^2 / 4a) evolved to time t.
double evolved_gaussian(std::span<const double> x, double a, double t) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  return std::pow(a / (a + t), x.size() / 2.0) * std::exp(-r2 / (4 * (a + t)));
}

bool interior(const TensorGrid& g, std::span<const double> x, double margin) {
  for (std::size_t k = 0; k < g.dims(); ++k)
    if (std::abs(x[k]) > g.half_width(k) - margin) return false;
  return true;
}

double max_interior_error(const ScalarField& f, const PointFunction& exact, double margin) {
  const auto& g = f.grid();
  std::vector<double> x(g.dims());
  double err = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    g.position(i, x);
    if (interior(g, x, margin)) err = std::max(err, std::abs(f[i] - exact(x)));
  }
  return err;
}
}  // namespace

TEST_CASE("heat kernel point values") {
  CHECK(gaussian_kernel_eval(0.25, 0.0) == doctest::Approx(1 / std::sqrt(kPi)).epsilon(1e-15));
  CHECK(gaussian_kernel_eval(0.25, 0.0) == doctest::Approx(0.5641895835477563).epsilon(1e-15));
  for (double s : {0.1, 1.0, 3.7}) {
    CHECK(gaussian_kernel_eval(0.7, s) == gaussian_kernel_eval(0.7, -s));
    CHECK(gaussian_kernel_derivative_eval(0.7, s) == -gaussian_kernel_derivative_eval(0.7, -s));
  }
  double mass = 0.0;
  const double h = 0.01;
  for (int i = -3000; i <= 3000; ++i) mass += gaussian_kernel_eval(1.0, i * h) * h;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(gaussian_kernel_eval(0.0, 1.0), Error);
  CHECK_THROWS_AS(gaussian_kernel_eval(-1.0, 1.0), Error);
}

TEST_CASE("closed-form kernel norms against quadrature") {
  CHECK(kernel_1d_norm(3.3, Exponent(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(kernel_1d_norm(1.0, Exponent::infinity()) ==
        doctest::Approx(1 / std::sqrt(4 * kPi)).epsilon(1e-15));
  CHECK(kernel_1d_norm(1.0, Exponent(2.0)) ==
        doctest::Approx(std::pow(8 * kPi, -0.25)).epsilon(1e-10));
  for (double t : {0.1, 1.0, 4.0}) {
    for (double r : {1.0, 1.5, 2.0, 3.0, 7.0, kInf}) {
      const double R = 40 * std::sqrt(t);
      auto g = [t](double s) { return gaussian_kernel_eval(t, s); };
      auto dg = [t](double s) { return gaussian_kernel_derivative_eval(t, s); };
      CHECK(kernel_1d_norm(t, Exponent(r)) == doctest::Approx(quad_norm(g, r, R)).epsilon(1e-6));
      CHECK(kernel_derivative_1d_norm(t, Exponent(r)) ==
            doctest::Approx(quad_norm(dg, r, R)).epsilon(1e-6));
    }
  }
}

TEST_CASE("sampled kernel has unit mass and derivative has first moment -1") {
  const double h = 0.1;
  auto w = sampled_kernel(0.05, h, 1000);
  double mass = 0.0, moment = 0.0;
  for (double x : w) mass += x;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-15));
  auto dw = sampled_kernel_derivative(0.05, h, 1000);
  const auto D = static_cast<double>((dw.size() - 1) / 2);
  for (std::size_t i = 0; i < dw.size(); ++i) moment += (static_cast<double>(i) - D) * h * dw[i];
  CHECK(moment == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("heat flow of a Gaussian") {
  const double a = 0.5;
  for (std::size_t n = 1; n <= 3; ++n) {
    auto g = TensorGrid::cube(n, 8.0, n == 3 ? 48 : 128);
    auto u0 = ScalarField::sample(g, [a](auto x) { return evolved_gaussian(x, a, 0.0); });
    for (double t : {0.5, 1.3}) {
      auto u = heat_evolve(u0, t);
      CHECK(max_interior_error(u, [&](auto x) { return evolved_gaussian(x, a, t); }, 1.0) <= 1e-6);
    }
    auto same = heat_evolve(u0, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(same[i] == u0[i]);
  }
}

TEST_CASE("heat flow refuses under-resolved times and negative times") {
  auto g = TensorGrid::cube(1, 4.0, 32);  // h = 0.25
  auto u0 = ScalarField::sample(g, [](auto x) { return std::exp(-x[0] * x[0]); });
  CHECK_THROWS_AS(heat_evolve(u0, 0.06), Error);
  CHECK_NOTHROW(heat_evolve(u0, 0.0625));
  CHECK_THROWS_AS(heat_evolve(u0, -1.0), Error);
  CHECK_THROWS_AS(heat_evolve_derivative(u0, 0.0, 0), Error);
  CHECK_THROWS_AS(heat_evolve_derivative(u0, 1.0, 1), Error);
}

TEST_CASE("positivity, mass conservation and the semigroup law") {
  // Bumps drawn on [-4, 4]^2 and placed on [-12, 12]^2, so nothing reaches the edge.
  SplitMix64 rng(8);
  auto small = TensorGrid::cube(2, 4.0, 32);
  auto g = TensorGrid::cube(2, 12.0, 96);
  for (int trial = 0; trial < 5; ++trial) {
    auto b = random_bump(small, rng);
    auto u0 = ScalarField::sample(g, [&](auto x) { return interpolate(b, x); });
    auto pos = ScalarField::sample(g, [&](auto x) { return std::abs(interpolate(b, x)); });
    auto u = heat_evolve(pos, 0.8);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(u[i] >= -1e-12);
    CHECK(u.integral() == doctest::Approx(pos.integral()).epsilon(1e-8));

    auto two_steps = heat_evolve(heat_evolve(u0, 0.3), 0.5);
    auto one_step = heat_evolve(u0, 0.8);
    CHECK(max_interior_error(two_steps, [&](auto x) { return interpolate(one_step, x); }, 2.0) <=
          1e-6);
  }
}

TEST_CASE("axis-by-axis passes agree with the product kernel") {
  SplitMix64 rng(21);
  for (std::size_t n : {1u, 2u, 3u}) {
    auto g = TensorGrid::cube(n, 4.0, n == 3 ? 12 : 24);
    auto u0 = random_field(g, rng);
    auto a = heat_evolve(u0, 0.5);
    auto b = heat_evolve_product_kernel(u0, 0.5);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10);
  }
  auto gp = TensorGrid::cube(2, 2.0, 16, Boundary::periodic);
  auto u0 = random_field(gp, rng);
  auto a = heat_evolve(u0, 0.3);
  auto b = heat_evolve_product_kernel(u0, 0.3);
  for (std::size_t i = 0; i < gp.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10);
}

TEST_CASE("derivative of the heat flow") {
  const double a = 0.5, t = 0.7;
  auto g = TensorGrid::cube(2, 8.0, 128);
  auto u0 = ScalarField::sample(g, [a](auto x) { return evolved_gaussian(x, a, 0.0); });
  for (std::size_t j = 0; j < 2; ++j) {
    auto du = heat_evolve_derivative(u0, t, j);
    auto exact = [&](std::span<const double> x) {
      return -x[j] / (2 * (a + t)) * evolved_gaussian(x, a, t);
    };
    CHECK(max_interior_error(du, exact, 1.0) <= 1e-5);
    // The data is even in x_j, so the result is odd: its even part vanishes.
    double even = 0.0;
    std::vector<std::size_t> idx(2);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.unravel(i, idx);
      if (idx[j] == 0) continue;  // node -L has no mirror on the grid
      auto mirror = idx;
      mirror[j] = g.count(j) - idx[j];
      even = std::max(even, std::abs(du[i] + du[mirror[0] + g.count(0) * mirror[1]]));
    }
    CHECK(even <= 1e-9);
  }
  auto flat = ScalarField::sample(g, [](auto x) {
    return std::abs(x[0]) < 6 && std::abs(x[1]) < 6 ? 1.0 : 0.0;
  });
  // Four units from the jump at sqrt(t) ~ 0.22: the derivative is below e^{-80}.
  auto dflat = heat_evolve_derivative(flat, 0.05, 0);
  CHECK(max_interior_error(dflat, [](auto) { return 0.0; }, 6.0) <= 1e-12);
}

TEST_CASE("decay slope with equal exponents is flat") {
  auto g = TensorGrid::cube(2, 128.0, 256);
  auto p = MixedExponents::from_values({3.0, kInf});
  std::vector<double> times{4.0, 8.0, 16.0};
  auto plateau = extremal_decay_data(g, p, p, 4.0);
  auto fit = measure_decay(plateau, p, p, times);
  CHECK(fit.predicted_slope == 0.0);
  CHECK(std::abs(fit.fitted_slope) <= 0.02);
}

TEST_CASE("unit cell decays like the heat kernel peak") {
  auto g = TensorGrid::cube(2, 16.0, 128);
  std::vector<double> v(g.size(), 0.0);
  v[64 + 128 * 64] = 1.0 / g.cell_volume();
  ScalarField delta(g, v);
  // Brute-force oracle: sup of the evolved unit cell is (4 pi t)^{-1}.
  for (double t : {0.5, 1.0, 4.0})
    CHECK(heat_evolve(delta, t).max_abs() == doctest::Approx(1 / (4 * kPi * t)).epsilon(1e-6));
  auto fit = measure_decay(delta, MixedExponents::uniform(2, kInf), MixedExponents::uniform(2, 1.0),
                           {0.5, 1.0, 2.0, 4.0});
  CHECK(fit.predicted_slope == -1.0);
  CHECK(fit.fitted_slope == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("decay slope for q = (2,2), p = (4,4) with extremal data") {
  // A Gaussian in L_2 decays like t^{-3/4} in L_4 (it is also in L_1); the
  // t^{-1/4} rate needs data that is in L_2 and nothing better.
  auto g = TensorGrid::cube(2, 128.0, 256);
  auto p = MixedExponents::uniform(2, 4.0);
  auto q = MixedExponents::uniform(2, 2.0);
  const double h = g.spacing(0);
  std::vector<double> times;
  for (int i = 0; i < 6; ++i) times.push_back(std::pow(2 * h * std::pow(2.0, i / 5.0), 2));
  auto data = extremal_decay_data(g, p, q, std::sqrt(times.back()));
  auto fit = measure_decay(data, p, q, times);
  CHECK(fit.predicted_slope == doctest::Approx(-0.25));
  CHECK(std::abs(fit.fitted_slope - fit.predicted_slope) <= 0.05);
  auto gauss = ScalarField::sample(g, [](auto x) { return std::exp(-(x[0] * x[0] + x[1] * x[1]) / 4); });
  auto late = measure_decay(gauss, p, q, {100.0, 200.0, 400.0});
  CHECK(late.fitted_slope < -0.6);
}

TEST_CASE("gradient decay with extremal data on each axis") {
  auto g = TensorGrid::cube(2, 128.0, 256);
  const double h = g.spacing(0);
  std::vector<double> times;
  for (int i = 0; i < 6; ++i) times.push_back(std::pow(2 * h * std::pow(2.0, i / 5.0), 2));
  const double tau = std::sqrt(times.back());
  struct Case {
    std::vector<double> p, q;
  };
  for (const auto& c : {Case{{6, kInf}, {3, 1}}, Case{{kInf, 4}, {kInf, 4}}, Case{{3, 8}, {1.5, 2}}}) {
    auto p = MixedExponents::from_values(c.p);
    auto q = MixedExponents::from_values(c.q);
    for (std::size_t j = 0; j < 2; ++j) {
      DecayOptions opt;
      opt.with_derivative = true;
      opt.derivative_axis = j;
      auto fit = measure_decay(extremal_decay_data(g, p, q, tau, j), p, q, times, opt);
      CHECK(std::abs(fit.fitted_slope - fit.predicted_slope) <= 0.05);
    }
    auto fit = measure_decay(extremal_decay_data(g, p, q, tau), p, q, times);
    CHECK(std::abs(fit.fitted_slope - fit.predicted_slope) <= 0.05);
  }
}

TEST_CASE("norm-level decay bound with the product of kernel constants") {
  // ||e^{t Delta} u0||_p <= prod_k ||g_t||_{r_k} ||u0||_q with 1/r = 1 + 1/p - 1/q.
  SplitMix64 rng(4);
  auto g = TensorGrid::cube(2, 16.0, 128);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<double> pv, qv;
    double N = 1.0;
    const double t = rng.uniform(0.3, 3.0);
    for (int k = 0; k < 2; ++k) {
      const double qk = rng.uniform(1, 4);
      const double pk = rng.uniform() < 0.3 ? kInf : qk * rng.uniform(1, 4);
      qv.push_back(qk);
      pv.push_back(pk);
      const double rinv = 1 + (std::isfinite(pk) ? 1 / pk : 0) - 1 / qk;
      N *= kernel_1d_norm(t, Exponent(1 / rinv));
    }
    auto u0 = random_bump(TensorGrid::cube(2, 16.0, 128), rng);
    auto p = MixedExponents::from_values(pv);
    auto q = MixedExponents::from_values(qv);
    CHECK(mixed_norm(heat_evolve(u0, t), p) <= (1 + 1e-6) * N * mixed_norm(u0, q));
  }
  (void)g;
}

TEST_CASE("decay fit drops times that reach the boundary") {
  auto g = TensorGrid::cube(1, 8.0, 64);
  auto u0 = ScalarField::sample(g, [](auto x) { return std::exp(-x[0] * x[0]); });
  auto p = MixedExponents::uniform(1, 2.0);
  auto q = MixedExponents::uniform(1, 1.0);
  auto fit = measure_decay(u0, p, q, {0.1, 0.2, 0.4, 40.0});
  REQUIRE(fit.excluded_times.size() == 1);
  CHECK(fit.excluded_times[0] == 40.0);
  CHECK(fit.times.size() == 3);
  auto err = ErrorCode{};
  try {
    measure_decay(u0, p, q, {30.0, 40.0});
  } catch (const Error& e) {
    err = e.code();
  }
  CHECK(err == ErrorCode::domain_escape);
  CHECK_THROWS_AS(measure_decay(u0, q, p, {0.1, 0.2}), Error);
  auto j = nlohmann::json::parse(fit.to_json());
  CHECK(j["times"].size() == 3);
  CHECK(j.contains("fitted_slope"));
  CHECK(j.contains("predicted_slope"));
  CHECK(j.contains("max_residual"));
}

TEST_CASE("continuity at t = 0") {
  auto g = TensorGrid::cube(2, 8.0, 512);
  auto p = MixedExponents::from_values({2.0, 3.0});
  std::vector<double> times;
  for (int k = 1; k <= 10; ++k) times.push_back(std::ldexp(1.0, -k));
  auto u0 = ScalarField::sample(g, [](auto x) { return std::exp(-(x[0] * x[0] + x[1] * x[1]) / 8); });
  auto d = continuity_at_zero(u0, p, times);
  CHECK(d.back() <= 1e-3);
  for (std::size_t i = 1; i < d.size(); ++i) CHECK(d[i] < d[i - 1]);
  // Closed form: the evolved Gaussian minus the data.
  auto exact = ScalarField::sample(g, [&](auto x) {
    return evolved_gaussian(x, 2.0, times.back()) - evolved_gaussian(x, 2.0, 0.0);
  });
  CHECK(d.back() == doctest::Approx(mixed_norm(exact, p)).epsilon(1e-4));

  auto zero = continuity_at_zero(ScalarField::zeros(g), p, times);
  for (double v : zero) CHECK(v == 0.0);

  auto ind = ScalarField::sample(g, [](auto x) { return std::abs(x[0]) < 1 && std::abs(x[1]) < 1 ? 1.0 : 0.0; });
  auto r = continuity_at_zero(ind, p, times);
  for (std::size_t i = r.size() - 3; i < r.size(); ++i) CHECK(r[i] < r[i - 1]);
  CHECK(r.back() > d.back());

  CHECK_THROWS_AS(continuity_at_zero(u0, MixedExponents::from_values({2.0, kInf}), times), Error);
}
