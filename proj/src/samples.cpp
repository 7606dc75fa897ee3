// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnns/samples.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fft.hpp"
#include "mnns/error.hpp"

namespace mnns {
namespace {

double draw_reciprocal_endpoint(SplitMix64& rng, double lo, double hi) {
  const double u = rng.uniform();
  if (u < 0.08) return hi;
  if (u < 0.16) return lo;
  return rng.uniform(lo, hi);
}

Exponent from_reciprocal(double s) {
  return s <= 0.0 ? Exponent::infinity() : Exponent(1.0 / s);
}

}  // namespace

YoungTriple random_young_triple(std::size_t n, SplitMix64& rng) {
  std::vector<Exponent> p, q, r;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = draw_reciprocal_endpoint(rng, 0.05, 1.0);
    const double b = draw_reciprocal_endpoint(rng, 1.0 - a, 1.0);
    // Recompute from the stored exponents so the identity holds to rounding.
    const Exponent qk = from_reciprocal(a);
    const Exponent rk = from_reciprocal(b);
    const double c = qk.reciprocal() + rk.reciprocal() - 1.0;
    q.push_back(qk);
    r.push_back(rk);
    p.push_back(c <= 1e-14 ? Exponent::infinity() : Exponent(1.0 / c));
  }
  return {MixedExponents(p), MixedExponents(q), MixedExponents(r)};
}

ScalarField random_field(const TensorGrid& grid, SplitMix64& rng) {
  std::vector<double> v(grid.size());
  for (auto& x : v) x = rng.normal();
  return ScalarField(grid, std::move(v));
}

ScalarField random_bump(const TensorGrid& grid, SplitMix64& rng) {
  const std::size_t n = grid.dims();
  const int count = 1 + static_cast<int>(rng.below(3));
  struct Bump {
    std::vector<double> centre, radius;
    double amplitude;
  };
  std::vector<Bump> bumps;
  for (int b = 0; b < count; ++b) {
    Bump bump;
    for (std::size_t k = 0; k < n; ++k) {
      const double L = grid.half_width(k);
      const double rad = rng.uniform(0.15, 0.35) * L;
      const double room = 0.75 * L - rad;
      bump.radius.push_back(rad);
      bump.centre.push_back(rng.uniform(-room, room));
    }
    bump.amplitude = (rng.uniform() < 0.3 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0);
    bumps.push_back(std::move(bump));
  }
  return ScalarField::sample(grid, [&](std::span<const double> x) {
    double s = 0.0;
    for (const auto& b : bumps) {
      double r2 = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double d = (x[k] - b.centre[k]) / b.radius[k];
        r2 += d * d;
      }
      if (r2 < 1.0) s += b.amplitude * std::exp(1.0 - 1.0 / (1.0 - r2));
    }
    return s;
  });
}

ScalarField random_band_limited(const TensorGrid& grid, int kmax, SplitMix64& rng) {
  const std::size_t n = grid.dims();
  for (std::size_t k = 0; k < n; ++k)
    require(2 * static_cast<std::size_t>(kmax) < grid.count(k), ErrorCode::invalid_argument,
            "band limit must stay below the Nyquist wavenumber");
  std::vector<detail::Complex> c(grid.size());
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < c.size(); ++i) {
    grid.unravel(i, idx);
    bool inside = true;
    for (std::size_t k = 0; k < n; ++k) {
      const auto m = static_cast<long long>(grid.count(k));
      long long kappa = static_cast<long long>(idx[k]);
      if (kappa >= m / 2) kappa -= m;
      if (std::llabs(kappa) > kmax) inside = false;
    }
    // Draw for every mode so the stream does not depend on kmax.
    const double re = rng.normal(), im = rng.normal();
    if (inside) c[i] = {re, im};
  }
  detail::fft_c2c(grid.counts(), c, +1);
  std::vector<double> v(c.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(std::pow(2 * kmax + 1, n)));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c[i].real() * scale;
  return ScalarField(grid, std::move(v));
}

VectorField random_band_limited_vector(const TensorGrid& grid, int kmax, SplitMix64& rng) {
  std::vector<ScalarField> comps;
  for (std::size_t k = 0; k < grid.dims(); ++k)
    comps.push_back(random_band_limited(grid, kmax, rng));
  return VectorField(std::move(comps));
}

VectorField taylor_green_2d(const TensorGrid& grid) {
  require(grid.dims() == 2, ErrorCode::dimension_mismatch, "2-D Taylor-Green needs a 2-D grid");
  require(grid.half_width(0) == grid.half_width(1), ErrorCode::invalid_argument,
          "Taylor-Green needs equal half-widths to stay divergence free");
  const double a = std::numbers::pi / grid.half_width(0);
  const double b = std::numbers::pi / grid.half_width(1);
  return VectorField({
      ScalarField::sample(grid, [=](auto x) { return std::sin(a * x[0]) * std::cos(b * x[1]); }),
      ScalarField::sample(grid, [=](auto x) { return -std::cos(a * x[0]) * std::sin(b * x[1]); }),
  });
}

VectorField taylor_green_3d(const TensorGrid& grid) {
  require(grid.dims() == 3, ErrorCode::dimension_mismatch, "3-D Taylor-Green needs a 3-D grid");
  require(grid.half_width(0) == grid.half_width(1), ErrorCode::invalid_argument,
          "Taylor-Green needs equal half-widths on axes 1 and 2 to stay divergence free");
  const double a = std::numbers::pi / grid.half_width(0);
  const double b = std::numbers::pi / grid.half_width(1);
  const double c = std::numbers::pi / grid.half_width(2);
  return VectorField({
      ScalarField::sample(grid, [=](auto x) {
        return std::sin(a * x[0]) * std::cos(b * x[1]) * std::cos(c * x[2]);
      }),
      ScalarField::sample(grid, [=](auto x) {
        return -std::cos(a * x[0]) * std::sin(b * x[1]) * std::cos(c * x[2]);
      }),
      ScalarField::zeros(grid),
  });
}

}  // namespace mnns
