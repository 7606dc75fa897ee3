// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnns/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mnns/error.hpp"
#include "mnns/mixed_norm.hpp"
#include "spectral_detail.hpp"

namespace mnns {
namespace detail {

ModeTable::ModeTable(const TensorGrid& grid)
    : dims_(grid.dims()), size_(grid.size()), shape_(grid.counts()) {
  xi_.resize(dims_ * size_);
  eff_.resize(dims_ * size_);
  xi2_.assign(size_, 0.0);
  xi2_eff_.assign(size_, 0.0);
  for (std::size_t k = 0; k < dims_; ++k) {
    const std::size_t m = shape_[k], stride = grid.stride(k);
    for (std::size_t idx = 0; idx < size_; ++idx) {
      const std::size_t i = (idx / stride) % m;
      const double x = wavenumber(grid, k, i);
      const double e = i == m / 2 ? 0.0 : x;
      xi_[k * size_ + idx] = x;
      eff_[k * size_ + idx] = e;
      xi2_[idx] += x * x;
      xi2_eff_[idx] += e * e;
    }
  }
}

std::vector<Complex> forward(const TensorGrid& grid, std::span<const double> samples) {
  std::vector<Complex> c(samples.begin(), samples.end());
  fft_c2c(grid.counts(), c, -1);
  return c;
}

double inverse(const TensorGrid& grid, std::vector<Complex> coeffs, std::span<double> out) {
  fft_c2c(grid.counts(), coeffs, +1);
  const double scale = 1.0 / static_cast<double>(grid.size());
  double imag = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = coeffs[i].real() * scale;
    imag = std::max(imag, std::abs(coeffs[i].imag()) * scale);
  }
  return imag;
}

ScalarField inverse_field(const TensorGrid& grid, std::vector<Complex> coeffs) {
  std::vector<double> out(grid.size());
  inverse(grid, std::move(coeffs), out);
  return ScalarField(grid, std::move(out));
}

void leray_in_place(const ModeTable& modes, std::vector<std::vector<Complex>>& comps) {
  const std::size_t n = comps.size();
  for (std::size_t idx = 0; idx < modes.size(); ++idx) {
    const double k2 = modes.xi2_eff(idx);
    if (k2 == 0.0) continue;
    Complex dot = 0.0;
    for (std::size_t j = 0; j < n; ++j) dot += modes.xi_eff(j, idx) * comps[j][idx];
    dot /= k2;
    for (std::size_t j = 0; j < n; ++j) comps[j][idx] -= modes.xi_eff(j, idx) * dot;
  }
}

void require_periodic(const TensorGrid& grid, const char* op) {
  require(grid.periodic(), ErrorCode::invalid_argument,
          std::string(op) + " needs a periodic grid");
}

}  // namespace detail

namespace {

using detail::ModeTable;

void require_axis(const TensorGrid& grid, std::size_t axis, const char* op) {
  require(axis < grid.dims(), ErrorCode::invalid_argument,
          std::string(op) + ": axis " + std::to_string(axis + 1) + " out of range for n = " +
              std::to_string(grid.dims()));
}

void require_square(const VectorField& v, const char* op) {
  require(v.components() == v.grid().dims(), ErrorCode::dimension_mismatch,
          std::string(op) + ": expected " + std::to_string(v.grid().dims()) +
              " components, got " + std::to_string(v.components()));
}

// Applies i xi_eff_axis to a spectrum.
std::vector<Complex> derivative_coeffs(const ModeTable& modes, std::vector<Complex> c,
                                       std::size_t axis) {
  for (std::size_t idx = 0; idx < c.size(); ++idx)
    c[idx] *= Complex(0.0, modes.xi_eff(axis, idx));
  return c;
}

void require_probe_exponents(const MixedExponents& p) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& e = p[k];
    require(!e.is_infinite() && e.value() > 1.0, ErrorCode::hypothesis,
            "boundedness probe needs exponents in (1, inf); axis " + std::to_string(k + 1) +
                " has " + e.to_string());
  }
}

}  // namespace

double wavenumber(const TensorGrid& grid, std::size_t axis, std::size_t index) {
  const auto m = static_cast<std::ptrdiff_t>(grid.count(axis));
  auto kappa = static_cast<std::ptrdiff_t>(index);
  if (kappa >= m / 2) kappa -= m;
  return static_cast<double>(kappa) * std::numbers::pi / grid.half_width(axis);
}

SpectralField to_spectral(const ScalarField& f) {
  return SpectralField{f.grid(), {detail::forward(f.grid(), f.samples())}};
}

SpectralField to_spectral(const VectorField& v) {
  SpectralField s{v.grid(), {}};
  for (const auto& c : v) s.coefficients.push_back(detail::forward(v.grid(), c.samples()));
  return s;
}

VectorField to_physical(const SpectralField& s, double* imag_residue) {
  std::vector<ScalarField> comps;
  double imag = 0.0, real = 0.0;
  for (const auto& c : s.coefficients) {
    std::vector<double> out(s.grid.size());
    imag = std::max(imag, detail::inverse(s.grid, c, out));
    for (double x : out) real = std::max(real, std::abs(x));
    comps.emplace_back(s.grid, std::move(out));
  }
  if (imag_residue) *imag_residue = real > 0.0 ? imag / real : imag;
  return VectorField(std::move(comps));
}

ScalarField riesz_transform(const ScalarField& f, std::size_t axis) {
  detail::require_periodic(f.grid(), "riesz_transform");
  require_axis(f.grid(), axis, "riesz_transform");
  ModeTable modes(f.grid());
  auto c = detail::forward(f.grid(), f.samples());
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    const double k2 = modes.xi2_eff(idx);
    c[idx] *= k2 == 0.0 ? Complex(0.0) : Complex(0.0, -modes.xi_eff(axis, idx) / std::sqrt(k2));
  }
  return detail::inverse_field(f.grid(), std::move(c));
}

VectorField leray_project(const VectorField& v) {
  detail::require_periodic(v.grid(), "leray_project");
  require_square(v, "leray_project");
  ModeTable modes(v.grid());
  auto s = to_spectral(v);
  detail::leray_in_place(modes, s.coefficients);
  return to_physical(s);
}

ScalarField spectral_derivative(const ScalarField& f, std::size_t axis) {
  detail::require_periodic(f.grid(), "spectral_derivative");
  require_axis(f.grid(), axis, "spectral_derivative");
  ModeTable modes(f.grid());
  return detail::inverse_field(
      f.grid(), derivative_coeffs(modes, detail::forward(f.grid(), f.samples()), axis));
}

VectorField spectral_gradient(const ScalarField& f) {
  detail::require_periodic(f.grid(), "spectral_gradient");
  ModeTable modes(f.grid());
  const auto c = detail::forward(f.grid(), f.samples());
  std::vector<ScalarField> comps;
  for (std::size_t k = 0; k < f.grid().dims(); ++k)
    comps.push_back(detail::inverse_field(f.grid(), derivative_coeffs(modes, c, k)));
  return VectorField(std::move(comps));
}

ScalarField spectral_divergence(const VectorField& v) {
  detail::require_periodic(v.grid(), "spectral_divergence");
  require_square(v, "spectral_divergence");
  ModeTable modes(v.grid());
  std::vector<Complex> sum(v.grid().size(), 0.0);
  for (std::size_t j = 0; j < v.components(); ++j) {
    const auto c = detail::forward(v.grid(), v[j].samples());
    for (std::size_t idx = 0; idx < sum.size(); ++idx)
      sum[idx] += Complex(0.0, modes.xi_eff(j, idx)) * c[idx];
  }
  return detail::inverse_field(v.grid(), std::move(sum));
}

ScalarField pressure_from_velocity(const VectorField& u) {
  detail::require_periodic(u.grid(), "pressure_from_velocity");
  require_square(u, "pressure_from_velocity");
  const auto& g = u.grid();
  const std::size_t n = u.components();
  ModeTable modes(g);
  std::vector<Complex> p(g.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto c = detail::forward(g, pointwise_product(u[i], u[j]).samples());
      const double sym = i == j ? 1.0 : 2.0;
      for (std::size_t idx = 0; idx < p.size(); ++idx) {
        const double k2 = modes.xi2_eff(idx);
        if (k2 == 0.0) continue;
        // R_i R_j has symbol (-i xi_i / |xi|)(-i xi_j / |xi|) = -xi_i xi_j / |xi|^2.
        p[idx] -= sym * modes.xi_eff(i, idx) * modes.xi_eff(j, idx) / k2 * c[idx];
      }
    }
  }
  p[0] = 0.0;
  return detail::inverse_field(g, std::move(p));
}

ScalarField pressure_poisson_solve(const VectorField& u) {
  detail::require_periodic(u.grid(), "pressure_poisson_solve");
  require_square(u, "pressure_poisson_solve");
  const auto& g = u.grid();
  const std::size_t n = u.components();
  // Source S = sum_ij d_i d_j (u_i u_j), built from physical-space derivatives.
  auto source = ScalarField::zeros(g);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      source = source + spectral_derivative(spectral_derivative(pointwise_product(u[i], u[j]), j), i);
  // -Delta P = S.
  ModeTable modes(g);
  auto c = detail::forward(g, source.samples());
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    const double k2 = modes.xi2_eff(idx);
    c[idx] = k2 == 0.0 ? Complex(0.0) : c[idx] / k2;
  }
  return detail::inverse_field(g, std::move(c));
}

ScalarField periodic_heat(const ScalarField& f, double t) {
  detail::require_periodic(f.grid(), "periodic_heat");
  require(t >= 0.0, ErrorCode::invalid_argument, "periodic_heat: negative time");
  ModeTable modes(f.grid());
  auto c = detail::forward(f.grid(), f.samples());
  for (std::size_t idx = 0; idx < c.size(); ++idx) c[idx] *= std::exp(-t * modes.xi2(idx));
  return detail::inverse_field(f.grid(), std::move(c));
}

VectorField periodic_heat(const VectorField& v, double t) {
  std::vector<ScalarField> comps;
  for (const auto& c : v) comps.push_back(periodic_heat(c, t));
  return VectorField(std::move(comps));
}

double riesz_boundedness_probe(const std::vector<ScalarField>& test_set, const MixedExponents& p) {
  require_probe_exponents(p);
  double worst = 0.0;
  for (const auto& f : test_set) {
    require(p.size() == f.grid().dims(), ErrorCode::dimension_mismatch,
            "riesz_boundedness_probe: exponent count differs from grid dimension");
    const double base = mixed_norm(f, p);
    if (base == 0.0) continue;
    for (std::size_t j = 0; j < f.grid().dims(); ++j)
      worst = std::max(worst, mixed_norm(riesz_transform(f, j), p) / base);
  }
  return worst;
}

double leray_boundedness_probe(const std::vector<VectorField>& test_set, const MixedExponents& p) {
  require_probe_exponents(p);
  double worst = 0.0;
  for (const auto& v : test_set) {
    require(p.size() == v.grid().dims(), ErrorCode::dimension_mismatch,
            "leray_boundedness_probe: exponent count differs from grid dimension");
    const double base = mixed_norm(v, p);
    if (base == 0.0) continue;
    worst = std::max(worst, mixed_norm(leray_project(v), p) / base);
  }
  return worst;
}

}  // namespace mnns
