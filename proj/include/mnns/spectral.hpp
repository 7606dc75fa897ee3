// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

// Fourier multipliers on periodic grids: Riesz transforms, the Leray
// projection, divergence, gradients, pressure recovery and the heat flow.
//
// Frequencies follow the DFT layout, integer kappa in [-m/2, m/2) scaled to
// xi = kappa pi / L. The unmatched Nyquist frequency -m/2 is treated as 0 by
// every odd or mixed multiplier so that real fields stay real.

#pragma once

#include <complex>
#include <vector>

#include "mnns/exponents.hpp"
#include "mnns/grid.hpp"

namespace mnns {

using Complex = std::complex<double>;

struct SpectralField {
  TensorGrid grid;
  /// One unnormalized DFT per component, same index layout as the samples.
  std::vector<std::vector<Complex>> coefficients;

  std::size_t components() const { return coefficients.size(); }
};

SpectralField to_spectral(const ScalarField& f);
SpectralField to_spectral(const VectorField& v);

/// Inverse transform keeping the real part. The largest discarded imaginary
/// part, relative to the largest real sample, goes to *imag_residue.
VectorField to_physical(const SpectralField& s, double* imag_residue = nullptr);

/// xi for DFT index i on axis k.
double wavenumber(const TensorGrid& grid, std::size_t axis, std::size_t index);

/// Multiplier -i xi_j / |xi|; the mean is removed.
ScalarField riesz_transform(const ScalarField& f, std::size_t axis);

/// Multiplier delta_jk - xi_j xi_k / |xi|^2; constants pass through.
VectorField leray_project(const VectorField& v);

ScalarField spectral_divergence(const VectorField& v);
ScalarField spectral_derivative(const ScalarField& f, std::size_t axis);
VectorField spectral_gradient(const ScalarField& f);

/// P = sum_ij R_i R_j (u_i u_j), mean zero.
ScalarField pressure_from_velocity(const VectorField& u);

/// Independent route to the same pressure: differentiates the products
/// u_i u_j twice in physical space and inverts -Delta.
ScalarField pressure_poisson_solve(const VectorField& u);

/// e^{t Delta} with the exact multiplier e^{-t |xi|^2}.
ScalarField periodic_heat(const ScalarField& f, double t);
VectorField periodic_heat(const VectorField& v, double t);

/// max_j max_f ||R_j f||_p / ||f||_p over the nonzero fields of the set.
/// Exponents must lie in (1, inf).
double riesz_boundedness_probe(const std::vector<ScalarField>& test_set, const MixedExponents& p);

/// max_v ||P v||_p / ||v||_p, vector norms taken as the max over components.
double leray_boundedness_probe(const std::vector<VectorField>& test_set, const MixedExponents& p);

}  // namespace mnns
