// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mnns/exponents.hpp"
#include "mnns/grid.hpp"

namespace mnns {

/// g_t(s) = (4 pi t)^{-1/2} exp(-s^2 / 4t).
double gaussian_kernel_eval(double t, double s);

/// h_t(s) = d/ds g_t(s) = -(4 pi t)^{-1/2} (s / 2t) exp(-s^2 / 4t).
double gaussian_kernel_derivative_eval(double t, double s);

/// ||g_t||_{L_r(R)} = N(r) t^{-(1 - 1/r)/2}, with
/// N(r) = (4 pi)^{-1/2} (4 pi / r)^{1/(2r)} and N(inf) = (4 pi)^{-1/2}.
double kernel_1d_norm(double t, const Exponent& r);

/// ||h_t||_{L_r(R)}. Finite r uses int |s|^r e^{-c s^2} = Gamma((r+1)/2) c^{-(r+1)/2};
/// r = inf takes the value at s = sqrt(2t).
double kernel_derivative_1d_norm(double t, const Exponent& r);

/// Sampled kernel weights on offsets d = -D..D of spacing h (index d + D).
/// Weights already include the factor h and sum to one. D is where the
/// Gaussian drops below 1e-18 of its peak, capped at max_offset.
std::vector<double> sampled_kernel(double t, double h, std::size_t max_offset);

/// Derivative weights on the same offsets, divided by the same discrete mass.
std::vector<double> sampled_kernel_derivative(double t, double h, std::size_t max_offset);

/// e^{t Delta} u0 by axis-by-axis direct convolution with the sampled
/// Gaussian. Truncated grids pad with zeros, periodic grids wrap. t = 0
/// returns u0; 0 < t < h_k^2 on any axis is refused as under-resolved.
ScalarField heat_evolve(const ScalarField& u0, double t);
VectorField heat_evolve(const VectorField& u0, double t);

/// d/dx_axis e^{t Delta} u0: the derivative kernel on `axis`, g_t elsewhere.
ScalarField heat_evolve_derivative(const ScalarField& u0, double t, std::size_t axis);
VectorField heat_evolve_derivative(const VectorField& u0, double t, std::size_t axis);

/// Same result as heat_evolve, computed with one n-D sum against the
/// product kernel. O(N D^n); only meant for cross-checking on small grids.
ScalarField heat_evolve_product_kernel(const ScalarField& u0, double t);

struct DecayFit {
  std::vector<double> times;
  std::vector<double> norms;
  double fitted_slope = 0.0;
  double predicted_slope = 0.0;
  double max_residual = 0.0;
  /// Requested times dropped because the evolved field reached the edge.
  std::vector<double> excluded_times;

  std::string to_json() const;
};

struct DecayOptions {
  bool with_derivative = false;
  /// Axis to differentiate; unset means the max over all axes.
  std::optional<std::size_t> derivative_axis;
  /// Mass fraction within two cells of the boundary that excludes a time.
  double edge_threshold = 1e-6;
};

/// Evolves u0 to each time, measures ||u(t)||_p (or the gradient norm) and
/// fits the log-log slope. The prediction is -sigma/2, or -(1 + sigma)/2
/// for the gradient, with sigma = sum_k (1/q_k - 1/p_k).
DecayFit measure_decay(const ScalarField& u0, const MixedExponents& p, const MixedExponents& q,
                       const std::vector<double>& times, const DecayOptions& options = {});

/// Separable data that saturates the decay rate on the window
/// sqrt(t) in [tau_min, tau_max]. Per axis: a unit cell of mass one when
/// q = 1, cell-averaged |s|^{-1/q} when 1 < q < p, a plateau when q = p or
/// when (1/q - 1/p)/2 <= 0.025 (there the plateau is the better datum on any
/// feasible box).
/// On the derivative axis the profile is a power law whenever q > 1 (odd
/// for q > 2) and a step for q = inf. Every profile is tapered to zero
/// before L - 8 tau_max.
ScalarField extremal_decay_data(const TensorGrid& grid, const MixedExponents& p,
                                const MixedExponents& q, double tau_max,
                                std::optional<std::size_t> derivative_axis = std::nullopt);

/// ||e^{t Delta} u0 - u0||_p for each t. Infinite exponents are rejected.
std::vector<double> continuity_at_zero(const ScalarField& u0, const MixedExponents& p,
                                       const std::vector<double>& times);

}  // namespace mnns
