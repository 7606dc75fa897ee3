// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "mnns/exponents.hpp"
#include "mnns/grid.hpp"

namespace mnns {

/// A norm value plus the fraction of |f| mass sitting in the two outermost
/// cells at either end of each axis. Large fractions mean the truncated box
/// is cutting off a visible part of the function.
struct NormReport {
  double value = 0.0;
  std::vector<double> tail_fraction;
};

/// Iterated rectangle-rule norm, axis 1 innermost. An infinite exponent turns
/// its stage into a max.
double mixed_norm(const ScalarField& f, const MixedExponents& p);
NormReport mixed_norm_report(const ScalarField& f, const MixedExponents& p);

/// Max over components.
double mixed_norm(const VectorField& v, const MixedExponents& p);

/// Same code path as mixed_norm with every exponent equal to p.
double plain_lp_norm(const ScalarField& f, double p);

/// Per-axis fraction of sum |f| carried by the first two and last two cells.
std::vector<double> tail_fractions(const ScalarField& f);

/// ||lambda f(lambda .)||_p / ||f||_p with f re-evaluated exactly.
double scaling_ratio(const PointFunction& f, const TensorGrid& grid, double lambda,
                     const MixedExponents& p);

/// Same ratio for sampled data; f(lambda x) comes from multilinear
/// interpolation and is zero outside the box.
double scaling_ratio(const ScalarField& f, double lambda, const MixedExponents& p);

/// Multilinear interpolation of a sampled field; zero outside the sampled box
/// (or wrapped, on a periodic grid).
double interpolate(const ScalarField& f, std::span<const double> x);

/// Tail fraction above which convolve refuses to run.
inline constexpr double kDefaultTailThreshold = 1e-6;

/// Zero-padded linear convolution scaled by the cell volume, so it
/// approximates the integral of f(y) g(x - y) dy on the same grid.
ScalarField convolve(const ScalarField& f, const ScalarField& g,
                     double tail_threshold = kDefaultTailThreshold);

/// ||f * g||_p / (||f||_q ||g||_r); requires 1/p_k + 1 = 1/q_k + 1/r_k.
/// Returns 0 when the numerator vanishes.
double young_ratio(const ScalarField& f, const ScalarField& g, const MixedExponents& p,
                   const MixedExponents& q, const MixedExponents& r,
                   double tail_threshold = kDefaultTailThreshold);

/// Checks the Young exponent identity; throws hypothesis naming the axis.
void validate_young_triple(const MixedExponents& p, const MixedExponents& q,
                           const MixedExponents& r);

/// ||fg||_{p/(alpha+beta)} / (||f||_{p/alpha} ||g||_{p/beta}).
double mixed_holder_ratio(const ScalarField& f, const ScalarField& g, const MixedExponents& p,
                          std::span<const double> alpha, std::span<const double> beta);

}  // namespace mnns
