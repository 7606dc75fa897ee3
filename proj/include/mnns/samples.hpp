// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

// Seeded generators for test data: exponent triples, bumps, band-limited
// periodic fields and the Taylor-Green family.

#pragma once

#include "mnns/exponents.hpp"
#include "mnns/grid.hpp"
#include "mnns/rng.hpp"

namespace mnns {

struct YoungTriple {
  MixedExponents p, q, r;
};

/// Per axis: 1/q in [0.05, 1], 1/r in [1 - 1/q, 1], and p from the Young
/// identity. Endpoint values 1 and inf show up with small probability.
YoungTriple random_young_triple(std::size_t n, SplitMix64& rng);

/// Independent normal samples; no smoothness.
ScalarField random_field(const TensorGrid& grid, SplitMix64& rng);

/// Sum of one to three compactly supported C-infinity bumps with random
/// signs, anisotropic radii and centres, all kept at least a quarter of the
/// box away from the edges.
ScalarField random_bump(const TensorGrid& grid, SplitMix64& rng);

/// Real trigonometric polynomial with integer wavenumbers |kappa_k| <= kmax
/// on a periodic grid, normal random amplitudes.
ScalarField random_band_limited(const TensorGrid& grid, int kmax, SplitMix64& rng);

VectorField random_band_limited_vector(const TensorGrid& grid, int kmax, SplitMix64& rng);

/// (sin x1 cos x2, -cos x1 sin x2) on a 2-D grid, wavenumbers scaled to the box.
VectorField taylor_green_2d(const TensorGrid& grid);

/// (sin x1 cos x2 cos x3, -cos x1 sin x2 cos x3, 0) on a 3-D grid.
VectorField taylor_green_3d(const TensorGrid& grid);

}  // namespace mnns
