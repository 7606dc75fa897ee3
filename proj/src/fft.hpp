// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

// Thin FFTW wrapper. Shapes are given in mnns axis order (axis 1 fastest);
// FFTW wants the slowest axis first, so the wrapper reverses them.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mnns::detail {

using Complex = std::complex<double>;

/// In-place n-D complex transform, unnormalized. sign = -1 forward, +1 backward.
void fft_c2c(std::span<const std::size_t> shape, std::span<Complex> data, int sign);

/// Real-to-complex forward transform. Output length is
/// (shape[0]/2 + 1) * shape[1] * ... * shape[n-1].
void fft_r2c(std::span<const std::size_t> shape, std::span<const double> in,
             std::span<Complex> out);

/// Inverse of fft_r2c, unnormalized.
void fft_c2r(std::span<const std::size_t> shape, std::span<const Complex> in,
             std::span<double> out);

std::size_t half_spectrum_size(std::span<const std::size_t> shape);

}  // namespace mnns::detail
