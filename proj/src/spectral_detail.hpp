// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

// Mode tables and raw transforms shared by the spectral operators and the
// mild solver, which works on coefficient arrays directly.

#pragma once

#include <span>
#include <vector>

#include "fft.hpp"
#include "mnns/grid.hpp"

namespace mnns::detail {

class ModeTable {
 public:
  explicit ModeTable(const TensorGrid& grid);

  std::size_t dims() const { return dims_; }
  std::size_t size() const { return size_; }
  std::span<const std::size_t> shape() const { return shape_; }

  double xi(std::size_t axis, std::size_t mode) const { return xi_[axis * size_ + mode]; }
  /// Nyquist frequency replaced by 0.
  double xi_eff(std::size_t axis, std::size_t mode) const { return eff_[axis * size_ + mode]; }
  double xi2(std::size_t mode) const { return xi2_[mode]; }
  double xi2_eff(std::size_t mode) const { return xi2_eff_[mode]; }

 private:
  std::size_t dims_, size_;
  std::vector<std::size_t> shape_;
  std::vector<double> xi_, eff_, xi2_, xi2_eff_;
};

std::vector<Complex> forward(const TensorGrid& grid, std::span<const double> samples);

/// Normalized inverse; writes the real part and returns max |imag|.
double inverse(const TensorGrid& grid, std::vector<Complex> coeffs, std::span<double> out);

ScalarField inverse_field(const TensorGrid& grid, std::vector<Complex> coeffs);

/// Leray projection in place on n component spectra.
void leray_in_place(const ModeTable& modes, std::vector<std::vector<Complex>>& comps);

void require_periodic(const TensorGrid& grid, const char* op);

}  // namespace mnns::detail
