// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mnns {

enum class Boundary { truncated, periodic };

/// Uniform tensor grid on prod_k [-L_k, L_k). Node i on axis k sits at
/// -L_k + i*h_k with h_k = 2 L_k / m_k, so the origin is always a node.
/// Samples are stored with axis 1 fastest and axis n slowest.
class TensorGrid {
 public:
  TensorGrid(std::vector<double> half_widths, std::vector<std::size_t> counts,
             Boundary boundary = Boundary::truncated);

  /// Same half-width and count on every axis.
  static TensorGrid cube(std::size_t n, double half_width, std::size_t count,
                         Boundary boundary = Boundary::truncated);

  std::size_t dims() const noexcept { return counts_.size(); }
  std::size_t count(std::size_t k) const { return counts_.at(k); }
  double half_width(std::size_t k) const { return half_widths_.at(k); }
  double spacing(std::size_t k) const { return 2.0 * half_widths_.at(k) / counts_.at(k); }
  double coordinate(std::size_t k, std::size_t i) const {
    return -half_widths_[k] + static_cast<double>(i) * spacing(k);
  }
  /// Distance between consecutive samples of axis k in the flat array.
  std::size_t stride(std::size_t k) const { return strides_.at(k); }
  std::size_t size() const noexcept { return size_; }
  double cell_volume() const noexcept;
  bool periodic() const noexcept { return boundary_ == Boundary::periodic; }
  Boundary boundary() const noexcept { return boundary_; }

  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  const std::vector<double>& half_widths() const noexcept { return half_widths_; }

  /// Multi-index of a flat offset.
  void unravel(std::size_t flat, std::span<std::size_t> index) const;
  /// Physical coordinates of a flat offset.
  void position(std::size_t flat, std::span<double> x) const;

  friend bool operator==(const TensorGrid&, const TensorGrid&) = default;

 private:
  std::vector<double> half_widths_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
  Boundary boundary_ = Boundary::truncated;
};

using PointFunction = std::function<double(std::span<const double>)>;

/// Real samples on a grid. Every sample is finite; the field is immutable
/// after construction.
class ScalarField {
 public:
  ScalarField(TensorGrid grid, std::vector<double> samples);
  static ScalarField zeros(const TensorGrid& grid);
  static ScalarField sample(const TensorGrid& grid, const PointFunction& f);

  const TensorGrid& grid() const noexcept { return grid_; }
  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const noexcept { return samples_.size(); }

  /// sum of samples times the cell volume
  double integral() const;
  double max_abs() const;
  /// Moves the samples out, leaving the field empty.
  std::vector<double> release() && { return std::move(samples_); }

 private:
  TensorGrid grid_;
  std::vector<double> samples_;
};

/// An n-component field on a shared grid (n = grid dimension by default,
/// though the type does not insist on it).
class VectorField {
 public:
  explicit VectorField(std::vector<ScalarField> components);
  static VectorField zeros(const TensorGrid& grid, std::size_t components);

  const TensorGrid& grid() const noexcept { return components_.front().grid(); }
  std::size_t components() const noexcept { return components_.size(); }
  const ScalarField& operator[](std::size_t i) const { return components_.at(i); }
  auto begin() const noexcept { return components_.begin(); }
  auto end() const noexcept { return components_.end(); }

  double max_abs() const;

 private:
  std::vector<ScalarField> components_;
};

// Pointwise arithmetic; operands must share a grid.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);
ScalarField pointwise_product(const ScalarField& a, const ScalarField& b);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double c, const VectorField& a);

}  // namespace mnns
