// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnns/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mnns/error.hpp"

namespace mnns {

TensorGrid::TensorGrid(std::vector<double> half_widths, std::vector<std::size_t> counts,
                       Boundary boundary)
    : half_widths_(std::move(half_widths)), counts_(std::move(counts)), boundary_(boundary) {
  require(!counts_.empty(), ErrorCode::invalid_argument, "grid needs at least one axis");
  require(half_widths_.size() == counts_.size(), ErrorCode::dimension_mismatch,
          "half-width and count vectors differ in length");
  strides_.resize(counts_.size());
  size_ = 1;
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    std::ostringstream os;
    os << "axis " << (k + 1) << ": ";
    require(counts_[k] >= 4 && counts_[k] % 2 == 0, ErrorCode::invalid_argument,
            os.str() + "sample count must be even and at least 4");
    require(std::isfinite(half_widths_[k]) && half_widths_[k] > 0.0,
            ErrorCode::invalid_argument, os.str() + "half-width must be positive");
    strides_[k] = size_;
    size_ *= counts_[k];
  }
}

TensorGrid TensorGrid::cube(std::size_t n, double half_width, std::size_t count,
                            Boundary boundary) {
  return TensorGrid(std::vector<double>(n, half_width), std::vector<std::size_t>(n, count),
                    boundary);
}

double TensorGrid::cell_volume() const noexcept {
  double v = 1.0;
  for (std::size_t k = 0; k < dims(); ++k) v *= spacing(k);
  return v;
}

void TensorGrid::unravel(std::size_t flat, std::span<std::size_t> index) const {
  for (std::size_t k = 0; k < dims(); ++k) {
    index[k] = flat % counts_[k];
    flat /= counts_[k];
  }
}

void TensorGrid::position(std::size_t flat, std::span<double> x) const {
  for (std::size_t k = 0; k < dims(); ++k) {
    x[k] = coordinate(k, flat % counts_[k]);
    flat /= counts_[k];
  }
}

ScalarField::ScalarField(TensorGrid grid, std::vector<double> samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
  require(samples_.size() == grid_.size(), ErrorCode::dimension_mismatch,
          "sample count does not match the grid");
  for (double v : samples_)
    require(std::isfinite(v), ErrorCode::invalid_argument, "field sample is not finite");
}

ScalarField ScalarField::zeros(const TensorGrid& grid) {
  return ScalarField(grid, std::vector<double>(grid.size(), 0.0));
}

ScalarField ScalarField::sample(const TensorGrid& grid, const PointFunction& f) {
  std::vector<double> v(grid.size());
  std::vector<double> x(grid.dims());
  for (std::size_t i = 0; i < v.size(); ++i) {
    grid.position(i, x);
    v[i] = f(x);
  }
  return ScalarField(grid, std::move(v));
}

double ScalarField::integral() const {
  double s = 0.0;
  for (double v : samples_) s += v;
  return s * grid_.cell_volume();
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::abs(v));
  return m;
}

VectorField::VectorField(std::vector<ScalarField> components)
    : components_(std::move(components)) {
  require(!components_.empty(), ErrorCode::invalid_argument,
          "vector field needs at least one component");
  for (const auto& c : components_)
    require(c.grid() == components_.front().grid(), ErrorCode::dimension_mismatch,
            "vector field components live on different grids");
}

VectorField VectorField::zeros(const TensorGrid& grid, std::size_t components) {
  return VectorField(std::vector<ScalarField>(components, ScalarField::zeros(grid)));
}

double VectorField::max_abs() const {
  double m = 0.0;
  for (const auto& c : components_) m = std::max(m, c.max_abs());
  return m;
}

namespace {

template <class Op>
ScalarField combine(const ScalarField& a, const ScalarField& b, Op op) {
  require(a.grid() == b.grid(), ErrorCode::dimension_mismatch, "fields live on different grids");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
  return ScalarField(a.grid(), std::move(v));
}

template <class Op>
VectorField combine(const VectorField& a, const VectorField& b, Op op) {
  require(a.components() == b.components(), ErrorCode::dimension_mismatch,
          "vector fields differ in component count");
  std::vector<ScalarField> c;
  c.reserve(a.components());
  for (std::size_t i = 0; i < a.components(); ++i) c.push_back(combine(a[i], b[i], op));
  return VectorField(std::move(c));
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return x + y; });
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return x - y; });
}

ScalarField operator*(double c, const ScalarField& a) {
  std::vector<double> v(a.samples().begin(), a.samples().end());
  for (double& x : v) x *= c;
  return ScalarField(a.grid(), std::move(v));
}

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return x * y; });
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  return combine(a, b, [](double x, double y) { return x + y; });
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  return combine(a, b, [](double x, double y) { return x - y; });
}

VectorField operator*(double c, const VectorField& a) {
  std::vector<ScalarField> out;
  out.reserve(a.components());
  for (const auto& comp : a) out.push_back(c * comp);
  return VectorField(std::move(out));
}

}  // namespace mnns
