// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnns/exponents.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mnns/error.hpp"

namespace mnns {

Exponent::Exponent(double value) {
  if (std::isnan(value) || value < 1.0) {
    std::ostringstream os;
    os << "exponent must lie in [1, inf], got " << value;
    fail(ErrorCode::hypothesis, os.str());
  }
  if (std::isinf(value)) {
    infinite_ = true;
    value_ = 0.0;
  } else {
    value_ = value;
  }
}

Exponent Exponent::infinity() noexcept {
  Exponent e;
  e.infinite_ = true;
  e.value_ = 0.0;
  return e;
}

double Exponent::value() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

Exponent Exponent::divided_by(double gamma) const {
  require(gamma > 0.0 && std::isfinite(gamma), ErrorCode::hypothesis,
          "exponent split must be positive");
  if (infinite_) return infinity();
  return Exponent(value_ / gamma);
}

std::string Exponent::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

MixedExponents::MixedExponents(std::vector<Exponent> exponents)
    : exponents_(std::move(exponents)) {
  require(!exponents_.empty(), ErrorCode::invalid_argument,
          "exponent vector must have at least one axis");
}

MixedExponents MixedExponents::from_values(std::span<const double> values) {
  std::vector<Exponent> e;
  e.reserve(values.size());
  for (double v : values) e.emplace_back(v);
  return MixedExponents(std::move(e));
}

MixedExponents MixedExponents::from_values(std::initializer_list<double> values) {
  return from_values(std::span<const double>(values.begin(), values.size()));
}

MixedExponents MixedExponents::uniform(std::size_t n, double p) {
  return MixedExponents(std::vector<Exponent>(n, Exponent(p)));
}

double MixedExponents::criticality_sum() const noexcept {
  double s = 0.0;
  for (const auto& e : exponents_) s += e.reciprocal();
  return s;
}

bool MixedExponents::all_finite() const noexcept {
  for (const auto& e : exponents_)
    if (e.is_infinite()) return false;
  return true;
}

MixedExponents MixedExponents::divided_by(std::span<const double> gamma) const {
  require(gamma.size() == exponents_.size(), ErrorCode::dimension_mismatch,
          "split vector length differs from exponent count");
  std::vector<Exponent> out;
  out.reserve(gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k)
    out.push_back(exponents_[k].divided_by(gamma[k]));
  return MixedExponents(std::move(out));
}

std::vector<double> MixedExponents::values() const {
  std::vector<double> v;
  v.reserve(exponents_.size());
  for (const auto& e : exponents_) v.push_back(e.value());
  return v;
}

std::string MixedExponents::to_string() const {
  std::string s = "(";
  for (std::size_t k = 0; k < exponents_.size(); ++k) {
    if (k) s += ", ";
    s += exponents_[k].to_string();
  }
  return s + ")";
}

}  // namespace mnns
