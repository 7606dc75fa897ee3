// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mnns {

/// A Lebesgue exponent in [1, inf]. Infinity is a tag, not a large float, so
/// norm stages switch from integration to a max instead of overflowing.
class Exponent {
 public:
  /// Accepts any value >= 1; +inf (std::numeric_limits) maps to the tag.
  explicit Exponent(double value);

  static Exponent infinity() noexcept;

  bool is_infinite() const noexcept { return infinite_; }
  /// +inf for the tagged exponent.
  double value() const noexcept;
  /// 1/p, with 1/inf = 0.
  double reciprocal() const noexcept { return infinite_ ? 0.0 : 1.0 / value_; }

  /// The exponent p/gamma for gamma > 0; throws if the result drops below 1.
  /// Infinity stays infinite.
  Exponent divided_by(double gamma) const;

  std::string to_string() const;

  friend bool operator==(const Exponent& a, const Exponent& b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  Exponent() = default;
  double value_ = 1.0;
  bool infinite_ = false;
};

/// An exponent vector (p_1, ..., p_n). Axis 1 is the innermost integration.
class MixedExponents {
 public:
  explicit MixedExponents(std::vector<Exponent> exponents);
  /// Values >= 1, +inf allowed.
  static MixedExponents from_values(std::span<const double> values);
  static MixedExponents from_values(std::initializer_list<double> values);
  static MixedExponents uniform(std::size_t n, double p);

  std::size_t size() const noexcept { return exponents_.size(); }
  const Exponent& operator[](std::size_t k) const { return exponents_.at(k); }
  auto begin() const noexcept { return exponents_.begin(); }
  auto end() const noexcept { return exponents_.end(); }

  /// sum_k 1/p_k, infinite axes contribute 0.
  double criticality_sum() const noexcept;
  bool all_finite() const noexcept;

  /// Per-axis p_k / gamma_k.
  MixedExponents divided_by(std::span<const double> gamma) const;

  std::vector<double> values() const;
  std::string to_string() const;

  friend bool operator==(const MixedExponents&, const MixedExponents&) = default;

 private:
  std::vector<Exponent> exponents_;
};

}  // namespace mnns
