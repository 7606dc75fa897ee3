// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnns/heat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "mnns/error.hpp"
#include "mnns/mixed_norm.hpp"

namespace mnns {
namespace {

constexpr double kPi = std::numbers::pi;
// exp(-s^2/4t) < 1e-18 beyond s^2 > 4t ln(1e18).
constexpr double kLogCut = 41.446531673892822;

void require_positive_time(double t) {
  require(t > 0.0 && std::isfinite(t), ErrorCode::invalid_argument, "time must be positive");
}

std::size_t cutoff_offset(double t, double h, std::size_t max_offset) {
  const double reach = std::sqrt(4.0 * t * kLogCut) / h;
  return std::min<std::size_t>(max_offset, static_cast<std::size_t>(std::ceil(reach)));
}

void check_resolved(const TensorGrid& g, double t) {
  for (std::size_t k = 0; k < g.dims(); ++k) {
    const double h = g.spacing(k);
    if (t < h * h) {
      std::ostringstream os;
      os << "axis " << (k + 1) << ": t = " << t << " is below h^2 = " << h * h
         << "; the sampled heat kernel would be under-resolved";
      fail(ErrorCode::invalid_argument, os.str());
    }
  }
}

// Convolves every line along axis k with centred weights w.
std::vector<double> convolve_axis(const std::vector<double>& in, const TensorGrid& g,
                                  std::size_t k, const std::vector<double>& w) {
  const std::size_t m = g.count(k);
  const std::size_t inner = g.stride(k);
  const std::size_t outer = g.size() / (m * inner);
  const auto D = static_cast<long long>((w.size() - 1) / 2);
  const auto mm = static_cast<long long>(m);
  const bool periodic = g.periodic();
  std::vector<double> out(in.size(), 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = o * m * inner;
    for (long long i = 0; i < mm; ++i) {
      double* dst = out.data() + base + static_cast<std::size_t>(i) * inner;
      if (!periodic && inner == 1) {
        const long long lo = std::max(0LL, i - D), hi = std::min(mm - 1, i + D);
        const double* src = in.data() + base;
        double acc = 0.0;
        for (long long j = lo; j <= hi; ++j)
          acc += w[static_cast<std::size_t>(i - j + D)] * src[j];
        *dst = acc;
        continue;
      }
      for (long long d = -D; d <= D; ++d) {
        long long j = i - d;
        if (periodic) {
          j %= mm;
          if (j < 0) j += mm;
        } else if (j < 0 || j >= mm) {
          continue;
        }
        const double wd = w[static_cast<std::size_t>(d + D)];
        const double* src = in.data() + base + static_cast<std::size_t>(j) * inner;
        for (std::size_t r = 0; r < inner; ++r) dst[r] += wd * src[r];
      }
    }
  }
  return out;
}

ScalarField evolve_impl(const ScalarField& u0, double t, std::optional<std::size_t> deriv_axis) {
  const auto& g = u0.grid();
  check_resolved(g, t);
  std::vector<double> cur(u0.samples().begin(), u0.samples().end());
  for (std::size_t k = 0; k < g.dims(); ++k) {
    const auto w = (deriv_axis && *deriv_axis == k)
                       ? sampled_kernel_derivative(t, g.spacing(k), g.count(k) - 1)
                       : sampled_kernel(t, g.spacing(k), g.count(k) - 1);
    cur = convolve_axis(cur, g, k, w);
  }
  return ScalarField(g, std::move(cur));
}

std::vector<double> profile_1d(const TensorGrid& g, std::size_t k, const Exponent& p,
                               const Exponent& q, double tau_max, bool derivative) {
  const std::size_t m = g.count(k);
  const double h = g.spacing(k);
  const double W = g.half_width(k) - 8.0 * tau_max;
  if (W < 8.0 * h) {
    std::ostringstream os;
    os << "axis " << (k + 1) << ": box too small for tau_max = " << tau_max;
    fail(ErrorCode::domain_escape, os.str());
  }
  auto taper = [](double r) {
    if (r <= 0.0) return 1.0;
    if (r >= 1.0) return 0.0;
    return 0.5 * (1.0 + std::cos(kPi * r));
  };
  auto plateau = [&](double x) { return taper((std::abs(x) - 0.8 * W) / (0.2 * W)); };
  std::vector<double> v(m, 0.0);
  const double c = q.reciprocal();
  if (c == 1.0) {
    v[m / 2] = 1.0 / h;
    return v;
  }
  // Near q = p the power law needs an exponentially wide box: its slope bias
  // tends to -1/(2 p log(R / sqrt t)) as c p -> 1. The plateau's bias is at
  // most the axis share of sigma / 2, so it wins below kPlateauBias.
  constexpr double kPlateauBias = 0.025;
  if (!derivative && (q == p || (c - p.reciprocal()) / 2.0 <= kPlateauBias)) {
    for (std::size_t i = 0; i < m; ++i) v[i] = plateau(g.coordinate(k, i));
    return v;
  }
  if (c == 0.0) {  // q = p = inf on the derivative axis
    for (std::size_t i = 0; i < m; ++i) {
      const double x = g.coordinate(k, i);
      v[i] = (x > 0 ? 1.0 : x < 0 ? -1.0 : 0.0) * plateau(x);
    }
    return v;
  }
  const bool odd = derivative && q.value() > 2.0;
  // Cell averages of |s|^{-c} over [x - h/2, x + h/2].
  auto F = [c](double s) { return std::copysign(std::pow(std::abs(s), 1.0 - c), s) / (1.0 - c); };
  for (std::size_t i = 0; i < m; ++i) {
    const double x = g.coordinate(k, i);
    const double ax = std::abs(x);
    double avg;
    if (ax < 0.25 * h)
      avg = odd ? 0.0 : 2.0 * std::pow(0.5 * h, 1.0 - c) / (1.0 - c) / h;
    else
      avg = (F(ax + 0.5 * h) - F(ax - 0.5 * h)) / h;
    if (odd && x < 0) avg = -avg;
    v[i] = avg * taper((ax - 0.5 * W) / (0.5 * W));
  }
  return v;
}

}  // namespace

double gaussian_kernel_eval(double t, double s) {
  require_positive_time(t);
  return std::exp(-s * s / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
}

double gaussian_kernel_derivative_eval(double t, double s) {
  require_positive_time(t);
  return -(s / (2.0 * t)) * std::exp(-s * s / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
}

double kernel_1d_norm(double t, const Exponent& r) {
  require_positive_time(t);
  const double base = 1.0 / std::sqrt(4.0 * kPi);
  if (r.is_infinite()) return base / std::sqrt(t);
  const double rv = r.value();
  const double N = base * std::pow(4.0 * kPi / rv, 1.0 / (2.0 * rv));
  return N * std::pow(t, -(1.0 - 1.0 / rv) / 2.0);
}

double kernel_derivative_1d_norm(double t, const Exponent& r) {
  require_positive_time(t);
  const double amp = 1.0 / (std::sqrt(4.0 * kPi * t) * 2.0 * t);
  if (r.is_infinite()) return amp * std::sqrt(2.0 * t) * std::exp(-0.5);
  const double rv = r.value();
  const double c = rv / (4.0 * t);
  const double integral = std::exp(std::lgamma((rv + 1.0) / 2.0) - (rv + 1.0) / 2.0 * std::log(c));
  return amp * std::pow(integral, 1.0 / rv);
}

std::vector<double> sampled_kernel(double t, double h, std::size_t max_offset) {
  require_positive_time(t);
  const std::size_t D = cutoff_offset(t, h, max_offset);
  std::vector<double> w(2 * D + 1);
  double mass = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double s = (static_cast<double>(i) - static_cast<double>(D)) * h;
    w[i] = std::exp(-s * s / (4.0 * t));
    mass += w[i];
  }
  for (auto& x : w) x /= mass;
  return w;
}

std::vector<double> sampled_kernel_derivative(double t, double h, std::size_t max_offset) {
  require_positive_time(t);
  const std::size_t D = cutoff_offset(t, h, max_offset);
  std::vector<double> w(2 * D + 1);
  double mass = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double s = (static_cast<double>(i) - static_cast<double>(D)) * h;
    const double e = std::exp(-s * s / (4.0 * t));
    mass += e * h;
    w[i] = -(s / (2.0 * t)) * e * h;
  }
  for (auto& x : w) x /= mass;
  return w;
}

ScalarField heat_evolve(const ScalarField& u0, double t) {
  require(t >= 0.0 && std::isfinite(t), ErrorCode::invalid_argument, "time must be non-negative");
  if (t == 0.0) return u0;
  return evolve_impl(u0, t, std::nullopt);
}

VectorField heat_evolve(const VectorField& u0, double t) {
  std::vector<ScalarField> out;
  for (const auto& c : u0) out.push_back(heat_evolve(c, t));
  return VectorField(std::move(out));
}

ScalarField heat_evolve_derivative(const ScalarField& u0, double t, std::size_t axis) {
  require_positive_time(t);
  require(axis < u0.grid().dims(), ErrorCode::invalid_argument, "derivative axis out of range");
  return evolve_impl(u0, t, axis);
}

VectorField heat_evolve_derivative(const VectorField& u0, double t, std::size_t axis) {
  std::vector<ScalarField> out;
  for (const auto& c : u0) out.push_back(heat_evolve_derivative(c, t, axis));
  return VectorField(std::move(out));
}

ScalarField heat_evolve_product_kernel(const ScalarField& u0, double t) {
  require(t >= 0.0 && std::isfinite(t), ErrorCode::invalid_argument, "time must be non-negative");
  if (t == 0.0) return u0;
  const auto& g = u0.grid();
  check_resolved(g, t);
  const std::size_t n = g.dims();
  std::vector<std::vector<double>> w(n);
  std::vector<long long> D(n);
  std::size_t taps = 1;
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = sampled_kernel(t, g.spacing(k), g.count(k) - 1);
    D[k] = static_cast<long long>((w[k].size() - 1) / 2);
    taps *= w[k].size();
  }
  std::vector<double> out(g.size(), 0.0);
  std::vector<std::size_t> idx(n);
  std::vector<long long> off(n);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.unravel(i, idx);
    double acc = 0.0;
    for (std::size_t tap = 0; tap < taps; ++tap) {
      std::size_t rem = tap;
      double weight = 1.0;
      std::size_t flat = 0;
      bool inside = true;
      for (std::size_t k = 0; k < n && inside; ++k) {
        const std::size_t len = w[k].size();
        const auto d = static_cast<long long>(rem % len) - D[k];
        rem /= len;
        weight *= w[k][static_cast<std::size_t>(d + D[k])];
        const auto mm = static_cast<long long>(g.count(k));
        long long j = static_cast<long long>(idx[k]) - d;
        if (g.periodic()) {
          j %= mm;
          if (j < 0) j += mm;
        } else if (j < 0 || j >= mm) {
          inside = false;
        }
        flat += static_cast<std::size_t>(j) * g.stride(k);
      }
      if (inside) acc += weight * u0[flat];
    }
    out[i] = acc;
  }
  return ScalarField(g, std::move(out));
}

std::string DecayFit::to_json() const {
  nlohmann::json j;
  j["times"] = times;
  j["norms"] = norms;
  j["fitted_slope"] = fitted_slope;
  j["predicted_slope"] = predicted_slope;
  j["max_residual"] = max_residual;
  j["excluded_times"] = excluded_times;
  return j.dump();
}

DecayFit measure_decay(const ScalarField& u0, const MixedExponents& p, const MixedExponents& q,
                       const std::vector<double>& times, const DecayOptions& options) {
  const auto& g = u0.grid();
  require(p.size() == g.dims() && q.size() == g.dims(), ErrorCode::dimension_mismatch,
          "exponent vectors must match the grid dimension");
  double sigma = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (q[k].value() > p[k].value()) {
      std::ostringstream os;
      os << "axis " << (k + 1) << ": data exponent q = " << q[k].to_string()
         << " exceeds measured exponent p = " << p[k].to_string();
      fail(ErrorCode::hypothesis, os.str());
    }
    sigma += q[k].reciprocal() - p[k].reciprocal();
  }
  require(times.size() >= 2, ErrorCode::invalid_argument, "need at least two times to fit");
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(times[i] > 0.0, ErrorCode::invalid_argument, "decay times must be positive");
    require(i == 0 || times[i] > times[i - 1], ErrorCode::invalid_argument,
            "decay times must be strictly increasing");
  }
  if (options.derivative_axis)
    require(*options.derivative_axis < g.dims(), ErrorCode::invalid_argument,
            "derivative axis out of range");

  DecayFit fit;
  fit.predicted_slope = options.with_derivative ? -(1.0 + sigma) / 2.0 : -sigma / 2.0;
  for (double t : times) {
    std::vector<ScalarField> fields;
    if (!options.with_derivative) {
      fields.push_back(heat_evolve(u0, t));
    } else if (options.derivative_axis) {
      fields.push_back(heat_evolve_derivative(u0, t, *options.derivative_axis));
    } else {
      for (std::size_t j = 0; j < g.dims(); ++j) fields.push_back(heat_evolve_derivative(u0, t, j));
    }
    double norm = 0.0;
    bool escaped = false;
    for (const auto& f : fields) {
      const auto tails = tail_fractions(f);
      if (*std::max_element(tails.begin(), tails.end()) > options.edge_threshold) escaped = true;
      norm = std::max(norm, mixed_norm(f, p));
    }
    if (escaped) {
      fit.excluded_times.push_back(t);
      continue;
    }
    fit.times.push_back(t);
    fit.norms.push_back(norm);
  }
  if (fit.times.size() < 2)
    fail(ErrorCode::domain_escape, "fewer than two times stay clear of the boundary");
  for (double v : fit.norms)
    require(v > 0.0, ErrorCode::invalid_argument, "cannot fit a slope to a zero norm");

  const auto N = static_cast<double>(fit.times.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < fit.times.size(); ++i) {
    const double x = std::log(fit.times[i]), y = std::log(fit.norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.fitted_slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
  const double intercept = (sy - fit.fitted_slope * sx) / N;
  for (std::size_t i = 0; i < fit.times.size(); ++i) {
    const double r = std::log(fit.norms[i]) - (intercept + fit.fitted_slope * std::log(fit.times[i]));
    fit.max_residual = std::max(fit.max_residual, std::abs(r));
  }
  return fit;
}

ScalarField extremal_decay_data(const TensorGrid& grid, const MixedExponents& p,
                                const MixedExponents& q, double tau_max,
                                std::optional<std::size_t> derivative_axis) {
  require(p.size() == grid.dims() && q.size() == grid.dims(), ErrorCode::dimension_mismatch,
          "exponent vectors must match the grid dimension");
  std::vector<std::vector<double>> prof(grid.dims());
  for (std::size_t k = 0; k < grid.dims(); ++k) {
    require(q[k].value() <= p[k].value(), ErrorCode::hypothesis, "need q <= p on every axis");
    prof[k] = profile_1d(grid, k, p[k], q[k], tau_max, derivative_axis && *derivative_axis == k);
  }
  std::vector<double> v(grid.size());
  std::vector<std::size_t> idx(grid.dims());
  for (std::size_t i = 0; i < v.size(); ++i) {
    grid.unravel(i, idx);
    double x = 1.0;
    for (std::size_t k = 0; k < grid.dims(); ++k) x *= prof[k][idx[k]];
    v[i] = x;
  }
  return ScalarField(grid, std::move(v));
}

std::vector<double> continuity_at_zero(const ScalarField& u0, const MixedExponents& p,
                                       const std::vector<double>& times) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k].is_infinite()) {
      std::ostringstream os;
      os << "axis " << (k + 1) << ": continuity at t = 0 needs finite exponents";
      fail(ErrorCode::hypothesis, os.str());
    }
  }
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(mixed_norm(heat_evolve(u0, t) - u0, p));
  return out;
}

}  // namespace mnns
