// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnns/mixed_norm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"
#include "mnns/error.hpp"

namespace mnns {
namespace {

// (sum_i |v_i|^p h)^{1/p} with the max factored out so huge exponents
// cannot overflow.
double line_norm(const double* v, std::size_t len, double h, const Exponent& p) {
  double m = 0.0;
  for (std::size_t i = 0; i < len; ++i) m = std::max(m, std::abs(v[i]));
  if (p.is_infinite() || m == 0.0) return m;
  const double e = p.value();
  double s = 0.0;
  if (e == 1.0) {
    for (std::size_t i = 0; i < len; ++i) s += std::abs(v[i]);
    return s * h;
  }
  if (e == 2.0) {
    for (std::size_t i = 0; i < len; ++i) {
      const double r = v[i] / m;
      s += r * r;
    }
    return m * std::sqrt(s * h);
  }
  for (std::size_t i = 0; i < len; ++i) s += std::pow(std::abs(v[i]) / m, e);
  return m * std::pow(s * h, 1.0 / e);
}

void check_dims(const TensorGrid& g, const MixedExponents& p) {
  if (p.size() != g.dims()) {
    std::ostringstream os;
    os << "exponent vector has " << p.size() << " entries for a " << g.dims() << "-D grid";
    fail(ErrorCode::dimension_mismatch, os.str());
  }
}

ScalarField rescaled(const ScalarField& f, double lambda) {
  const auto& g = f.grid();
  std::vector<double> v(g.size());
  std::vector<double> x(g.dims());
  for (std::size_t i = 0; i < v.size(); ++i) {
    g.position(i, x);
    for (auto& c : x) c *= lambda;
    v[i] = lambda * interpolate(f, x);
  }
  return ScalarField(g, std::move(v));
}

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

}  // namespace

double mixed_norm(const ScalarField& f, const MixedExponents& p) {
  const auto& g = f.grid();
  check_dims(g, p);
  std::vector<double> cur(f.samples().begin(), f.samples().end());
  std::size_t rest = cur.size();
  for (std::size_t k = 0; k < g.dims(); ++k) {
    const std::size_t m = g.count(k);
    rest /= m;
    std::vector<double> next(rest);
    for (std::size_t j = 0; j < rest; ++j)
      next[j] = line_norm(cur.data() + j * m, m, g.spacing(k), p[k]);
    cur.swap(next);
  }
  return cur.front();
}

NormReport mixed_norm_report(const ScalarField& f, const MixedExponents& p) {
  return NormReport{mixed_norm(f, p), tail_fractions(f)};
}

double mixed_norm(const VectorField& v, const MixedExponents& p) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, mixed_norm(c, p));
  return m;
}

double plain_lp_norm(const ScalarField& f, double p) {
  require(p >= 1.0, ErrorCode::hypothesis, "Lebesgue exponent must be at least 1");
  return mixed_norm(f, MixedExponents::uniform(f.grid().dims(), p));
}

std::vector<double> tail_fractions(const ScalarField& f) {
  const auto& g = f.grid();
  std::vector<double> edge(g.dims(), 0.0);
  std::vector<std::size_t> idx(g.dims());
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f[i]);
    if (a == 0.0) continue;
    total += a;
    g.unravel(i, idx);
    for (std::size_t k = 0; k < g.dims(); ++k)
      if (idx[k] < 2 || idx[k] + 2 >= g.count(k)) edge[k] += a;
  }
  if (total > 0.0)
    for (auto& e : edge) e /= total;
  return edge;
}

double interpolate(const ScalarField& f, std::span<const double> x) {
  const auto& g = f.grid();
  const std::size_t n = g.dims();
  require(x.size() == n, ErrorCode::dimension_mismatch, "point has the wrong dimension");
  require(n <= 8, ErrorCode::invalid_argument, "interpolation supports at most 8 axes");
  double frac[8];
  std::size_t lo[8], hi[8];
  for (std::size_t k = 0; k < n; ++k) {
    const auto m = static_cast<long long>(g.count(k));
    double u = (x[k] + g.half_width(k)) / g.spacing(k);
    if (g.periodic()) {
      u = std::fmod(u, static_cast<double>(m));
      if (u < 0) u += static_cast<double>(m);
    } else if (u < 0.0 || u > static_cast<double>(m - 1)) {
      return 0.0;
    }
    auto i0 = static_cast<long long>(std::floor(u));
    if (i0 >= m) i0 = m - 1;
    frac[k] = u - static_cast<double>(i0);
    lo[k] = static_cast<std::size_t>(i0);
    hi[k] = g.periodic() ? static_cast<std::size_t>((i0 + 1) % m)
                         : static_cast<std::size_t>(std::min(i0 + 1, m - 1));
  }
  double acc = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << n); ++corner) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const bool up = (corner >> k) & 1u;
      w *= up ? frac[k] : 1.0 - frac[k];
      flat += (up ? hi[k] : lo[k]) * g.stride(k);
    }
    if (w != 0.0) acc += w * f[flat];
  }
  return acc;
}

double scaling_ratio(const PointFunction& f, const TensorGrid& grid, double lambda,
                     const MixedExponents& p) {
  require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::invalid_argument,
          "scaling factor must be positive");
  check_dims(grid, p);
  const auto base = ScalarField::sample(grid, f);
  if (lambda == 1.0) return 1.0;
  std::vector<double> y(grid.dims());
  const auto scaled = ScalarField::sample(grid, [&](std::span<const double> x) {
    for (std::size_t k = 0; k < x.size(); ++k) y[k] = lambda * x[k];
    return lambda * f(y);
  });
  require(max_of(tail_fractions(base)) <= kDefaultTailThreshold &&
              max_of(tail_fractions(scaled)) <= kDefaultTailThreshold,
          ErrorCode::domain_escape, "rescaled function reaches the edge of the grid");
  const double d = mixed_norm(base, p);
  return d == 0.0 ? 0.0 : mixed_norm(scaled, p) / d;
}

double scaling_ratio(const ScalarField& f, double lambda, const MixedExponents& p) {
  require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::invalid_argument,
          "scaling factor must be positive");
  check_dims(f.grid(), p);
  if (lambda == 1.0) return 1.0;
  const auto& g = f.grid();
  // Mass of f outside the box shrunk by lambda is lost when lambda > 1.
  if (lambda > 1.0 && !g.periodic()) {
    double lost = 0.0, total = 0.0;
    std::vector<double> x(g.dims());
    for (std::size_t i = 0; i < f.size(); ++i) {
      g.position(i, x);
      total += std::abs(f[i]);
      for (std::size_t k = 0; k < g.dims(); ++k)
        if (std::abs(x[k]) * lambda > g.half_width(k) - g.spacing(k)) {
          lost += std::abs(f[i]);
          break;
        }
    }
    require(total == 0.0 || lost <= kDefaultTailThreshold * total, ErrorCode::domain_escape,
            "rescaled support escapes the grid");
  }
  const auto scaled = rescaled(f, lambda);
  require(max_of(tail_fractions(scaled)) <= kDefaultTailThreshold, ErrorCode::domain_escape,
          "rescaled function reaches the edge of the grid");
  const double d = mixed_norm(f, p);
  return d == 0.0 ? 0.0 : mixed_norm(scaled, p) / d;
}

ScalarField convolve(const ScalarField& f, const ScalarField& g, double tail_threshold) {
  require(f.grid() == g.grid(), ErrorCode::dimension_mismatch,
          "convolution operands live on different grids");
  const auto tf = max_of(tail_fractions(f));
  const auto tg = max_of(tail_fractions(g));
  if (tf > tail_threshold || tg > tail_threshold) {
    std::ostringstream os;
    os << "tail mass fraction " << std::max(tf, tg) << " exceeds " << tail_threshold
       << "; enlarge the domain";
    fail(ErrorCode::domain_escape, os.str());
  }
  const auto& grid = f.grid();
  const std::size_t n = grid.dims();
  std::vector<std::size_t> pad(n);
  std::vector<std::size_t> pstride(n);
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) {
    pad[k] = 2 * grid.count(k);
    pstride[k] = total;
    total *= pad[k];
  }
  auto embed = [&](const ScalarField& a) {
    std::vector<double> out(total, 0.0);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < a.size(); ++i) {
      grid.unravel(i, idx);
      std::size_t flat = 0;
      for (std::size_t k = 0; k < n; ++k) flat += idx[k] * pstride[k];
      out[flat] = a[i];
    }
    return out;
  };
  const std::size_t nh = detail::half_spectrum_size(pad);
  std::vector<detail::Complex> fa(nh), ga(nh);
  detail::fft_r2c(pad, embed(f), fa);
  detail::fft_r2c(pad, embed(g), ga);
  for (std::size_t i = 0; i < nh; ++i) fa[i] *= ga[i];
  std::vector<double> full(total);
  detail::fft_c2r(pad, fa, full);

  // Node m/2 is the origin, so output node i reads padded index i + m/2.
  const double scale = grid.cell_volume() / static_cast<double>(total);
  std::vector<double> out(grid.size());
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < out.size(); ++i) {
    grid.unravel(i, idx);
    std::size_t flat = 0;
    for (std::size_t k = 0; k < n; ++k) flat += (idx[k] + grid.count(k) / 2) * pstride[k];
    out[i] = full[flat] * scale;
  }
  return ScalarField(grid, std::move(out));
}

void validate_young_triple(const MixedExponents& p, const MixedExponents& q,
                           const MixedExponents& r) {
  require(p.size() == q.size() && q.size() == r.size(), ErrorCode::dimension_mismatch,
          "Young exponent vectors differ in length");
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double lhs = p[k].reciprocal() + 1.0;
    const double rhs = q[k].reciprocal() + r[k].reciprocal();
    if (std::abs(lhs - rhs) > 1e-12) {
      std::ostringstream os;
      os << "axis " << (k + 1) << ": 1/p + 1 = " << lhs << " but 1/q + 1/r = " << rhs;
      fail(ErrorCode::hypothesis, os.str());
    }
  }
}

double young_ratio(const ScalarField& f, const ScalarField& g, const MixedExponents& p,
                   const MixedExponents& q, const MixedExponents& r, double tail_threshold) {
  validate_young_triple(p, q, r);
  check_dims(f.grid(), p);
  const double num = mixed_norm(convolve(f, g, tail_threshold), p);
  if (num == 0.0) return 0.0;
  return num / (mixed_norm(f, q) * mixed_norm(g, r));
}

double mixed_holder_ratio(const ScalarField& f, const ScalarField& g, const MixedExponents& p,
                          std::span<const double> alpha, std::span<const double> beta) {
  check_dims(f.grid(), p);
  require(alpha.size() == p.size() && beta.size() == p.size(), ErrorCode::dimension_mismatch,
          "split vectors differ in length from the exponents");
  std::vector<double> sum(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const bool ok = alpha[k] > 0.0 && alpha[k] <= 1.0 && beta[k] > 0.0 && beta[k] <= 1.0 &&
                    alpha[k] + beta[k] <= p[k].value();
    if (!ok) {
      std::ostringstream os;
      os << "axis " << (k + 1) << ": splits must satisfy 0 < alpha, beta <= 1 and "
         << "alpha + beta <= p";
      fail(ErrorCode::hypothesis, os.str());
    }
    sum[k] = alpha[k] + beta[k];
  }
  const double num = mixed_norm(pointwise_product(f, g), p.divided_by(sum));
  if (num == 0.0) return 0.0;
  return num / (mixed_norm(f, p.divided_by(alpha)) * mixed_norm(g, p.divided_by(beta)));
}

}  // namespace mnns
