// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnns/mild_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "mnns/error.hpp"
#include "mnns/mixed_norm.hpp"
#include "mnns/rng.hpp"
#include "mnns/samples.hpp"
#include "mnns/spectral.hpp"
#include "mnns/threads.hpp"
#include "spectral_detail.hpp"

namespace mnns {

using detail::ModeTable;
using Spectra = std::vector<std::vector<Complex>>;

namespace {

std::string axis_str(std::size_t k) { return "axis " + std::to_string(k + 1); }

// Physical state and gradients from n component spectra.
std::pair<VectorField, std::vector<VectorField>> realize(const TensorGrid& g,
                                                         const ModeTable& modes,
                                                         const Spectra& s) {
  const std::size_t n = s.size();
  std::vector<ScalarField> state;
  std::vector<VectorField> grad;
  for (std::size_t i = 0; i < n; ++i) {
    state.push_back(detail::inverse_field(g, s[i]));
    std::vector<ScalarField> row;
    for (std::size_t j = 0; j < modes.dims(); ++j) {
      std::vector<Complex> d(s[i]);
      for (std::size_t idx = 0; idx < d.size(); ++idx) d[idx] *= Complex(0.0, modes.xi_eff(j, idx));
      row.push_back(detail::inverse_field(g, std::move(d)));
    }
    grad.emplace_back(std::move(row));
  }
  return {VectorField(std::move(state)), std::move(grad)};
}

Spectra spectra_of(const VectorField& v) {
  Spectra s;
  for (const auto& c : v) s.push_back(detail::forward(v.grid(), c.samples()));
  return s;
}

void require_square(const VectorField& v, const char* op) {
  require(v.grid().periodic(), ErrorCode::invalid_argument, std::string(op) + " needs a periodic grid");
  require(v.components() == v.grid().dims(), ErrorCode::dimension_mismatch,
          std::string(op) + ": expected " + std::to_string(v.grid().dims()) + " components, got " +
              std::to_string(v.components()));
}

void require_compatible(const Trajectory& a, const Trajectory& b, const char* op) {
  require(a.grid == b.grid, ErrorCode::dimension_mismatch, std::string(op) + ": trajectories live on different grids");
  require(a.times == b.times, ErrorCode::dimension_mismatch, std::string(op) + ": trajectories have different time nodes");
}

double gradient_norm(const std::vector<VectorField>& grad, const MixedExponents& p) {
  double m = 0.0;
  for (const auto& row : grad) m = std::max(m, mixed_norm(row, p));
  return m;
}

// Cubic Lagrange weights in log t for s^a w(s), returned as weights on the
// raw node values: w(s) ~ sum_l c_l w(t_l).
struct Stencil {
  std::size_t first = 0, count = 1;
  std::array<double, 4> c{1.0, 0.0, 0.0, 0.0};
};

Stencil stencil(const std::vector<double>& times, double s, double a) {
  Stencil st;
  const std::size_t M = times.size();
  if (s <= times.front()) return st;
  require(s <= times.back() * (1 + 1e-12), ErrorCode::invalid_argument,
          "time " + std::to_string(s) + " lies beyond the last node");
  s = std::min(s, times.back());
  const auto l = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), s) - times.begin()) - 1;
  st.count = std::min<std::size_t>(4, M);
  st.first = std::min(l > 0 ? l - 1 : 0, M - st.count);
  const double x = std::log(s);
  for (std::size_t j = 0; j < st.count; ++j) {
    const double xj = std::log(times[st.first + j]);
    double L = 1.0;
    for (std::size_t k = 0; k < st.count; ++k)
      if (k != j) L *= (x - std::log(times[st.first + k])) / (xj - std::log(times[st.first + k]));
    st.c[j] = L * std::pow(times[st.first + j] / s, a);
  }
  return st;
}

class Duhamel {
 public:
  Duhamel(const Trajectory& u, const Trajectory& v, const SolverConfig& cfg)
      : u_(u), v_(v), cfg_(cfg), modes_(u.grid), a_state_((1 - cfg.delta()) / 2) {
    require_compatible(u, v, "duhamel_bilinear");
    require(u.size() > 0, ErrorCode::invalid_argument, "duhamel_bilinear: empty trajectory");
  }

  const ModeTable& modes() const { return modes_; }

  Spectra spectrum(double t) const {
    require(t > 0 && t <= u_.times.back() * (1 + 1e-12), ErrorCode::invalid_argument,
            "duhamel_bilinear: t = " + std::to_string(t) + " outside (0, T]");
    const std::size_t n = modes_.dims(), N = modes_.size(), K = cfg_.K;
    const double delta = cfg_.delta();
    Spectra G(n, std::vector<Complex>(N, 0.0));
    Spectra F;
    std::vector<double> decay(N);
    auto add = [&](double s, double w) {
      forcing(s, F);
      for (std::size_t idx = 0; idx < N; ++idx) decay[idx] = w * std::exp(-(t - s) * modes_.xi2(idx));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t idx = 0; idx < N; ++idx) G[i][idx] -= decay[idx] * F[i][idx];
    };
    for (std::size_t j = 1; j <= K; ++j) {
      const double sigma = (j - 0.5) / static_cast<double>(K);
      // (0, t/2]: s = (t/2) sigma^{2/delta} flattens s^{-1+delta/2}. Weights
      // are the exact cell measures, so constant integrands come out exact.
      const double lo = (j - 1.0) / static_cast<double>(K), hi = j / static_cast<double>(K);
      add(0.5 * t * std::pow(sigma, 2 / delta),
          0.5 * t * (std::pow(hi, 2 / delta) - std::pow(lo, 2 / delta)));
      // [t/2, t): t - s = (t/2) sigma^2 flattens (t-s)^{-1/2}.
      add(t - 0.5 * t * sigma * sigma, t * sigma / static_cast<double>(K));
    }
    return G;
  }

 private:
  void forcing(double s, Spectra& out) const {
    const std::size_t n = modes_.dims(), N = modes_.size();
    const auto su = stencil(u_.times, s, a_state_);
    const auto sg = stencil(v_.times, s, 0.5);
    std::vector<std::vector<double>> uu(n, std::vector<double>(N, 0.0));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < su.count; ++l) {
        const auto src = u_.states[su.first + l][j].samples();
        const double c = su.c[l];
        for (std::size_t x = 0; x < N; ++x) uu[j][x] += c * src[x];
      }
    out.assign(n, {});
    std::vector<double> f(N), dv(N);
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(f.begin(), f.end(), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        std::fill(dv.begin(), dv.end(), 0.0);
        for (std::size_t l = 0; l < sg.count; ++l) {
          const auto src = v_.gradients[sg.first + l][i][j].samples();
          const double c = sg.c[l];
          for (std::size_t x = 0; x < N; ++x) dv[x] += c * src[x];
        }
        for (std::size_t x = 0; x < N; ++x) f[x] += uu[j][x] * dv[x];
      }
      out[i] = detail::forward(u_.grid, f);
    }
    detail::leray_in_place(modes_, out);
  }

  const Trajectory& u_;
  const Trajectory& v_;
  const SolverConfig& cfg_;
  ModeTable modes_;
  double a_state_;
};

Trajectory combine(double ca, const Trajectory& a, double cb, const Trajectory& b) {
  require_compatible(a, b, "trajectory arithmetic");
  Trajectory r{a.grid, a.times, {}, {}};
  for (std::size_t i = 0; i < a.size(); ++i) {
    r.states.push_back(ca * a.states[i] + cb * b.states[i]);
    std::vector<VectorField> g;
    for (std::size_t c = 0; c < a.gradients[i].size(); ++c)
      g.push_back(ca * a.gradients[i][c] + cb * b.gradients[i][c]);
    r.gradients.push_back(std::move(g));
  }
  return r;
}

double x_ratio(const Trajectory& w, const SolverConfig& cfg) {
  const double x = xspace_norm(w, cfg);
  if (x == 0.0) return 0.0;
  return xspace_norm(duhamel_trajectory(w, w, cfg), cfg) / (x * x);
}

}  // namespace

double SolverConfig::delta() const {
  double d = 0.0;
  for (const auto& e : q) d += e.reciprocal();
  return d;
}

std::vector<double> SolverConfig::time_nodes() const {
  std::vector<double> t(M);
  for (std::size_t i = 0; i < M; ++i) t[i] = T * std::pow(grading, static_cast<double>(M - 1 - i));
  t.back() = T;
  return t;
}

void SolverConfig::validate(std::size_t n) const {
  require(p.size() == n && q.size() == n, ErrorCode::dimension_mismatch,
          "solver exponents have " + std::to_string(p.size()) + " and " + std::to_string(q.size()) +
              " entries for a " + std::to_string(n) + "-dimensional grid");
  for (std::size_t k = 0; k < n; ++k) {
    require(!p[k].is_infinite() && p[k].value() > 2.0, ErrorCode::hypothesis,
            axis_str(k) + ": p = " + p[k].to_string() + " must lie in (2, inf)");
    require(!q[k].is_infinite() && q[k].value() >= p[k].value(), ErrorCode::hypothesis,
            axis_str(k) + ": q = " + q[k].to_string() + " must lie in [p, inf) with p = " +
                p[k].to_string());
  }
  const double s = p.criticality_sum();
  if (std::abs(s - 1.0) > 1e-12) {
    std::string terms;
    for (std::size_t k = 0; k < n; ++k)
      terms += (k ? ", " : "") + axis_str(k) + ": 1/p = " + std::to_string(p[k].reciprocal());
    fail(ErrorCode::hypothesis, "sum of 1/p_k is " + std::to_string(s) + " (" + terms + "), must equal 1");
  }
  const double d = delta();
  require(d >= 0.1 && d <= 0.9, ErrorCode::hypothesis,
          "delta = sum 1/q_k = " + std::to_string(d) + " must lie in [0.1, 0.9]");
  require(T > 0 && std::isfinite(T), ErrorCode::invalid_argument, "T must be positive");
  require(M >= 2, ErrorCode::invalid_argument, "need at least two time nodes");
  require(grading > 0 && grading < 1, ErrorCode::invalid_argument, "grading must lie in (0, 1)");
  require(K >= 1, ErrorCode::invalid_argument, "K must be positive");
  require(picard_tol > 0, ErrorCode::invalid_argument, "picard_tol must be positive");
  require(max_iter >= 1, ErrorCode::invalid_argument, "max_iter must be positive");
}

Trajectory Trajectory::from_states(std::vector<double> times, std::vector<VectorField> states) {
  require(!states.empty() && states.size() == times.size(), ErrorCode::dimension_mismatch,
          "trajectory needs one state per time node");
  const auto& g = states.front().grid();
  ModeTable modes(g);
  Trajectory t{g, std::move(times), {}, {}};
  for (auto& s : states) {
    require_square(s, "trajectory");
    auto [state, grad] = realize(g, modes, spectra_of(s));
    (void)state;
    t.gradients.push_back(std::move(grad));
  }
  t.states = std::move(states);
  return t;
}

Trajectory Trajectory::zeros(const TensorGrid& grid, std::vector<double> times) {
  const std::size_t n = grid.dims();
  Trajectory t{grid, std::move(times), {}, {}};
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    t.states.push_back(VectorField::zeros(grid, n));
    t.gradients.emplace_back(n, VectorField::zeros(grid, n));
  }
  return t;
}

Trajectory operator+(const Trajectory& a, const Trajectory& b) { return combine(1.0, a, 1.0, b); }
Trajectory operator-(const Trajectory& a, const Trajectory& b) { return combine(1.0, a, -1.0, b); }
Trajectory operator*(double c, const Trajectory& a) { return combine(c, a, 0.0, a); }

double max_divergence(const Trajectory& u) {
  double m = 0.0;
  for (const auto& s : u.states) m = std::max(m, spectral_divergence(s).max_abs());
  return m;
}

double xspace_norm(const Trajectory& u, const SolverConfig& cfg) {
  require(u.size() > 0, ErrorCode::invalid_argument, "xspace_norm: empty trajectory");
  const double a = (1 - cfg.delta()) / 2;
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double t = u.times[i];
    m = std::max(m, std::pow(t, a) * mixed_norm(u.states[i], cfg.q) +
                        std::sqrt(t) * gradient_norm(u.gradients[i], cfg.p));
  }
  return m;
}

double yspace_norm(const Trajectory& u, const SolverConfig& cfg) {
  require(u.size() > 0, ErrorCode::invalid_argument, "yspace_norm: empty trajectory");
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    m = std::max(m, mixed_norm(u.states[i], cfg.p) +
                        std::sqrt(u.times[i]) * gradient_norm(u.gradients[i], cfg.p));
  return m;
}

Trajectory heat_trajectory(const VectorField& a0, const SolverConfig& cfg) {
  require_square(a0, "heat_trajectory");
  const auto& g = a0.grid();
  ModeTable modes(g);
  auto a = spectra_of(a0);
  detail::leray_in_place(modes, a);
  const auto times = cfg.time_nodes();
  Trajectory u{g, times, {}, {}};
  u.states.resize(times.size(), VectorField::zeros(g, g.dims()));
  u.gradients.resize(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    Spectra s(a);
    for (auto& c : s)
      for (std::size_t idx = 0; idx < c.size(); ++idx) c[idx] *= std::exp(-times[i] * modes.xi2(idx));
    auto [state, grad] = realize(g, modes, s);
    u.states[i] = std::move(state);
    u.gradients[i] = std::move(grad);
  });
  return u;
}

VectorField nonlinear_term(const VectorField& u, const std::vector<VectorField>& v_grad) {
  require_square(u, "nonlinear_term");
  const std::size_t n = u.components();
  require(v_grad.size() == n, ErrorCode::dimension_mismatch, "nonlinear_term: gradient needs n rows");
  std::vector<ScalarField> f;
  for (std::size_t i = 0; i < n; ++i) {
    require(v_grad[i].components() == n && v_grad[i].grid() == u.grid(), ErrorCode::dimension_mismatch,
            "nonlinear_term: gradient row " + std::to_string(i + 1) + " does not match the grid");
    auto fi = ScalarField::zeros(u.grid());
    for (std::size_t j = 0; j < n; ++j) fi = fi + pointwise_product(u[j], v_grad[i][j]);
    f.push_back(std::move(fi));
  }
  return leray_project(VectorField(std::move(f)));
}

VectorField duhamel_bilinear(const Trajectory& u, const Trajectory& v, double t,
                             const SolverConfig& cfg) {
  Duhamel d(u, v, cfg);
  return realize(u.grid, d.modes(), d.spectrum(t)).first;
}

Trajectory duhamel_trajectory(const Trajectory& u, const Trajectory& v, const SolverConfig& cfg) {
  Duhamel d(u, v, cfg);
  Trajectory g{u.grid, u.times, {}, {}};
  g.states.resize(u.size(), VectorField::zeros(u.grid, u.grid.dims()));
  g.gradients.resize(u.size());
  parallel_for(u.size(), [&](std::size_t i) {
    auto [state, grad] = realize(u.grid, d.modes(), d.spectrum(u.times[i]));
    g.states[i] = std::move(state);
    g.gradients[i] = std::move(grad);
  });
  return g;
}

double measure_bilinear_constant(const Trajectory& u0, const SolverConfig& cfg) {
  double n2 = x_ratio(u0, cfg);
  for (std::size_t r = 0; r < cfg.probe_fields; ++r) {
    auto rng = SplitMix64::for_case(cfg.probe_seed, r);
    auto w = random_band_limited_vector(u0.grid, 2 + static_cast<int>(r % 3), rng);
    n2 = std::max(n2, x_ratio(heat_trajectory(w, cfg), cfg));
  }
  return n2;
}

SolveResult picard_solve(const VectorField& a0_in, const SolverConfig& cfg,
                         const PicardOptions& options) {
  require_square(a0_in, "picard_solve");
  cfg.validate(a0_in.grid().dims());
  ContractionCertificate cert;
  VectorField a0 = a0_in;
  const double div = spectral_divergence(a0_in).max_abs();
  if (div > 1e-8) {
    a0 = leray_project(a0_in);
    cert.notes.push_back("initial data had divergence " + std::to_string(div) +
                         "; projected before solving");
  }
  auto u0 = heat_trajectory(a0, cfg);
  cert.a0_p_norm = mixed_norm(a0, cfg.p);
  cert.u0_x_norm = xspace_norm(u0, cfg);
  cert.bilinear_constant = cfg.bilinear_constant ? *cfg.bilinear_constant : measure_bilinear_constant(u0, cfg);
  cert.linear_constant = cert.a0_p_norm > 0 ? cert.u0_x_norm / cert.a0_p_norm : 0.0;
  cert.product = 4 * cert.bilinear_constant * cert.u0_x_norm;
  cert.satisfied = cert.product < 1.0;
  if (cfg.smallness_guard)
    require(cert.satisfied, ErrorCode::hypothesis,
            "smallness guard: 4 N2 ||u0||_X = " + std::to_string(cert.product) + " is not below 1");

  Trajectory u = options.zero_initial_guess ? Trajectory::zeros(u0.grid, u0.times) : u0;
  // Beyond this the iteration has clearly left the contraction regime.
  const double blowup = 1e6 * std::max(cert.u0_x_norm, 1e-300);
  while (cert.iterations < cfg.max_iter) {
    auto next = u0 + duhamel_trajectory(u, u, cfg);
    const double d = xspace_norm(next - u, cfg);
    if (!cert.differences.empty() && cert.differences.back() > 0)
      cert.iteration_ratios.push_back(d / cert.differences.back());
    cert.differences.push_back(d);
    ++cert.iterations;
    u = std::move(next);
    if (d <= cfg.picard_tol) {
      cert.converged = true;
      break;
    }
    if (!std::isfinite(d) || d > blowup) {
      cert.notes.push_back("iteration diverged at step " + std::to_string(cert.iterations));
      break;
    }
  }
  cert.solution_x_norm = xspace_norm(u, cfg);
  cert.solution_y_norm = yspace_norm(u, cfg);
  if (std::isfinite(cert.solution_x_norm) && cert.solution_x_norm < blowup)
    cert.residual = xspace_norm(u - u0 - duhamel_trajectory(u, u, cfg), cfg);
  else
    cert.residual = std::numeric_limits<double>::infinity();
  if (!cert.converged)
    cert.notes.push_back("no convergence within " + std::to_string(cfg.max_iter) + " iterations");
  return SolveResult{std::move(u), std::move(u0), std::move(cert)};
}

LocalSolveResult local_solve(const VectorField& a0, const SolverConfig& cfg, double target_product) {
  require_square(a0, "local_solve");
  cfg.validate(a0.grid().dims());
  require(target_product > 0 && target_product < 1, ErrorCode::invalid_argument,
          "local_solve: target product must lie in (0, 1)");
  const VectorField data = spectral_divergence(a0).max_abs() > 1e-8 ? leray_project(a0) : a0;
  const double n2 = cfg.bilinear_constant ? *cfg.bilinear_constant
                                          : measure_bilinear_constant(heat_trajectory(data, cfg), cfg);
  SolverConfig c = cfg;
  c.bilinear_constant = n2;
  std::size_t halvings = 0;
  for (;;) {
    const double prod = 4 * n2 * xspace_norm(heat_trajectory(data, c), c);
    if (prod <= target_product) break;
    c.T /= 2;
    ++halvings;
    require(c.T >= cfg.T * 1e-15, ErrorCode::domain_escape,
            "local_solve: horizon fell below 1e-15 T; the data is too rough for this grid");
  }
  auto result = picard_solve(data, c);
  const double a = result.certificate.a0_p_norm;
  const double y = a > 0 ? result.certificate.solution_y_norm / (a + a * a) : 0.0;
  return LocalSolveResult{std::move(result), c.T, halvings, y};
}

double validate_bilinear_split(const MixedExponents& p, const BilinearSplit& split) {
  const std::size_t n = p.size();
  require(split.alpha.size() == n && split.beta.size() == n && split.gamma.size() == n,
          ErrorCode::dimension_mismatch, "bilinear_probe: splits need one entry per axis");
  double theta = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = split.alpha[k], b = split.beta[k], c = split.gamma[k];
    require(a > 0 && a <= 1 && b > 0 && b <= 1 && c > 0 && c <= 1, ErrorCode::hypothesis,
            axis_str(k) + ": splits must lie in (0, 1]");
    require(!p[k].is_infinite() && p[k].value() > 1, ErrorCode::hypothesis,
            axis_str(k) + ": p must lie in (1, inf)");
    require(c <= a + b && a + b < p[k].value(), ErrorCode::hypothesis,
            axis_str(k) + ": need gamma <= alpha + beta < p");
    theta += (a + b - c) / p[k].value();
  }
  return theta;
}

BilinearProbe bilinear_probe(const Trajectory& u, const Trajectory& v, const SolverConfig& cfg,
                             const BilinearSplit& split) {
  require_compatible(u, v, "bilinear_probe");
  require(cfg.p.size() == u.grid.dims(), ErrorCode::dimension_mismatch,
          "bilinear_probe: p needs one entry per axis");
  const double theta = validate_bilinear_split(cfg.p, split);
  const auto pa = cfg.p.divided_by(split.alpha);
  const auto pb = cfg.p.divided_by(split.beta);
  const auto pg = cfg.p.divided_by(split.gamma);

  const auto G = duhamel_trajectory(u, v, cfg);
  const std::size_t M = u.size();
  std::vector<double> nu(M), ndv(M);
  for (std::size_t i = 0; i < M; ++i) {
    nu[i] = mixed_norm(u.states[i], pa);
    ndv[i] = gradient_norm(v.gradients[i], pb);
  }
  const double a_state = (1 - cfg.delta()) / 2;
  // Linear interpolation of s^a ||.|| in log s; held constant below t_1.
  auto interp = [&](const std::vector<double>& vals, double s, double a) {
    if (s <= u.times.front()) return vals.front();
    s = std::min(s, u.times.back());
    auto l = static_cast<std::size_t>(std::upper_bound(u.times.begin(), u.times.end(), s) - u.times.begin());
    l = std::min(l, M - 1);
    const double t0 = u.times[l - 1], t1 = u.times[l];
    const double w = std::log(s / t0) / std::log(t1 / t0);
    return ((1 - w) * std::pow(t0, a) * vals[l - 1] + w * std::pow(t1, a) * vals[l]) / std::pow(s, a);
  };
  // int_0^t (t-s)^{-e} f(s) ds with t - s = t sigma^{1/(1-e)}.
  auto weighted_integral = [&](double t, double e) {
    const int Kp = 512;
    double sum = 0.0;
    for (int j = 0; j < Kp; ++j) {
      const double sigma = (j + 0.5) / Kp;
      const double s = t - t * std::pow(sigma, 1 / (1 - e));
      sum += interp(nu, s, a_state) * interp(ndv, s, 0.5);
    }
    return std::pow(t, 1 - e) / (1 - e) * sum / Kp;
  };
  BilinearProbe out;
  const bool grad_ok = theta < 1.0;
  for (std::size_t i = 0; i < M; ++i) {
    const double t = u.times[i];
    const double lhs = mixed_norm(G.states[i], pg);
    const double rhs = weighted_integral(t, theta / 2);
    out.times.push_back(t);
    out.lhs.push_back(lhs);
    out.rhs.push_back(rhs);
    out.ratios.push_back(rhs > 0 ? lhs / rhs : 0.0);
    out.max_ratio = std::max(out.max_ratio, out.ratios.back());
    if (grad_ok) {
      const double gl = gradient_norm(G.gradients[i], pg);
      const double gr = weighted_integral(t, (1 + theta) / 2);
      out.grad_lhs.push_back(gl);
      out.grad_rhs.push_back(gr);
      out.grad_ratios.push_back(gr > 0 ? gl / gr : 0.0);
      out.max_ratio = std::max(out.max_ratio, out.grad_ratios.back());
    }
  }
  return out;
}

Trajectory timestep_oracle(const VectorField& a0, const std::vector<double>& nodes, std::size_t steps) {
  require_square(a0, "timestep_oracle");
  require(!nodes.empty() && steps >= 1, ErrorCode::invalid_argument, "timestep_oracle: need nodes and steps");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    require(nodes[i] > 0 && (i == 0 || nodes[i] > nodes[i - 1]), ErrorCode::invalid_argument,
            "timestep_oracle: nodes must be positive and increasing");
  const auto& g = a0.grid();
  const std::size_t n = g.dims();
  ModeTable modes(g);
  const std::size_t N = modes.size();
  std::vector<char> keep(N, 1);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t m = g.count(k);
    for (std::size_t idx = 0; idx < N; ++idx) {
      const std::size_t i = (idx / g.stride(k)) % m;
      const std::size_t kappa = i < m / 2 ? i : m - i;
      if (3 * kappa > m) keep[idx] = 0;
    }
  }
  double hmin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) hmin = std::min(hmin, g.spacing(k));

  auto uhat = spectra_of(a0);
  detail::leray_in_place(modes, uhat);

  double umax = 0.0;
  // -P((u . grad) u), dealiased; also records max |u|.
  auto rhs = [&](const Spectra& s) {
    std::vector<std::vector<double>> u(n, std::vector<double>(N));
    umax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      detail::inverse(g, s[i], u[i]);
      for (double x : u[i]) umax = std::max(umax, std::abs(x));
    }
    Spectra out(n);
    std::vector<double> f(N), d(N);
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(f.begin(), f.end(), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<Complex> c(s[i]);
        for (std::size_t idx = 0; idx < N; ++idx) c[idx] *= Complex(0.0, modes.xi_eff(j, idx));
        detail::inverse(g, std::move(c), d);
        for (std::size_t x = 0; x < N; ++x) f[x] += u[j][x] * d[x];
      }
      out[i] = detail::forward(g, f);
    }
    detail::leray_in_place(modes, out);
    for (auto& c : out)
      for (std::size_t idx = 0; idx < N; ++idx) c[idx] = keep[idx] ? -c[idx] : Complex(0.0);
    return out;
  };
  double kmax2 = 0.0;
  for (std::size_t idx = 0; idx < N; ++idx)
    if (keep[idx]) kmax2 = std::max(kmax2, modes.xi2(idx));

  auto step = [&](double dt) {
    std::vector<double> e1(N), eh(N), ehi(N);
    for (std::size_t idx = 0; idx < N; ++idx) {
      e1[idx] = std::exp(-dt * modes.xi2(idx));
      eh[idx] = std::exp(-0.5 * dt * modes.xi2(idx));
      ehi[idx] = keep[idx] ? std::exp(0.5 * dt * modes.xi2(idx)) : 0.0;
    }
    auto n0 = rhs(uhat);
    require(dt * umax / hmin <= 1.0, ErrorCode::domain_escape,
            "timestep_oracle: CFL number " + std::to_string(dt * umax / hmin) + " exceeds 1");
    Spectra u1(n), u2(n);
    for (std::size_t i = 0; i < n; ++i) {
      u1[i].resize(N);
      for (std::size_t idx = 0; idx < N; ++idx) u1[i][idx] = e1[idx] * (uhat[i][idx] + dt * n0[i][idx]);
    }
    auto n1 = rhs(u1);
    for (std::size_t i = 0; i < n; ++i) {
      u2[i].resize(N);
      for (std::size_t idx = 0; idx < N; ++idx)
        u2[i][idx] = 0.75 * eh[idx] * uhat[i][idx] +
                     0.25 * (eh[idx] * (uhat[i][idx] + dt * n0[i][idx]) + dt * ehi[idx] * n1[i][idx]);
    }
    auto n2 = rhs(u2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t idx = 0; idx < N; ++idx)
        uhat[i][idx] = uhat[i][idx] / 3.0 * e1[idx] + 2.0 / 3.0 * eh[idx] * (u2[i][idx] + dt * n2[i][idx]);
  };

  const double dt_max = nodes.back() / static_cast<double>(steps);
  require(0.5 * dt_max * kmax2 < 600, ErrorCode::domain_escape,
          "timestep_oracle: step too large for the integrating factor on this grid");
  Trajectory out{g, nodes, {}, {}};
  double t = 0.0;
  for (double node : nodes) {
    while (t < node) {
      const double dt = std::min(dt_max, node - t);
      step(dt);
      t = node - t <= dt_max ? node : t + dt;
    }
    auto [state, grad] = realize(g, modes, uhat);
    out.states.push_back(std::move(state));
    out.gradients.push_back(std::move(grad));
  }
  return out;
}

double max_relative_l2(const Trajectory& a, const Trajectory& b) {
  require_compatible(a, b, "max_relative_l2");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double num = 0.0, den = 0.0;
    for (std::size_t c = 0; c < a.states[i].components(); ++c) {
      const auto x = a.states[i][c].samples(), y = b.states[i][c].samples();
      for (std::size_t k = 0; k < x.size(); ++k) {
        num += (x[k] - y[k]) * (x[k] - y[k]);
        den += y[k] * y[k];
      }
    }
    worst = std::max(worst, den > 0 ? std::sqrt(num / den) : std::sqrt(num));
  }
  return worst;
}

std::string ContractionCertificate::to_json() const {
  nlohmann::json j;
  j["u0_x_norm"] = u0_x_norm;
  j["a0_p_norm"] = a0_p_norm;
  j["bilinear_constant"] = bilinear_constant;
  j["linear_constant"] = linear_constant;
  j["product"] = product;
  j["satisfied"] = satisfied;
  j["differences"] = differences;
  j["iteration_ratios"] = iteration_ratios;
  j["iterations"] = iterations;
  j["converged"] = converged;
  j["residual"] = std::isfinite(residual) ? nlohmann::json(residual) : nlohmann::json("inf");
  j["solution_x_norm"] = solution_x_norm;
  j["solution_y_norm"] = solution_y_norm;
  j["notes"] = notes;
  return j.dump(2);
}

std::string BilinearProbe::to_json() const {
  nlohmann::json j;
  j["times"] = times;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["ratios"] = ratios;
  j["grad_lhs"] = grad_lhs;
  j["grad_rhs"] = grad_rhs;
  j["grad_ratios"] = grad_ratios;
  j["max_ratio"] = max_ratio;
  return j.dump(2);
}

}  // namespace mnns
