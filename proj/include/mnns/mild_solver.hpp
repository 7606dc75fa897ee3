// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

// Mild solutions of the Navier-Stokes system on a periodic box:
//   u = u0 + G(u, u),  u0(t) = e^{t Delta} a0,
//   G(u, v)(t) = -int_0^t e^{(t-s) Delta} P((u(s) . grad) v(s)) ds,
// solved by Picard iteration in the Kato-type space X with norm
//   sup_t t^{(1-delta)/2} ||u(t)||_q + t^{1/2} ||D u(t)||_p.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mnns/exponents.hpp"
#include "mnns/grid.hpp"

namespace mnns {

struct SolverConfig {
  MixedExponents p = MixedExponents::uniform(3, 3.0);
  MixedExponents q = MixedExponents::uniform(3, 6.0);
  double T = 1.0;
  /// Time nodes t_i = T rho^{M-i}, i = 1..M.
  std::size_t M = 32;
  double grading = 0.8;
  /// Midpoint nodes on each half of the Duhamel split.
  std::size_t K = 16;
  double picard_tol = 1e-8;
  std::size_t max_iter = 10;
  bool smallness_guard = true;
  /// Known N2; when unset, picard_solve measures it on the probe suite.
  std::optional<double> bilinear_constant;
  /// Random divergence-free fields added to the N2 probe suite.
  std::size_t probe_fields = 3;
  std::uint64_t probe_seed = 0x6d6e6e73;

  /// delta = sum_k 1/q_k.
  double delta() const;
  std::vector<double> time_nodes() const;
  /// Hypotheses: 2 < p_k < inf, p_k <= q_k < inf, sum 1/p_k = 1 (1e-12),
  /// delta in [0.1, 0.9], plus sane discretization parameters.
  void validate(std::size_t n) const;
};

/// gradients[node][i][j] = d_j u_i.
struct Trajectory {
  TensorGrid grid;
  std::vector<double> times;
  std::vector<VectorField> states;
  std::vector<std::vector<VectorField>> gradients;

  std::size_t size() const { return times.size(); }
  /// Builds gradients spectrally from the states.
  static Trajectory from_states(std::vector<double> times, std::vector<VectorField> states);
  static Trajectory zeros(const TensorGrid& grid, std::vector<double> times);
};

Trajectory operator+(const Trajectory& a, const Trajectory& b);
Trajectory operator-(const Trajectory& a, const Trajectory& b);
Trajectory operator*(double c, const Trajectory& a);

/// Largest spectral divergence over all states.
double max_divergence(const Trajectory& u);

/// max over nodes of t^{(1-delta)/2} ||u||_q + t^{1/2} ||D u||_p. Vector norms
/// are the max over components, ||D u|| the max over the n^2 entries.
double xspace_norm(const Trajectory& u, const SolverConfig& cfg);
/// max over nodes of ||u||_p + t^{1/2} ||D u||_p.
double yspace_norm(const Trajectory& u, const SolverConfig& cfg);

/// e^{t Delta} P a0 at the configured nodes.
Trajectory heat_trajectory(const VectorField& a0, const SolverConfig& cfg);

/// P((u . grad) v); v_grad[i][j] = d_j v_i.
VectorField nonlinear_term(const VectorField& u, const std::vector<VectorField>& v_grad);

/// G(u, v)(t) for one t in (0, T]. Off-node states come from cubic Lagrange
/// interpolation in log t of t^{(1-delta)/2} u and t^{1/2} D v; below t_1
/// they are held at their t_1 values.
VectorField duhamel_bilinear(const Trajectory& u, const Trajectory& v, double t,
                             const SolverConfig& cfg);
/// G(u, v) at every node of u.
Trajectory duhamel_trajectory(const Trajectory& u, const Trajectory& v, const SolverConfig& cfg);

struct ContractionCertificate {
  double u0_x_norm = 0.0;
  double a0_p_norm = 0.0;
  double bilinear_constant = 0.0;  // N2
  double linear_constant = 0.0;    // N1 = ||u0||_X / ||a0||_p
  double product = 0.0;            // 4 N2 ||u0||_X
  bool satisfied = false;
  std::vector<double> differences;  // ||u^{m+1} - u^m||_X
  std::vector<double> iteration_ratios;
  std::size_t iterations = 0;
  bool converged = false;
  double residual = 0.0;  // ||u - u0 - G(u, u)||_X
  double solution_x_norm = 0.0;
  double solution_y_norm = 0.0;
  std::vector<std::string> notes;

  std::string to_json() const;
};

struct SolveResult {
  Trajectory solution;
  Trajectory free_part;  // u0
  ContractionCertificate certificate;
};

struct PicardOptions {
  /// Start from u = 0 instead of u = u0.
  bool zero_initial_guess = false;
};

/// N2 = max ||G(w, w)||_X / ||w||_X^2 over u0 and cfg.probe_fields heat flows
/// of random band-limited divergence-free data.
double measure_bilinear_constant(const Trajectory& u0, const SolverConfig& cfg);

SolveResult picard_solve(const VectorField& a0, const SolverConfig& cfg,
                         const PicardOptions& options = {});

struct LocalSolveResult {
  SolveResult result;
  double T0 = 0.0;
  std::size_t halvings = 0;
  /// Y(u) / (||a0||_p + ||a0||_p^2).
  double y_constant = 0.0;
};

/// Halves T0 from cfg.T until 4 N2 ||u0||_{X(0, T0)} <= target, with N2
/// measured once on (0, cfg.T], then runs picard_solve on (0, T0].
LocalSolveResult local_solve(const VectorField& a0, const SolverConfig& cfg,
                             double target_product = 0.5);

/// Per-axis exponent splits of the bilinear estimate.
struct BilinearSplit {
  std::vector<double> alpha, beta, gamma;
};

struct BilinearProbe {
  std::vector<double> times;
  std::vector<double> lhs, rhs, ratios;
  /// Empty when the gradient variant is not integrable (alpha + beta - gamma >= 1).
  std::vector<double> grad_lhs, grad_rhs, grad_ratios;
  double max_ratio = 0.0;

  std::string to_json() const;
};

/// Checks 0 < alpha, beta, gamma <= 1 and gamma <= alpha + beta < p per axis,
/// with p finite; returns theta.
double validate_bilinear_split(const MixedExponents& p, const BilinearSplit& split);

/// Compares ||G(u, v)(t)||_{p/gamma} with
/// int_0^t (t-s)^{-theta/2} ||u(s)||_{p/alpha} ||D v(s)||_{p/beta} ds,
/// theta = sum_k (alpha_k + beta_k - gamma_k) / p_k, and the gradient
/// variant with (t-s)^{-(1+theta)/2}, at every node of u.
BilinearProbe bilinear_probe(const Trajectory& u, const Trajectory& v, const SolverConfig& cfg,
                             const BilinearSplit& split);

/// Pseudo-spectral reference: integrating factor for Delta, SSP-RK3 on
/// -P((u . grad) u) with 2/3 dealiasing. Uniform steps of T / steps, cut
/// short to land on each node. Throws domain_escape if dt max|u| / h > 1.
Trajectory timestep_oracle(const VectorField& a0, const std::vector<double>& nodes,
                           std::size_t steps);

/// max over nodes of ||a - b||_2 / ||b||_2 (plain L2 over all components).
double max_relative_l2(const Trajectory& a, const Trajectory& b);

/// Directory with meta.json plus state_NNN.mnf1 and gradient_NNN.mnf1.
void write_trajectory(const std::filesystem::path& dir, const Trajectory& u,
                      const SolverConfig& cfg);
Trajectory read_trajectory(const std::filesystem::path& dir);

}  // namespace mnns
