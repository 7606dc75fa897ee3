// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "mnns/error.hpp"
#include "mnns/field_io.hpp"
#include "mnns/mild_solver.hpp"

namespace mnns {
namespace {

std::string node_file(const char* kind, std::size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03zu.mnf1", kind, i);
  return buf;
}

nlohmann::json exponents_json(const MixedExponents& p) {
  auto j = nlohmann::json::array();
  for (const auto& e : p) j.push_back(e.is_infinite() ? nlohmann::json("inf") : nlohmann::json(e.value()));
  return j;
}

}  // namespace

void write_trajectory(const std::filesystem::path& dir, const Trajectory& u, const SolverConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());
  nlohmann::json meta;
  meta["format"] = "mnns-trajectory";
  meta["version"] = 1;
  meta["dims"] = u.grid.dims();
  meta["counts"] = u.grid.counts();
  meta["half_widths"] = u.grid.half_widths();
  meta["times"] = u.times;
  meta["p"] = exponents_json(cfg.p);
  meta["q"] = exponents_json(cfg.q);
  meta["delta"] = cfg.delta();
  meta["gradient_layout"] = "component i*n + j holds d_j u_i";
  std::ofstream(dir / "meta.json") << meta.dump(2) << '\n';
  const std::size_t n = u.grid.dims();
  for (std::size_t i = 0; i < u.size(); ++i) {
    write_mnf1(dir / node_file("state", i), u.states[i]);
    std::vector<ScalarField> flat;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) flat.push_back(u.gradients[i][a][b]);
    write_mnf1(dir / node_file("gradient", i), VectorField(std::move(flat)));
  }
}

Trajectory read_trajectory(const std::filesystem::path& dir) {
  std::ifstream in(dir / "meta.json");
  require(in.good(), ErrorCode::io, "cannot open " + (dir / "meta.json").string());
  nlohmann::json meta;
  try {
    in >> meta;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::io, "bad meta.json: " + std::string(e.what()));
  }
  require(meta.value("format", "") == "mnns-trajectory", ErrorCode::io, "meta.json is not a trajectory");
  const auto times = meta.at("times").get<std::vector<double>>();
  const std::size_t n = meta.at("dims").get<std::size_t>();
  Trajectory u{TensorGrid(meta.at("half_widths").get<std::vector<double>>(),
                          meta.at("counts").get<std::vector<std::size_t>>(), Boundary::periodic),
               times, {}, {}};
  for (std::size_t i = 0; i < times.size(); ++i) {
    auto state = read_mnf1(dir / node_file("state", i), Boundary::periodic);
    require(state.grid() == u.grid && state.components() == n, ErrorCode::io,
            node_file("state", i) + " does not match meta.json");
    auto flat = read_mnf1(dir / node_file("gradient", i), Boundary::periodic);
    require(flat.grid() == u.grid && flat.components() == n * n, ErrorCode::io,
            node_file("gradient", i) + " does not match meta.json");
    std::vector<VectorField> grad;
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<ScalarField> row;
      for (std::size_t b = 0; b < n; ++b) row.push_back(flat[a * n + b]);
      grad.emplace_back(std::move(row));
    }
    u.states.push_back(std::move(state));
    u.gradients.push_back(std::move(grad));
  }
  return u;
}

}  // namespace mnns
