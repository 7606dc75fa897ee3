// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mnns/error.hpp"
#include "mnns/harness.hpp"
#include "mnns/threads.hpp"

using namespace mnns;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / ("mnns_harness_" + name);
  fs::remove_all(d);
  return d;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small(Command c) {
  ExperimentConfig cfg;
  cfg.command = c;
  return cfg;
}

}  // namespace

TEST_CASE("FNV-1a reference vectors") {
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a64_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("config parsing") {
  auto cfg = parse_config(R"(
command = "solve"
seed = 11
[grid]
points = 16
half_width = "pi"
boundary = "periodic"
dims = 3
[exponents]
p = [3, 3, 3]
q = [6.0, 6.0, 6.0]
[solver]
amplitude = 0.01
nodes = 12
)");
  CHECK(cfg.command == Command::solve);
  CHECK(cfg.seed == 11);
  CHECK(cfg.grid.points == std::vector<std::size_t>{16, 16, 16});
  CHECK(cfg.grid.half_widths[2] == doctest::Approx(3.141592653589793));
  CHECK(cfg.grid.boundary == Boundary::periodic);
  CHECK(cfg.p == std::vector<double>{3, 3, 3});
  CHECK(cfg.solver.amplitude == 0.01);
  CHECK(cfg.solver.nodes == 12);
  CHECK(cfg.effective_tolerance() == 1e-6);
  CHECK_NOTHROW(validate(cfg));

  auto inf = parse_config("command = \"scaling-check\"\n[grid]\npoints = [8, 8]\nhalf_width = [2, 3]\n"
                          "[exponents]\np = [\"inf\", inf]\n");
  CHECK(std::isinf(inf.p[0]));
  CHECK(std::isinf(inf.p[1]));
  CHECK(inf.grid.dims() == 2);

  CHECK(code_of([] { parse_config("command = \"solve\"\nbogus = 1\n[grid]\n"); }) == ErrorCode::config);
  CHECK(code_of([] { parse_config("command = \"fly\"\n[grid]\n"); }) == ErrorCode::config);
  CHECK(code_of([] { parse_config("command = \"solve\"\n"); }) == ErrorCode::config);
  CHECK(code_of([] { parse_config("command = \n"); }) == ErrorCode::config);
  CHECK(code_of([] { parse_config("command = \"solve\"\n[grid]\npoints = [8, 8]\nhalf_width = [1, 1, 1]\n"); }) ==
        ErrorCode::config);
  CHECK(code_of([] { parse_config("command = \"solve\"\n[grid]\n[solver]\nnodes = -3\n"); }) == ErrorCode::config);
  CHECK(code_of([] { load_config("/nonexistent/mnns.toml"); }) == ErrorCode::config);
}

TEST_CASE("presets round-trip through TOML") {
  auto names = preset_names();
  for (const char* required : {"tg2d-small", "tg2d-large-local", "aniso-demo", "decay-matrix"})
    CHECK(std::find(names.begin(), names.end(), required) != names.end());
  for (const auto& n : names) {
    CAPTURE(n);
    auto cfg = preset(n);
    CHECK_NOTHROW(validate(cfg));
    auto text = to_toml(cfg);
    auto back = parse_config(text);
    CHECK(to_toml(back) == text);
    CHECK(back.command == cfg.command);
    CHECK(back.p == cfg.p);
  }
  CHECK(code_of([] { preset("tg9d"); }) == ErrorCode::config);

  auto aniso = preset("aniso-demo");
  CHECK(1 / aniso.p[0] + 1 / aniso.p[1] + 1 / aniso.p[2] == doctest::Approx(1.0).epsilon(1e-15));
  // Solver presets are three-dimensional.
  CHECK(preset("tg2d-small").grid.dims() == 3);
  CHECK(preset("tg2d-large-local").solver.scale == 50);
}

TEST_CASE("validation names the offending axis") {
  auto cfg = preset("tg2d-small");
  cfg.p = {3, 3, 4};
  auto msg = message_of([&] { validate(cfg); });
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::hypothesis);
  CHECK(msg.find("axis 3") != std::string::npos);

  cfg = preset("tg2d-small");
  cfg.p = {3, 3, 2};
  CHECK(message_of([&] { validate(cfg); }).find("axis 3") != std::string::npos);

  // n = 2: no pair p_1, p_2 > 2 has 1/p_1 + 1/p_2 = 1.
  cfg = preset("tg2d-small");
  cfg.grid.points = {32, 32};
  cfg.grid.half_widths = {3.14, 3.14};
  cfg.p = {4, 4.0 / 3};
  cfg.q = {8, 8};
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::hypothesis);

  cfg = preset("riesz-suite");
  cfg.grid.boundary = Boundary::truncated;
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::config);
  cfg = preset("riesz-suite");
  cfg.p = {3, 1};
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::hypothesis);
  cfg = preset("riesz-suite");
  cfg.p = {3, 3, 3};
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::dimension_mismatch);

  cfg = preset("bilinear-suite");
  cfg.splits.push_back(BilinearSplit{{0.2, 0.2, 0.2}, {0.2, 0.2, 0.2}, {0.9, 0.9, 0.9}});
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::hypothesis);

  cfg = preset("decay-matrix");
  cfg.continuity_points = 64;
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::config);

  cfg = preset("aniso-demo");
  cfg.p = {8, 2, 8.0 / 3};
  CHECK(code_of([&] { validate(cfg); }) == ErrorCode::hypothesis);
}

TEST_CASE("run writes reports, exit codes follow the checks") {
  auto cfg = small(Command::verify_young);
  cfg.grid = GridSpec{{24, 24}, {4, 4}, Boundary::truncated};
  cfg.cases = 12;
  auto dir = scratch("young");
  std::string log;
  CHECK(run_experiment(cfg, dir, &log) == 0);
  auto j = read_json(dir / "report.json");
  CHECK(j["command"] == "verify-young");
  CHECK(j["passed"] == true);
  CHECK(j["cases"].size() == 12);
  CHECK(j["config"]["seed"] == 7);
  for (const auto& c : j["cases"]) {
    CHECK(c["measured"]["ratio"].get<double>() <= c["predicted"]["bound"].get<double>());
    CHECK(c["inputs_digest"].get<std::string>().size() == 16);
  }
  auto csv = read_text(dir / "report.csv");
  CHECK(csv.rfind("index,label,inputs_digest,kind,quantity,value,pass\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 12);

  // Same seed, same report, whatever the worker count.
  auto strip = [](nlohmann::json r) {
    r.erase("wall_clock_seconds");
    r["config"].erase("output");
    return r.dump();
  };
  const auto before = worker_count();
  set_worker_count(3);
  auto dir2 = scratch("young2");
  CHECK(run_experiment(cfg, dir2, nullptr) == 0);
  set_worker_count(before);
  CHECK(strip(read_json(dir2 / "report.json")) == strip(j));

  cfg.seed = 8;
  auto dir3 = scratch("young3");
  CHECK(run_experiment(cfg, dir3, nullptr) == 0);
  CHECK(read_json(dir3 / "report.json")["cases"][0]["inputs_digest"] != j["cases"][0]["inputs_digest"]);

  // Validation precedes compute: nothing is written on exit 2.
  auto bad = preset("tg2d-small");
  bad.p = {3, 3, 4};
  auto dir4 = scratch("bad");
  log.clear();
  CHECK(run_experiment(bad, dir4, &log) == 2);
  CHECK(!fs::exists(dir4 / "report.json"));
  CHECK(log.find("axis") != std::string::npos);

  // A budget no probe can meet is a numerical failure.
  auto tight = preset("riesz-suite");
  tight.grid.points = {16, 16};
  tight.cases = 4;
  tight.budget = 0.01;
  auto dir5 = scratch("tight");
  log.clear();
  CHECK(run_experiment(tight, dir5, &log) == 1);
  CHECK(read_json(dir5 / "report.json")["passed"] == false);
  CHECK(log.find("FAIL riesz-boundedness") != std::string::npos);
}

TEST_CASE("riesz suite on a small periodic grid") {
  auto cfg = preset("riesz-suite");
  cfg.grid.points = {32, 32};
  cfg.cases = 10;
  auto r = run_suite(cfg);
  CHECK(r.passed());
  CHECK(r.cases.size() == 13);
  CHECK(r.cases.back().label == "taylor-green-pressure");
}

TEST_CASE("scaling suite separates critical and non-critical exponents") {
  auto cfg = preset("scaling-suite");
  cfg.grid = GridSpec{{128, 128}, {8, 8}, Boundary::truncated};
  cfg.p = {3, 1.5};
  cfg.cases = 6;
  auto r = run_suite(cfg);
  CHECK(r.passed());
  std::size_t critical = 0;
  for (const auto& c : r.cases) critical += c.label == "critical";
  CHECK(critical >= 4);
  CHECK(r.cases.size() == 12);
}

TEST_CASE("decay suite with continuity cases") {
  auto cfg = preset("decay-matrix");
  cfg.grid = GridSpec{{128, 128}, {64, 64}, Boundary::truncated};
  cfg.cases = 4;
  auto r = run_suite(cfg);
  for (const auto& c : r.cases)
    if (!c.pass) MESSAGE(c.label << " " << c.inputs);
  CHECK(r.passed());
  CHECK(r.cases.size() == 4 * 2 + 2);
  CHECK(r.cases.back().label == "continuity-anisotropic-gaussian");
}

TEST_CASE("aniso demo: mixed norm settles, plain norm keeps growing") {
  auto cfg = preset("aniso-demo");
  cfg.domain_half_widths = {8, 16, 32};
  auto r = run_suite(cfg);
  CHECK(r.passed());
  const auto& plain = r.cases.back();
  CHECK(plain.label == "plain-growth");
  CHECK(plain.predicted[0].second == doctest::Approx(1.0 / 12));
}

TEST_CASE("small solve end to end") {
  auto cfg = preset("tg2d-small");
  cfg.grid.points = {16, 16, 16};
  cfg.solver.nodes = 16;
  cfg.solver.grading = 0.7;
  cfg.solver.quadrature = 8;
  cfg.solver.save_trajectory = true;
  auto dir = scratch("solve");
  std::string log;
  CHECK(run_experiment(cfg, dir, &log) == 0);
  MESSAGE(log);
  auto j = read_json(dir / "report.json");
  CHECK(j["certificate"]["satisfied"] == true);
  CHECK(j["summary"]["product"].get<double>() == doctest::Approx(0.45).epsilon(1e-9));
  CHECK(fs::exists(dir / "trajectory" / "meta.json"));
}
