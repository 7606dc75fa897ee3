// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

// Exercises the shared library through the C header only.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "mnns/mnns.h"

namespace fs = std::filesystem;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  mnns_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and presets") {
  CHECK(std::strlen(mnns_version()) > 0);
  REQUIRE(mnns_preset_count() >= 4);
  CHECK(mnns_preset_name(mnns_preset_count()) == nullptr);
  bool seen = false;
  for (size_t i = 0; i < mnns_preset_count(); ++i) seen |= std::string(mnns_preset_name(i)) == "tg2d-small";
  CHECK(seen);
}

TEST_CASE("config handles") {
  mnns_config* cfg = nullptr;
  REQUIRE(mnns_config_preset("riesz-suite", &cfg) == MNNS_OK);
  CHECK(mnns_config_validate(cfg) == MNNS_OK);
  CHECK(mnns_config_set_seed(cfg, 3) == MNNS_OK);
  char* text = nullptr;
  REQUIRE(mnns_config_to_toml(cfg, &text) == MNNS_OK);
  auto toml = take(text);
  CHECK(toml.find("seed = 3") != std::string::npos);

  mnns_config* back = nullptr;
  REQUIRE(mnns_config_parse(toml.c_str(), &back) == MNNS_OK);
  REQUIRE(mnns_config_to_toml(back, &text) == MNNS_OK);
  CHECK(take(text) == toml);
  mnns_config_free(back);
  mnns_config_free(cfg);

  mnns_config* none = nullptr;
  CHECK(mnns_config_preset("no-such-preset", &none) == MNNS_E_CONFIG);
  CHECK(none == nullptr);
  CHECK(std::string(mnns_last_error()).find("no-such-preset") != std::string::npos);
  CHECK(mnns_config_parse("command = \"solve\"\nwhat = 1\n", &none) == MNNS_E_CONFIG);
  CHECK(mnns_config_load("/nonexistent/x.toml", &none) == MNNS_E_CONFIG);
  CHECK(mnns_config_preset(nullptr, &none) == MNNS_E_INVALID_ARGUMENT);
  CHECK(mnns_config_validate(nullptr) == MNNS_E_INVALID_ARGUMENT);

  // Hypothesis failures surface with their own code.
  REQUIRE(mnns_config_parse("command = \"solve\"\n[grid]\npoints = 16\ndims = 3\nhalf_width = \"pi\"\n"
                            "boundary = \"periodic\"\n[exponents]\np = [3, 3, 4]\nq = [6, 6, 6]\n",
                            &cfg) == MNNS_OK);
  CHECK(mnns_config_validate(cfg) == MNNS_E_HYPOTHESIS);
  CHECK(std::string(mnns_last_error()).find("axis 3") != std::string::npos);
  mnns_config_free(cfg);
}

TEST_CASE("run through the C API") {
  mnns_config* cfg = nullptr;
  REQUIRE(mnns_config_parse("command = \"verify-young\"\ncases = 6\n[grid]\npoints = [16, 16]\n"
                            "half_width = 4\n",
                            &cfg) == MNNS_OK);
  mnns_report* r = nullptr;
  REQUIRE(mnns_run_suite(cfg, &r) == MNNS_OK);
  CHECK(mnns_report_passed(r) == 1);
  CHECK(mnns_report_case_count(r) == 6);
  char* s = nullptr;
  REQUIRE(mnns_report_json(r, &s) == MNNS_OK);
  CHECK(take(s).find("\"verify-young\"") != std::string::npos);
  REQUIRE(mnns_report_csv(r, &s) == MNNS_OK);
  CHECK(take(s).rfind("index,label", 0) == 0);
  mnns_report_free(r);

  auto dir = fs::temp_directory_path() / "mnns_capi_run";
  fs::remove_all(dir);
  char* log = nullptr;
  mnns_set_threads(2);
  CHECK(mnns_run(cfg, dir.c_str(), &log) == 0);
  mnns_set_threads(0);
  take(log);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "report.csv"));
  CHECK(mnns_run(nullptr, dir.c_str(), nullptr) == 2);
  mnns_config_free(cfg);
}

TEST_CASE("mixed norm through the C API") {
  // Constant 1 on a 2 x 4 box: the iterated norm is 2^{1/2} 4^{1/4} for p = (2, 4).
  const size_t counts[2] = {20, 40};
  const double L[2] = {1, 2};
  std::vector<double> ones(20 * 40, 1.0);
  const double p[2] = {2, 4};
  double v = 0;
  REQUIRE(mnns_mixed_norm(ones.data(), 2, counts, L, p, &v) == MNNS_OK);
  CHECK(v == doctest::Approx(std::sqrt(2.0) * std::pow(4.0, 0.25)).epsilon(1e-12));

  const double pinf[2] = {INFINITY, 2};
  ones[5] = -3;
  REQUIRE(mnns_mixed_norm(ones.data(), 2, counts, L, pinf, &v) == MNNS_OK);
  CHECK(v > 1);

  const double bad[2] = {0.5, 2};
  CHECK(mnns_mixed_norm(ones.data(), 2, counts, L, bad, &v) != MNNS_OK);
  CHECK(mnns_mixed_norm(nullptr, 2, counts, L, p, &v) == MNNS_E_INVALID_ARGUMENT);
}
