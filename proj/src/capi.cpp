// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnns/mnns.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <span>
#include <vector>

#include "mnns/error.hpp"
#include "mnns/harness.hpp"
#include "mnns/mixed_norm.hpp"
#include "mnns/threads.hpp"

struct mnns_config {
  mnns::ExperimentConfig cfg;
};

struct mnns_report {
  mnns::Report report;
};

namespace {

thread_local std::string g_last_error;

mnns_status set_error(mnns_status s, const std::string& what) {
  g_last_error = what;
  return s;
}

template <class Fn>
mnns_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return MNNS_OK;
  } catch (const mnns::Error& e) {
    return set_error(static_cast<mnns_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(MNNS_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(MNNS_E_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

#define MNNS_REQUIRE_ARG(cond, what) \
  if (!(cond)) return set_error(MNNS_E_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* mnns_version(void) { return MNNS_VERSION_STRING; }

const char* mnns_last_error(void) { return g_last_error.c_str(); }

void mnns_string_free(char* s) { std::free(s); }

void mnns_set_threads(size_t n) { mnns::set_worker_count(n); }

size_t mnns_preset_count(void) { return mnns::preset_names().size(); }

const char* mnns_preset_name(size_t i) {
  static const auto names = mnns::preset_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

mnns_status mnns_config_preset(const char* name, mnns_config** out) {
  MNNS_REQUIRE_ARG(name && out, "mnns_config_preset: null argument");
  return guarded([&] { *out = new mnns_config{mnns::preset(name)}; });
}

mnns_status mnns_config_parse(const char* toml_text, mnns_config** out) {
  MNNS_REQUIRE_ARG(toml_text && out, "mnns_config_parse: null argument");
  return guarded([&] { *out = new mnns_config{mnns::parse_config(toml_text)}; });
}

mnns_status mnns_config_load(const char* path, mnns_config** out) {
  MNNS_REQUIRE_ARG(path && out, "mnns_config_load: null argument");
  return guarded([&] { *out = new mnns_config{mnns::load_config(path)}; });
}

void mnns_config_free(mnns_config* cfg) { delete cfg; }

mnns_status mnns_config_set_seed(mnns_config* cfg, uint64_t seed) {
  MNNS_REQUIRE_ARG(cfg, "mnns_config_set_seed: null config");
  cfg->cfg.seed = seed;
  return MNNS_OK;
}

mnns_status mnns_config_set_output(mnns_config* cfg, const char* dir) {
  MNNS_REQUIRE_ARG(cfg && dir, "mnns_config_set_output: null argument");
  return guarded([&] { cfg->cfg.output_dir = dir; });
}

mnns_status mnns_config_output(const mnns_config* cfg, char** out) {
  MNNS_REQUIRE_ARG(cfg && out, "mnns_config_output: null argument");
  return guarded([&] { *out = dup(cfg->cfg.output_dir.string()); });
}

mnns_status mnns_config_to_toml(const mnns_config* cfg, char** out) {
  MNNS_REQUIRE_ARG(cfg && out, "mnns_config_to_toml: null argument");
  return guarded([&] { *out = dup(mnns::to_toml(cfg->cfg)); });
}

mnns_status mnns_config_validate(const mnns_config* cfg) {
  MNNS_REQUIRE_ARG(cfg, "mnns_config_validate: null config");
  return guarded([&] { mnns::validate(cfg->cfg); });
}

int mnns_run(const mnns_config* cfg, const char* out_dir, char** log) {
  if (log) *log = nullptr;
  if (!cfg || !out_dir) {
    set_error(MNNS_E_INVALID_ARGUMENT, "mnns_run: null argument");
    return 2;
  }
  std::string text;
  int code = 2;
  auto s = guarded([&] { code = mnns::run_experiment(cfg->cfg, out_dir, &text); });
  if (s != MNNS_OK) {
    text += std::string("error: ") + g_last_error + "\n";
    code = s == MNNS_E_CONFIG || s == MNNS_E_HYPOTHESIS || s == MNNS_E_DIMENSION_MISMATCH ||
                   s == MNNS_E_INVALID_ARGUMENT
               ? 2
               : 1;
  }
  if (log) {
    try {
      *log = dup(text);
    } catch (const std::bad_alloc&) {
      *log = nullptr;
    }
  }
  return code;
}

mnns_status mnns_run_suite(const mnns_config* cfg, mnns_report** out) {
  MNNS_REQUIRE_ARG(cfg && out, "mnns_run_suite: null argument");
  return guarded([&] { *out = new mnns_report{mnns::run_suite(cfg->cfg)}; });
}

void mnns_report_free(mnns_report* r) { delete r; }

int mnns_report_passed(const mnns_report* r) { return r && r->report.passed() ? 1 : 0; }

size_t mnns_report_case_count(const mnns_report* r) { return r ? r->report.cases.size() : 0; }

mnns_status mnns_report_json(const mnns_report* r, char** out) {
  MNNS_REQUIRE_ARG(r && out, "mnns_report_json: null argument");
  return guarded([&] { *out = dup(r->report.to_json()); });
}

mnns_status mnns_report_csv(const mnns_report* r, char** out) {
  MNNS_REQUIRE_ARG(r && out, "mnns_report_csv: null argument");
  return guarded([&] { *out = dup(r->report.to_csv()); });
}

mnns_status mnns_mixed_norm(const double* samples, size_t dims, const size_t* counts,
                            const double* half_widths, const double* p, double* out) {
  MNNS_REQUIRE_ARG(samples && counts && half_widths && p && out && dims > 0,
                   "mnns_mixed_norm: null argument or zero dims");
  return guarded([&] {
    std::vector<std::size_t> c(counts, counts + dims);
    std::vector<double> L(half_widths, half_widths + dims);
    mnns::TensorGrid g(L, c, mnns::Boundary::truncated);
    std::vector<double> v(samples, samples + g.size());
    *out = mnns::mixed_norm(mnns::ScalarField(g, std::move(v)),
                            mnns::MixedExponents::from_values(std::span<const double>(p, dims)));
  });
}

}  // extern "C"
