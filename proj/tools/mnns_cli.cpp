// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

// mnns: command-line front end. Talks to libmnns through the C API only.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "mnns/mnns.h"

namespace {

constexpr int kPass = 0;
constexpr int kNumerical = 1;
constexpr int kConfig = 2;

int report_error(const char* what) {
  std::cerr << "mnns: " << what << ": " << mnns_last_error() << "\n";
  return kConfig;
}

int cmd_run(const std::string& path, const std::optional<std::string>& out,
            const std::optional<std::uint64_t>& seed, std::size_t threads, bool quiet) {
  mnns_config* cfg = nullptr;
  if (mnns_config_load(path.c_str(), &cfg) != MNNS_OK) return report_error("config error");
  if (seed) mnns_config_set_seed(cfg, *seed);
  std::string dir;
  if (out) {
    dir = *out;
  } else {
    char* s = nullptr;
    mnns_config_output(cfg, &s);
    dir = s ? s : "";
    mnns_string_free(s);
    if (dir.empty()) dir = "mnns-out";
  }
  if (threads) mnns_set_threads(threads);
  char* log = nullptr;
  const int code = mnns_run(cfg, dir.c_str(), &log);
  if (log && (!quiet || code != kPass)) std::cout << log;
  mnns_string_free(log);
  mnns_config_free(cfg);
  return code;
}

int cmd_preset(const std::string& name) {
  if (name.empty()) {
    for (std::size_t i = 0; i < mnns_preset_count(); ++i) std::cout << mnns_preset_name(i) << "\n";
    return kPass;
  }
  mnns_config* cfg = nullptr;
  if (mnns_config_preset(name.c_str(), &cfg) != MNNS_OK) return report_error("unknown preset");
  char* text = nullptr;
  mnns_config_to_toml(cfg, &text);
  std::cout << (text ? text : "");
  mnns_string_free(text);
  mnns_config_free(cfg);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-norm Navier-Stokes experiment harness"};
  app.set_version_flag("--version", std::string("mnns ") + mnns_version());
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run the experiment described by a TOML file");
  run->add_option("-c,--config", config_path, "Experiment TOML")->required();
  run->add_option("-o,--out", out_dir, "Report directory (overrides the config)");
  run->add_option("-s,--seed", seed, "RNG seed (overrides the config)");
  run->add_option("-j,--threads", threads, "Worker threads (default: MNNS_THREADS or all cores)");
  run->add_flag("-q,--quiet", quiet, "Only print the log on failure");

  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "Print a preset as TOML, or list presets");
  preset->add_option("name", preset_name, "Preset name; omit to list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  if (run->parsed()) {
    const int code = cmd_run(config_path, out_dir, seed, threads, quiet);
    return code == kPass || code == kNumerical ? code : kConfig;
  }
  return cmd_preset(preset_name);
}
