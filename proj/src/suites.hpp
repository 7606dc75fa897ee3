// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "mnns/harness.hpp"

namespace mnns::detail {

struct SuiteOutput {
  std::vector<CaseRecord> cases;
  Quantities summary;
  std::string certificate_json;
};

/// Runs the command of an already validated config.
SuiteOutput run_command(const ExperimentConfig& cfg);

}  // namespace mnns::detail
