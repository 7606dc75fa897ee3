// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace mnns {

/// Worker threads used for independent work items (Duhamel targets, suite
/// cases). Defaults to the hardware concurrency, capped by MNNS_THREADS;
/// set_worker_count(0) restores that default.
std::size_t worker_count();
void set_worker_count(std::size_t workers);

/// Runs body(i) for i in [0, count). Results must not depend on the order;
/// the first exception thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace mnns
