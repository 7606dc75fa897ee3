// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

// MNF1 field files: one text header line
//   MNF1 n m1 .. mn L1 .. Ln components
// then little-endian doubles, component-major, axis n slowest.

#pragma once

#include <filesystem>
#include <iosfwd>

#include "mnns/grid.hpp"

namespace mnns {

void write_mnf1(std::ostream& out, const VectorField& v);
void write_mnf1(const std::filesystem::path& path, const VectorField& v);
void write_mnf1(const std::filesystem::path& path, const ScalarField& f);

/// The boundary flag is not stored in the file; callers say what they expect.
VectorField read_mnf1(std::istream& in, Boundary boundary = Boundary::truncated);
VectorField read_mnf1(const std::filesystem::path& path,
                      Boundary boundary = Boundary::truncated);

}  // namespace mnns
