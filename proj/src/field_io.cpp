// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include "mnns/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "mnns/error.hpp"

namespace mnns {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void put_le(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  require(in.gcount() == 8, ErrorCode::io, "MNF1 payload is truncated");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t{b[i]} << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_mnf1(std::ostream& out, const VectorField& v) {
  const auto& g = v.grid();
  std::string header = "MNF1 " + std::to_string(g.dims());
  for (auto m : g.counts()) header += " " + std::to_string(m);
  for (auto L : g.half_widths()) header += " " + format_double(L);
  header += " " + std::to_string(v.components()) + "\n";
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const auto& c : v)
    for (double x : c.samples()) put_le(out, x);
  require(out.good(), ErrorCode::io, "failed writing MNF1 data");
}

void write_mnf1(const std::filesystem::path& path, const VectorField& v) {
  std::ofstream out(path, std::ios::binary);
  require(out.is_open(), ErrorCode::io, "cannot open " + path.string() + " for writing");
  write_mnf1(out, v);
}

void write_mnf1(const std::filesystem::path& path, const ScalarField& f) {
  write_mnf1(path, VectorField({f}));
}

VectorField read_mnf1(std::istream& in, Boundary boundary) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::io, "empty MNF1 stream");
  std::istringstream hs(line);
  std::string magic;
  hs >> magic;
  require(magic == "MNF1", ErrorCode::io, "unknown field file magic '" + magic + "'");
  std::size_t n = 0;
  require(static_cast<bool>(hs >> n) && n >= 1 && n <= 8, ErrorCode::io,
          "MNF1 header has a bad dimension");
  std::vector<std::size_t> m(n);
  std::vector<double> L(n);
  for (auto& x : m) require(static_cast<bool>(hs >> x), ErrorCode::io, "MNF1 header is short");
  for (auto& x : L) require(static_cast<bool>(hs >> x), ErrorCode::io, "MNF1 header is short");
  std::size_t comps = 0;
  require(static_cast<bool>(hs >> comps) && comps >= 1, ErrorCode::io,
          "MNF1 header has a bad component count");
  std::string extra;
  require(!(hs >> extra), ErrorCode::io, "MNF1 header has trailing fields");

  TensorGrid grid(L, m, boundary);
  std::vector<ScalarField> out;
  out.reserve(comps);
  for (std::size_t c = 0; c < comps; ++c) {
    std::vector<double> v(grid.size());
    for (auto& x : v) x = get_le(in);
    out.emplace_back(grid, std::move(v));
  }
  return VectorField(std::move(out));
}

VectorField read_mnf1(const std::filesystem::path& path, Boundary boundary) {
  std::ifstream in(path, std::ios::binary);
  require(in.is_open(), ErrorCode::io, "cannot open " + path.string());
  return read_mnf1(in, boundary);
}

}  // namespace mnns
