// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "mnns/error.hpp"

namespace mnns::detail {
namespace {

// The FFTW planner is not reentrant; execution on a plan's own buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

enum class Kind { c2c_forward, c2c_backward, r2c, c2r };

struct Plan {
  fftw_plan plan = nullptr;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_complex* cplx_out = nullptr;

  Plan() = default;
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    if (plan) fftw_destroy_plan(plan);
    fftw_free(real);
    fftw_free(cplx);
    fftw_free(cplx_out);
  }
};

std::size_t total(std::span<const std::size_t> shape) {
  std::size_t n = 1;
  for (auto m : shape) n *= m;
  return n;
}

std::vector<int> fftw_dims(std::span<const std::size_t> shape) {
  std::vector<int> d(shape.rbegin(), shape.rend());
  return d;
}

Plan& plan_for(Kind kind, std::span<const std::size_t> shape) {
  using Key = std::tuple<Kind, std::vector<std::size_t>>;
  thread_local std::map<Key, std::unique_ptr<Plan>> cache;
  Key key{kind, std::vector<std::size_t>(shape.begin(), shape.end())};
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  auto p = std::make_unique<Plan>();
  const auto dims = fftw_dims(shape);
  const int rank = static_cast<int>(dims.size());
  const std::size_t n = total(shape);
  const std::size_t nh = half_spectrum_size(shape);
  std::lock_guard lock(planner_mutex());
  switch (kind) {
    case Kind::c2c_forward:
    case Kind::c2c_backward:
      p->cplx = fftw_alloc_complex(n);
      p->plan = fftw_plan_dft(rank, dims.data(), p->cplx, p->cplx,
                              kind == Kind::c2c_forward ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE);
      break;
    case Kind::r2c:
      p->real = fftw_alloc_real(n);
      p->cplx_out = fftw_alloc_complex(nh);
      p->plan = fftw_plan_dft_r2c(rank, dims.data(), p->real, p->cplx_out, FFTW_ESTIMATE);
      break;
    case Kind::c2r:
      p->real = fftw_alloc_real(n);
      p->cplx = fftw_alloc_complex(nh);
      p->plan = fftw_plan_dft_c2r(rank, dims.data(), p->cplx, p->real, FFTW_ESTIMATE);
      break;
  }
  require(p->plan != nullptr, ErrorCode::internal, "FFTW failed to create a plan");
  auto& ref = *p;
  cache.emplace(std::move(key), std::move(p));
  return ref;
}

}  // namespace

std::size_t half_spectrum_size(std::span<const std::size_t> shape) {
  return total(shape) / shape[0] * (shape[0] / 2 + 1);
}

void fft_c2c(std::span<const std::size_t> shape, std::span<Complex> data, int sign) {
  require(data.size() == total(shape), ErrorCode::internal, "fft buffer size mismatch");
  auto& p = plan_for(sign < 0 ? Kind::c2c_forward : Kind::c2c_backward, shape);
  std::memcpy(p.cplx, data.data(), data.size() * sizeof(Complex));
  fftw_execute(p.plan);
  std::memcpy(static_cast<void*>(data.data()), p.cplx, data.size() * sizeof(Complex));
}

void fft_r2c(std::span<const std::size_t> shape, std::span<const double> in,
             std::span<Complex> out) {
  require(in.size() == total(shape) && out.size() == half_spectrum_size(shape),
          ErrorCode::internal, "fft buffer size mismatch");
  auto& p = plan_for(Kind::r2c, shape);
  std::memcpy(p.real, in.data(), in.size() * sizeof(double));
  fftw_execute(p.plan);
  std::memcpy(static_cast<void*>(out.data()), p.cplx_out, out.size() * sizeof(Complex));
}

void fft_c2r(std::span<const std::size_t> shape, std::span<const Complex> in,
             std::span<double> out) {
  require(out.size() == total(shape) && in.size() == half_spectrum_size(shape),
          ErrorCode::internal, "fft buffer size mismatch");
  auto& p = plan_for(Kind::c2r, shape);
  // c2r destroys its input, which is why the plan owns the buffer.
  std::memcpy(p.cplx, in.data(), in.size() * sizeof(Complex));
  fftw_execute(p.plan);
  std::memcpy(out.data(), p.real, out.size() * sizeof(double));
}

}  // namespace mnns::detail
