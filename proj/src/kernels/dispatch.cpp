// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The iaoverhead Authors

#include <atomic>
#include <cassert>

#include "iaoh/kernels.hpp"

namespace iaoh::kernels {

namespace {

struct FnTable {
  Isa isa;
  PowerSums (*power_sums)(std::span<const double>, double) noexcept;
  CrossSums (*cross_sums)(std::span<const double>, std::span<const double>, double, double) noexcept;
  void (*squared_magnitudes)(std::span<const std::complex<double>>, std::span<double>) noexcept;
  double (*sum)(std::span<const double>) noexcept;
};

constexpr FnTable kScalar{Isa::scalar, &scalar::power_sums, &scalar::cross_sums, &scalar::squared_magnitudes,
                          &scalar::sum};
#if defined(IAOH_HAVE_AVX2)
constexpr FnTable kAvx2{Isa::avx2, &avx2::power_sums, &avx2::cross_sums, &avx2::squared_magnitudes,
                        &avx2::sum};
#endif
#if defined(IAOH_HAVE_NEON)
constexpr FnTable kNeon{Isa::neon, &neon::power_sums, &neon::cross_sums, &neon::squared_magnitudes,
                        &neon::sum};
#endif

const FnTable* table_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return &kScalar;
    case Isa::avx2:
#if defined(IAOH_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma") ? &kAvx2 : nullptr;
#else
      return nullptr;
#endif
    case Isa::neon:
#if defined(IAOH_HAVE_NEON)
      return &kNeon;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const FnTable* best_table() noexcept {
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (const FnTable* t = table_for(isa)) {
      return t;
    }
  }
  return &kScalar;
}

std::atomic<const FnTable*>& selected() noexcept {
  static std::atomic<const FnTable*> table{best_table()};
  return table;
}

const FnTable& active() noexcept { return *selected().load(std::memory_order_acquire); }

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

Isa active_isa() noexcept { return active().isa; }

bool isa_available(Isa isa) noexcept { return table_for(isa) != nullptr; }

bool force_isa(Isa isa) noexcept {
  const FnTable* t = table_for(isa);
  if (t == nullptr) {
    return false;
  }
  selected().store(t, std::memory_order_release);
  return true;
}

void reset_isa() noexcept { selected().store(best_table(), std::memory_order_release); }

PowerSums power_sums(std::span<const double> x, double shift) { return active().power_sums(x, shift); }

CrossSums cross_sums(std::span<const double> x, std::span<const double> y, double sx, double sy) {
  return active().cross_sums(x, y, sx, sy);
}

void squared_magnitudes(std::span<const std::complex<double>> z, std::span<double> out) {
  assert(out.size() == z.size());
  active().squared_magnitudes(z, out);
}

double sum(std::span<const double> x) { return active().sum(x); }

}  // namespace iaoh::kernels
