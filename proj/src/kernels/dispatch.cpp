#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "fedscreen/kernels.hpp"
#include "kernels/kernels_impl.hpp"

namespace fedscreen::kernels {
namespace {

constexpr KernelTable kScalarTable{scalar::dot, scalar::axpy, scalar::scale,
                                   scalar::standardize};
#ifdef FEDSCREEN_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2Table{avx2::dot, avx2::axpy, avx2::scale,
                                 avx2::standardize};
#endif
#ifdef FEDSCREEN_HAVE_NEON_KERNELS
constexpr KernelTable kNeonTable{neon::dot, neon::axpy, neon::scale,
                                 neon::standardize};
#endif

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &kScalarTable;
    case Isa::kAvx2:
#ifdef FEDSCREEN_HAVE_AVX2_KERNELS
      return &kAvx2Table;
#else
      return nullptr;
#endif
    case Isa::kNeon:
#ifdef FEDSCREEN_HAVE_NEON_KERNELS
      return &kNeonTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Isa detect_isa() {
  if (const char* forced = std::getenv("FEDSCREEN_ISA")) {
    const std::string name(forced);
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (name == isa_name(isa) && isa_supported(isa)) return isa;
    }
  }
  if (isa_supported(Isa::kAvx2)) return Isa::kAvx2;
  if (isa_supported(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

struct ActiveKernels {
  std::atomic<Isa> isa{detect_isa()};
  std::atomic<const KernelTable*> table{table_for(isa.load())};
};

ActiveKernels& active() {
  static ActiveKernels kernels;
  return kernels;
}

const KernelTable& current() {
  return *active().table.load(std::memory_order_acquire);
}

void require_same_length(std::size_t a, std::size_t b, const char* kernel) {
  if (a != b) {
    throw std::invalid_argument(std::string(kernel) + ": length mismatch " +
                                std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(FEDSCREEN_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#ifdef FEDSCREEN_HAVE_NEON_KERNELS
      return true;  // Advanced SIMD is mandatory on AArch64.
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return active().isa.load(std::memory_order_acquire); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("ISA not supported on this host: " +
                                std::string(isa_name(isa)));
  }
  active().table.store(table_for(isa), std::memory_order_release);
  active().isa.store(isa, std::memory_order_release);
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size(), "dot");
  return current().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require_same_length(x.size(), y.size(), "axpy");
  current().axpy(alpha, x.data(), y.data(), x.size());
}

void scale(double alpha, std::span<double> y) {
  current().scale(alpha, y.data(), y.size());
}

void standardize(std::span<const double> x, std::span<const double> mean,
                 std::span<const double> scale, std::span<double> out) {
  require_same_length(x.size(), mean.size(), "standardize");
  require_same_length(x.size(), scale.size(), "standardize");
  require_same_length(x.size(), out.size(), "standardize");
  current().standardize(x.data(), mean.data(), scale.data(), out.data(),
                        x.size());
}

}  // namespace fedscreen::kernels
