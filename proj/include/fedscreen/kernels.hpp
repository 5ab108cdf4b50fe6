#pragma once

// Dense double-precision kernels used by the linear classifier and the
// aggregation step. Every kernel has a scalar reference implementation and,
// where the host supports it, a vectorized variant. The variant is chosen
// once per process from the CPU features (or FEDSCREEN_ISA=scalar|avx2|neon)
// and can be overridden with set_active_isa().
//
// Results are deterministic for a fixed ISA. Reductions (dot) and fused
// multiply-adds (axpy) may differ from the scalar reference in the last
// bits; elementwise kernels without reduction (scale, standardize) are
// bit-identical across variants.

#include <span>
#include <string_view>

namespace fedscreen::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

// True if the variant was compiled in and the running CPU supports it.
bool isa_supported(Isa isa);

Isa active_isa();

// Throws std::invalid_argument if the ISA is not supported.
void set_active_isa(Isa isa);

// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// y *= alpha
void scale(double alpha, std::span<double> y);

// out[i] = (x[i] - mean[i]) / scale[i]
void standardize(std::span<const double> x, std::span<const double> mean,
                 std::span<const double> scale, std::span<double> out);

}  // namespace fedscreen::kernels
