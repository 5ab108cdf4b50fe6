#pragma once

#include <cstddef>

// Raw-pointer entry points for each ISA. Lengths are validated by the
// dispatching wrappers in dispatch.cpp.

namespace fedscreen::kernels {

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  void (*scale)(double alpha, double* y, std::size_t n);
  void (*standardize)(const double* x, const double* mean, const double* scale,
                      double* out, std::size_t n);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* y, std::size_t n);
void standardize(const double* x, const double* mean, const double* scale,
                 double* out, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define FEDSCREEN_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* y, std::size_t n);
void standardize(const double* x, const double* mean, const double* scale,
                 double* out, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define FEDSCREEN_HAVE_NEON_KERNELS 1
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* y, std::size_t n);
void standardize(const double* x, const double* mean, const double* scale,
                 double* out, std::size_t n);
}  // namespace neon
#endif

}  // namespace fedscreen::kernels
