#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense arithmetic kernels behind the cone and operator algebra. Every entry
// point has a scalar reference implementation and an AVX2/FMA variant; the
// variant is chosen once per process from the CPU features (or forced with
// CONICGAME_KERNELS=scalar).
namespace conicgame::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = M x, M row-major rows x cols
  void (*gemv)(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
  // y = M^T x, M row-major rows x cols
  void (*gemv_t)(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
void gemv_t(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
void gemv_t(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y);
}  // namespace avx2
#endif

bool cpu_has_avx2();

// Table for an explicit ISA. Requesting Avx2 on a machine without it returns
// the scalar table.
const KernelTable& table(Isa isa);

// Table selected for this process.
const KernelTable& active();
Isa active_isa();
std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

}  // namespace conicgame::kernels
