#include <cstdlib>
#include <string_view>

#include "conicgame/kernels.hpp"

namespace conicgame::kernels {

namespace {

constexpr KernelTable kScalar{&scalar::dot, &scalar::axpy, &scalar::gemv, &scalar::gemv_t};
#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2{&avx2::dot, &avx2::axpy, &avx2::gemv, &avx2::gemv_t};
#endif

Isa select() {
  if (const char* env = std::getenv("CONICGAME_KERNELS"); env != nullptr && std::string_view(env) == "scalar") {
    return Isa::Scalar;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& table(Isa isa) {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::Avx2 && cpu_has_avx2()) return kAvx2;
#endif
  (void)isa;
  return kScalar;
}

Isa active_isa() {
  static const Isa isa = select();
  return isa;
}

const KernelTable& active() {
  static const KernelTable& t = table(active_isa());
  return t;
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace conicgame::kernels
