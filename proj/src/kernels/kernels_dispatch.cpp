#include <cstdlib>
#include <string>

#include "decor/kernels.hpp"

namespace decor::kernels {

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(DECOR_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = [] {
    if (const char* env = std::getenv("DECOR_ISA"); env != nullptr && std::string(env) == "scalar") return Isa::Scalar;
    return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
  }();
  return isa;
}

void eval_program(Isa isa, const Program& program, std::uint64_t* values, std::size_t stride) {
#if defined(DECOR_HAVE_AVX2)
  if (isa == Isa::Avx2) return avx2::eval_program(program, values, stride);
#endif
  (void)isa;
  scalar::eval_program(program, values, stride);
}

std::size_t first_difference(Isa isa, const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
#if defined(DECOR_HAVE_AVX2)
  if (isa == Isa::Avx2) return avx2::first_difference(a, b, words);
#endif
  (void)isa;
  return scalar::first_difference(a, b, words);
}

std::uint64_t count_differences(Isa isa, const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
#if defined(DECOR_HAVE_AVX2)
  if (isa == Isa::Avx2) return avx2::count_differences(a, b, words);
#endif
  (void)isa;
  return scalar::count_differences(a, b, words);
}

}  // namespace decor::kernels
