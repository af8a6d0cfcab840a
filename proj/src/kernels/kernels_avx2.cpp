#include <immintrin.h>

#include <bit>

#include "decor/kernels.hpp"

namespace decor::kernels::avx2 {

namespace {

inline __m256i load(const std::uint64_t* p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p)); }
inline void store(std::uint64_t* p, __m256i v) { _mm256_storeu_si256(reinterpret_cast<__m256i*>(p), v); }

template <OpCode Code>
inline __m256i combine(__m256i a, __m256i b) {
  if constexpr (Code == OpCode::And) return _mm256_and_si256(a, b);
  else if constexpr (Code == OpCode::Or) return _mm256_or_si256(a, b);
  else return _mm256_xor_si256(a, b);
}

template <OpCode Code>
void eval_reduce(const GateOp& op, const std::uint32_t* fi, std::uint64_t* values, std::size_t stride) {
  std::uint64_t* dst = values + static_cast<std::size_t>(op.out) * stride;
  const __m256i flip = op.invert ? _mm256_set1_epi64x(-1) : _mm256_setzero_si256();
  if (op.fanin_count == 2) {
    const std::uint64_t* a = values + static_cast<std::size_t>(fi[0]) * stride;
    const std::uint64_t* b = values + static_cast<std::size_t>(fi[1]) * stride;
    for (std::size_t w = 0; w < stride; w += 4)
      store(dst + w, _mm256_xor_si256(combine<Code>(load(a + w), load(b + w)), flip));
    return;
  }
  for (std::size_t w = 0; w < stride; w += 4) {
    __m256i acc = load(values + static_cast<std::size_t>(fi[0]) * stride + w);
    for (std::uint32_t j = 1; j < op.fanin_count; ++j)
      acc = combine<Code>(acc, load(values + static_cast<std::size_t>(fi[j]) * stride + w));
    store(dst + w, _mm256_xor_si256(acc, flip));
  }
}

}  // namespace

void eval_program(const Program& program, std::uint64_t* values, std::size_t stride) {
  for (const GateOp& op : program.ops) {
    const std::uint32_t* fi = program.fanin.data() + op.fanin_begin;
    switch (op.code) {
      case OpCode::And:
        eval_reduce<OpCode::And>(op, fi, values, stride);
        break;
      case OpCode::Or:
        eval_reduce<OpCode::Or>(op, fi, values, stride);
        break;
      case OpCode::Xor:
        eval_reduce<OpCode::Xor>(op, fi, values, stride);
        break;
      case OpCode::Copy: {
        std::uint64_t* dst = values + static_cast<std::size_t>(op.out) * stride;
        const std::uint64_t* src = values + static_cast<std::size_t>(fi[0]) * stride;
        const __m256i flip = op.invert ? _mm256_set1_epi64x(-1) : _mm256_setzero_si256();
        for (std::size_t w = 0; w < stride; w += 4) store(dst + w, _mm256_xor_si256(load(src + w), flip));
        break;
      }
      case OpCode::Zero: {
        std::uint64_t* dst = values + static_cast<std::size_t>(op.out) * stride;
        const __m256i v = op.invert ? _mm256_set1_epi64x(-1) : _mm256_setzero_si256();
        for (std::size_t w = 0; w < stride; w += 4) store(dst + w, v);
        break;
      }
    }
  }
}

std::size_t first_difference(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  std::size_t w = 0;
  for (; w + 4 <= words; w += 4) {
    __m256i d = _mm256_xor_si256(load(a + w), load(b + w));
    if (!_mm256_testz_si256(d, d)) break;
  }
  for (; w < words; ++w)
    if (a[w] != b[w]) return w;
  return words;
}

std::uint64_t count_differences(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  // No AVX2 popcount; xor in vector lanes, count with the scalar instruction.
  std::uint64_t n = 0;
  std::size_t w = 0;
  alignas(32) std::uint64_t lanes[4];
  for (; w + 4 <= words; w += 4) {
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), _mm256_xor_si256(load(a + w), load(b + w)));
    n += static_cast<std::uint64_t>(std::popcount(lanes[0]) + std::popcount(lanes[1]) + std::popcount(lanes[2]) +
                                    std::popcount(lanes[3]));
  }
  for (; w < words; ++w) n += static_cast<std::uint64_t>(std::popcount(a[w] ^ b[w]));
  return n;
}

}  // namespace decor::kernels::avx2
