#include <doctest.h>

#include <vector>

#include "decor/kernels.hpp"
#include "decor/random.hpp"

using namespace decor;
using namespace decor::kernels;

namespace {

struct RandomProgram {
  std::vector<GateOp> ops;
  std::vector<std::uint32_t> fanin;
  std::size_t nodes = 0;
};

RandomProgram make_program(std::size_t sources, std::size_t gates, Rng& rng) {
  RandomProgram p;
  p.nodes = sources + gates;
  for (std::size_t g = 0; g < gates; ++g) {
    const std::uint32_t out = static_cast<std::uint32_t>(sources + g);
    OpCode code = static_cast<OpCode>(rng.below(5));
    std::uint32_t count = code == OpCode::Zero ? 0 : code == OpCode::Copy ? 1 : static_cast<std::uint32_t>(rng.between(2, 5));
    GateOp op{code, rng.coin(), static_cast<std::uint32_t>(p.fanin.size()), count, out};
    for (std::uint32_t j = 0; j < count; ++j) p.fanin.push_back(static_cast<std::uint32_t>(rng.below(out)));
    p.ops.push_back(op);
  }
  return p;
}

}  // namespace

TEST_CASE("scalar kernel truth for each opcode") {
  std::vector<GateOp> ops{{OpCode::And, false, 0, 2, 2}, {OpCode::Or, true, 0, 2, 3}, {OpCode::Xor, false, 0, 2, 4},
                          {OpCode::Copy, true, 0, 1, 5}, {OpCode::Zero, true, 0, 0, 6}};
  std::vector<std::uint32_t> fanin{0, 1};
  std::vector<std::uint64_t> v(7 * 4, 0);
  v[0] = 0b1100;
  v[4] = 0b1010;
  scalar::eval_program({ops, fanin}, v.data(), 4);
  CHECK((v[8] & 0xf) == 0b1000);
  CHECK((v[12] & 0xf) == 0b0001);
  CHECK((v[16] & 0xf) == 0b0110);
  CHECK((v[20] & 0xf) == 0b0011);
  CHECK(v[24] == ~std::uint64_t{0});
}

TEST_CASE("AVX2 kernels equal the scalar reference") {
  if (!isa_available(Isa::Avx2)) {
    MESSAGE("AVX2 unavailable; dispatch falls back to scalar");
    CHECK(active_isa() == Isa::Scalar);
    return;
  }
  Rng rng(42);
  for (std::size_t stride : {4u, 8u, 12u, 64u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t sources = 1 + rng.below(16);
      RandomProgram p = make_program(sources, 1 + rng.below(200), rng);
      std::vector<std::uint64_t> a(p.nodes * stride);
      for (std::size_t i = 0; i < sources * stride; ++i) a[i] = rng.next();
      std::vector<std::uint64_t> b = a;
      eval_program(Isa::Scalar, {p.ops, p.fanin}, a.data(), stride);
      eval_program(Isa::Avx2, {p.ops, p.fanin}, b.data(), stride);
      CHECK(a == b);
    }
  }
}

TEST_CASE("difference kernels agree across ISAs") {
  Rng rng(7);
  for (std::size_t words : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 301u}) {
    std::vector<std::uint64_t> a(words), b(words);
    for (auto& x : a) x = rng.next();
    b = a;
    CHECK(first_difference(Isa::Scalar, a.data(), b.data(), words) == words);
    CHECK(count_differences(Isa::Scalar, a.data(), b.data(), words) == 0);
    if (words) {
      const std::size_t at = rng.below(words);
      b[at] ^= 0x81;
      if (words > 1) b[words - 1] ^= 1ULL << 63;
      CHECK(first_difference(Isa::Scalar, a.data(), b.data(), words) == at);
    }
    if (isa_available(Isa::Avx2)) {
      CHECK(first_difference(Isa::Avx2, a.data(), b.data(), words) ==
            first_difference(Isa::Scalar, a.data(), b.data(), words));
      CHECK(count_differences(Isa::Avx2, a.data(), b.data(), words) ==
            count_differences(Isa::Scalar, a.data(), b.data(), words));
    }
  }
}

TEST_CASE("ISA names") {
  CHECK(to_string(Isa::Scalar) == "scalar");
  CHECK(to_string(Isa::Avx2) == "avx2");
  CHECK(isa_available(Isa::Scalar));
}
