#include <doctest.h>

#include "decor/bench.hpp"
#include "decor/error.hpp"
#include "decor/random.hpp"
#include "decor/simulate.hpp"
#include "helpers.hpp"

using namespace decor;

namespace {

bool nand(bool a, bool b) { return !(a && b); }

}  // namespace

TEST_CASE("c17 matches a hand-written model on all 32 rows") {
  Circuit c = test::c17();
  TruthTable tt = truth_table(c);
  REQUIRE(tt.rows() == 32);
  for (std::size_t p = 0; p < 32; ++p) {
    const bool i1 = (p >> 4) & 1, i2 = (p >> 3) & 1, i3 = (p >> 2) & 1, i6 = (p >> 1) & 1, i7 = p & 1;
    const bool n10 = nand(i1, i3), n11 = nand(i3, i6), n16 = nand(i2, n11), n19 = nand(n11, i7);
    CHECK(tt.at(0, p) == nand(n10, n16));
    CHECK(tt.at(1, p) == nand(n16, n19));
    Assignment a{{"1", i1}, {"2", i2}, {"3", i3}, {"6", i6}, {"7", i7}};
    Assignment out = evaluate(c, a);
    CHECK(out.at("22") == tt.at(0, p));
    CHECK(out.at("23") == tt.at(1, p));
  }
}

TEST_CASE("evaluate rejects incomplete or unknown assignments") {
  Circuit c = test::c17();
  CHECK_THROWS(evaluate(c, {{"1", true}}));
  CHECK_THROWS(evaluate(c, {{"1", 1}, {"2", 1}, {"3", 1}, {"6", 1}, {"7", 1}, {"zz", 1}}));
}

TEST_CASE("exhaustive pattern layout") {
  PatternBlock b = exhaustive_patterns(3);
  CHECK(b.sources == 3);
  CHECK(b.patterns == 8);
  for (std::size_t p = 0; p < 8; ++p)
    for (std::size_t j = 0; j < 3; ++j) CHECK((((b.row(j)[0] >> p) & 1) != 0) == (((p >> (2 - j)) & 1) != 0));
  PatternBlock big = exhaustive_patterns(9);
  CHECK(big.patterns == 512);
  CHECK(big.words >= 8);
}

TEST_CASE("bit-parallel simulation agrees with single-pattern evaluation") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Circuit c = test::random_circuit(9, 4, 80, s);
    TruthTable tt = truth_table(c);
    Rng rng(s);
    for (int k = 0; k < 20; ++k) {
      std::size_t row = rng.below(tt.rows());
      Assignment a;
      for (std::size_t j = 0; j < c.inputs.size(); ++j) a[c.inputs[j]] = (row >> (c.inputs.size() - 1 - j)) & 1;
      Assignment out = evaluate(c, a);
      for (std::size_t o = 0; o < c.outputs.size(); ++o) CHECK(out.at(c.outputs[o]) == tt.at(o, row));
    }
  }
}

TEST_CASE("scalar and AVX2 simulators agree") {
  if (!kernels::isa_available(kernels::Isa::Avx2)) return;
  for (std::uint64_t s = 0; s < 10; ++s) {
    Circuit c = test::random_circuit(30, 8, 400, s);
    Rng rng(s + 100);
    PatternBlock p = random_patterns(c.inputs.size(), 1000, rng);
    Simulator a(c, kernels::Isa::Scalar), b(c, kernels::Isa::Avx2);
    CHECK(a.run(p) == b.run(p));
  }
}

TEST_CASE("keyed truth tables and equivalence checking") {
  Circuit c = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(keyinput0)\nOUTPUT(z)\nt = AND(a, b)\nz = XOR(t, keyinput0)\n");
  Circuit ref = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(z)\nz = AND(a, b)\n");
  const std::uint8_t k0[] = {0}, k1[] = {1};
  CHECK(truth_table_under_key(c, k0) == truth_table(ref));
  CHECK(truth_table_under_key(c, k1).differing_rows(truth_table(ref)) == 4);

  EquivalenceChecker eq(c, ref);
  CHECK(eq.input_count() == 2);
  CHECK(eq.check(k0, {}, {}).equivalent());
  Verdict v = eq.check(k1, {}, {});
  CHECK(v.inequivalent());
  CHECK(v.witness.size() == 2);
  CHECK(to_string(v.kind) == "inequivalent");
}

TEST_CASE("sampled equivalence never claims equivalence") {
  Circuit c = test::random_circuit(24, 4, 200, 1);
  EquivalenceChecker eq(c, c);
  OracleConfig cfg;
  cfg.limit = 10;
  cfg.samples = 2000;
  Verdict v = eq.check({}, {}, cfg);
  CHECK(v.kind == Verdict::Kind::Inconclusive);
  CHECK(v.accepted());
}

TEST_CASE("truth table limit") { CHECK_THROWS_AS(truth_table(test::random_circuit(24, 2, 50, 0), 20), InvalidArgument); }

TEST_CASE("observability") {
  Circuit c = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(z)\nt = XOR(a, a)\nu = AND(t, b)\nz = OR(u, a)\n");
  Simulator sim(c);
  PatternBlock p = exhaustive_patterns(2);
  std::vector<std::size_t> nodes{sim.graph().at("t"), sim.graph().at("u"), sim.graph().at("b")};
  auto obs = observability(sim, nodes, p);
  CHECK(obs[0]);
  CHECK(obs[1]);
  CHECK(!obs[2]);
  Circuit masked = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(z)\nw = OR(a, b)\nt = XOR(a, a)\nz = AND(w, t)\n");
  Simulator sm(masked);
  std::vector<std::size_t> w{sm.graph().at("w")};
  CHECK(!observability(sm, w, p)[0]);
}
