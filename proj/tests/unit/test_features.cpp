#include <doctest.h>

#include "decor/bench.hpp"
#include "decor/error.hpp"
#include "decor/features.hpp"
#include "decor/lock.hpp"
#include "decor/random.hpp"
#include "helpers.hpp"

using namespace decor;
using V = std::vector<std::uint8_t>;

namespace {

Circuit small_locked() {
  return parse_bench("INPUT(a)\nINPUT(b)\nINPUT(keyinput0)\nOUTPUT(z)\nt = AND(a, b)\nu = XOR(t, keyinput0)\n"
                     "z = NOT(u)\n");
}

}  // namespace

TEST_CASE("feature lengths") {
  CHECK(vector_length(1, 1) == 3);
  CHECK(vector_length(1, 2) == 5);
  CHECK(vector_length(2, 2) == 13);
  CHECK(vector_length(3, 2) == 29);
  CHECK(feature_length({Encoding::Subgraph, 3, 2, 2, 8}) == 17);
  Circuit c = test::random_circuit(10, 4, 100, 1);
  SchemeParams p;
  p.key_size = 6;
  Rng rng(1);
  LockResult r = lock_xbi(c, p, rng);
  FeatureExtractor fx(r.locked.circuit());
  for (const auto& port : r.locked.key_ports())
    for (std::size_t d = 1; d <= 3; ++d)
      for (std::size_t f = 1; f <= 3; ++f) CHECK(fx.vector_feature(port, d, f).size() == vector_length(d, f));
}

TEST_CASE("hand-built vector features") {
  Circuit c = small_locked();
  CHECK(extract_vector_feature(c, "keyinput0", 1, 2) == V{kXor, kAnd, kKeyInput, kNot, kPad});
  CHECK(extract_vector_feature(c, "keyinput0", 2, 2) ==
        V{kXor, kAnd, kKeyInput, kPrimaryInput, kPrimaryInput, kPad, kPad, kNot, kPad, kPrimaryOutput, kPad, kPad, kPad});
  CHECK(extract_vector_feature(c, "keyinput0", 1, 1) == V{kXor, kAnd, kNot});
  CHECK_THROWS_AS(extract_vector_feature(c, "a", 1, 1), InvalidArgument);
  CHECK_THROWS_AS(extract_vector_feature(c, "keyinput0", 0, 1), InvalidArgument);
}

TEST_CASE("key gate is the lowest-code sink") {
  Circuit c = parse_bench("INPUT(a)\nINPUT(keyinput0)\nOUTPUT(y)\nOUTPUT(z)\ny = XNOR(a, keyinput0)\n"
                          "z = AND(a, keyinput0)\n");
  FeatureExtractor fx(c);
  CHECK(fx.graph().name(fx.key_gate("keyinput0")) == "z");
  Circuit lone = parse_bench("INPUT(a)\nINPUT(keyinput0)\nOUTPUT(z)\nz = NOT(a)\n");
  FeatureExtractor fl(lone);
  CHECK(fl.graph().name(fl.key_gate("keyinput0")) == "keyinput0");
  CHECK(fl.vector_feature("keyinput0", 1, 1) == V{kKeyInput, kPad, kPad});
}

TEST_CASE("features are invariant to fan-in order") {
  Circuit a = small_locked();
  Circuit b = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(keyinput0)\nOUTPUT(z)\nt = AND(b, a)\nu = XOR(keyinput0, t)\n"
                          "z = NOT(u)\n");
  for (std::size_t d = 1; d <= 3; ++d)
    CHECK(extract_vector_feature(a, "keyinput0", d, 2) == extract_vector_feature(b, "keyinput0", d, 2));
}

TEST_CASE("subgraph feature layers and serialization") {
  Circuit c = small_locked();
  Subgraph s = extract_subgraph_feature(c, "keyinput0", 2);
  CHECK(s.codes[0] == kXor);
  CHECK(s.names.size() == 6);
  CHECK(serialize_subgraph(s, 2, 3) == V{kXor, kKeyInput, kNot, kAnd, kPrimaryInput, kPrimaryInput, kPad});
  const std::string text = write_subgraph(s);
  CHECK(text.rfind("node 0 6 0", 0) == 0);
  CHECK(text.find("edge") != std::string::npos);
}

TEST_CASE("canonical hash ignores node numbering") {
  Subgraph s;
  s.codes = {kXor, kAnd, kKeyInput, kNot};
  s.distance = {0, 1, 1, 1};
  s.names = {"c", "x", "y", "w"};
  s.edges = {{0, 1}, {0, 2}, {0, 3}};
  Subgraph t;
  t.codes = {kXor, kNot, kAnd, kKeyInput};
  t.distance = {0, 1, 1, 1};
  t.names = {"q", "r", "s", "t"};
  t.edges = {{0, 1}, {0, 2}, {0, 3}};
  CHECK(canonical_hash(s) == canonical_hash(t));
  t.codes[1] = kNand;
  CHECK(canonical_hash(s) != canonical_hash(t));
  Subgraph u = s;
  u.edges.push_back({1, 2});
  CHECK(canonical_hash(s) != canonical_hash(u));
}

TEST_CASE("encodings parse") {
  CHECK(parse_encoding("vector") == Encoding::Vector);
  CHECK(parse_encoding("subgraph") == Encoding::Subgraph);
  CHECK(!parse_encoding("graph"));
  CHECK(feature_code(GateKind::Xnor) == kXnor);
}
