#include <doctest.h>

#include <set>

#include "decor/bench.hpp"
#include "decor/error.hpp"
#include "decor/lock.hpp"
#include "decor/pipeline.hpp"
#include "decor/random.hpp"
#include "decor/simulate.hpp"
#include "helpers.hpp"

using namespace decor;

TEST_CASE("key file round trip and errors") {
  Key k = make_key({"keyinput0", "keyinput1", "keyinput2"}, {1, 0, 1});
  CHECK(k.str() == "101");
  CHECK(parse_key_file(write_key_file(k)) == k);
  CHECK(parse_key_file("# c\nkeyinput0 = 1\r\nkeyinput1=0 # x\n").bits == std::vector<std::uint8_t>{1, 0});
  CHECK_THROWS_AS(parse_key_file("keyinput0=2\n"), ParseError);
  CHECK_THROWS_AS(parse_key_file("keyinput0\n"), ParseError);
  CHECK_THROWS_AS(parse_key_file("# nothing\n"), ParseError);
  std::vector<Key> list{k, complement(k)};
  CHECK(parse_key_list(write_key_list(list)) == list);
  CHECK(hamming_distance(k, complement(k)) == 3);
  CHECK_THROWS_AS(make_key({"keyinput0"}, {1, 0}), InvalidArgument);
}

TEST_CASE("scheme names") {
  for (Scheme s : {Scheme::Xbi, Scheme::Sarlock, Scheme::DecorXbi, Scheme::DecorSarlock})
    CHECK(parse_scheme(to_string(s)) == s);
  CHECK(parse_scheme("decor-xbi") == Scheme::DecorXbi);
  CHECK(base_scheme(Scheme::DecorSarlock) == Scheme::Sarlock);
  CHECK(is_decor(Scheme::DecorXbi));
  CHECK(!is_decor(Scheme::Sarlock));
  CHECK(!parse_scheme("antisat"));
}

TEST_CASE("XBI: gate polarity follows the key bit, correct key unlocks, single flips do not") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Circuit c = test::random_circuit(10, 4, 80, s);
    SchemeParams p;
    p.key_size = 8;
    Rng rng(s);
    LockResult r = lock_xbi(c, p, rng);
    const Circuit& lc = r.locked.circuit();
    CHECK(lc.key_inputs.size() == 8);
    CHECK(lc.gates.size() == c.gates.size() + 8);
    for (std::size_t i = 0; i < 8; ++i) {
      const std::string& port = lc.key_inputs[i];
      int readers = 0;
      for (const auto& g : lc.gates)
        if (std::find(g.fanin.begin(), g.fanin.end(), port) != g.fanin.end()) {
          ++readers;
          CHECK(g.kind == (r.key.bits[i] ? GateKind::Xnor : GateKind::Xor));
        }
      CHECK(readers == 1);
    }
    CHECK(truth_table_under_key(lc, r.key.bits) == truth_table(c));
    CHECK(is_correct_key(r.locked, c, r.key).equivalent());
    for (std::size_t i = 0; i < 8; ++i) {
      Key wrong = r.key;
      wrong.bits[i] ^= 1;
      CHECK(is_correct_key(r.locked, c, wrong).inequivalent());
    }
  }
}

TEST_CASE("XBI on c17 and infeasible key sizes") {
  Circuit c = test::c17();
  SchemeParams p;
  p.key_size = 4;
  Rng rng(1);
  LockResult r = lock_xbi(c, p, rng);
  CHECK(truth_table_under_key(r.locked.circuit(), r.key.bits) == truth_table(c));
  p.key_size = 100;
  CHECK_THROWS_AS(lock_xbi(c, p, rng), LockError);
  p.key_size = 0;
  CHECK_THROWS_AS(lock_xbi(c, p, rng), InvalidArgument);
}

TEST_CASE("SARLock: each wrong key corrupts exactly its own minterm") {
  Circuit c = test::random_circuit(8, 3, 60, 2);
  SchemeParams p;
  p.key_size = 8;
  Rng rng(4);
  LockResult r = lock_sarlock(c, p, rng);
  const TruthTable orig = truth_table(c);
  CHECK(truth_table_under_key(r.locked.circuit(), r.key.bits) == orig);
  Rng pick(5);
  for (int trial = 0; trial < 40; ++trial) {
    Key k = random_key(r.locked.key_ports(), pick);
    if (k == r.key) continue;
    CHECK(truth_table_under_key(r.locked.circuit(), k.bits).differing_rows(orig) == 1);
  }
}

TEST_CASE("SARLock on a subset of inputs") {
  Circuit c = test::random_circuit(10, 3, 60, 3);
  SchemeParams p;
  p.key_size = 4;
  p.sarlock_input_subset = std::vector<std::string>(c.inputs.begin(), c.inputs.begin() + 4);
  Rng rng(1);
  LockResult r = lock_sarlock(c, p, rng);
  Key wrong = complement(r.key);
  CHECK(truth_table_under_key(r.locked.circuit(), wrong.bits).differing_rows(truth_table(c)) == 64);

  p.sarlock_input_subset.reset();
  p.key_size = 12;
  CHECK_THROWS_AS(lock_sarlock(c, p, rng), LockError);
  p.allow_duplicate_inputs = true;
  LockResult dup = lock_sarlock(c, p, rng);
  CHECK(truth_table_under_key(dup.locked.circuit(), dup.key.bits) == truth_table(c));
}

TEST_CASE("locked circuit validation") {
  Circuit c = test::random_circuit(8, 3, 40, 1);
  SchemeParams p;
  p.key_size = 4;
  Rng rng(1);
  LockResult r = lock_xbi(c, p, rng);
  Key wrong = r.key;
  wrong.bits[0] ^= 1;
  CHECK_THROWS_AS(LockedCircuit::verified(r.locked.circuit(), Scheme::Xbi, {wrong}, c), LockError);
  CHECK_THROWS_AS(LockedCircuit::verified(r.locked.circuit(), Scheme::Xbi, {r.key, r.key}, c), LockError);
  LockedCircuit ok = LockedCircuit::verified(r.locked.circuit(), Scheme::Xbi, {r.key}, c);
  CHECK(ok.lists(r.key));
  CHECK(!ok.lists(wrong));
  CHECK(structurally_equal(parse_bench(write_bench(apply_key(ok, r.key))), apply_key(ok, r.key)));
  CHECK(truth_table(apply_key(ok, r.key)) == truth_table(c));
}

TEST_CASE("pipeline is deterministic and verifies every scheme") {
  Circuit c = test::random_circuit(12, 4, 150, 6);
  for (Scheme s : {Scheme::Xbi, Scheme::Sarlock, Scheme::DecorXbi, Scheme::DecorSarlock}) {
    SchemeSpec spec{s, 8, 4, 2};
    LockedCircuit a = lock_with_scheme(c, spec, 17);
    LockedCircuit b = lock_with_scheme(c, spec, 17);
    CHECK(structurally_equal(a.circuit(), b.circuit()));
    CHECK(a.correct_keys() == b.correct_keys());
    CHECK(a.scheme() == s);
    for (const Key& k : a.correct_keys()) CHECK(truth_table_under_key(a.circuit(), k.bits) == truth_table(c));
    if (is_decor(s)) {
      CHECK(a.correct_keys().size() >= 2);
      CHECK(a.correct_keys().size() <= 4);
    } else {
      CHECK(a.correct_keys().size() == 1);
    }
  }
}

TEST_CASE("fan-in cone sizes") {
  auto sizes = fanin_cone_sizes(test::c17());
  REQUIRE(sizes.size() == 2);
  CHECK(sizes[0] == 8);
  CHECK(sizes[1] == 8);
}
