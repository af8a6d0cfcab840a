#include <doctest.h>

#include <cmath>
#include <set>

#include "decor/enhance.hpp"
#include "decor/error.hpp"
#include "decor/lock.hpp"
#include "decor/random.hpp"
#include "decor/simulate.hpp"
#include "helpers.hpp"

using namespace decor;

TEST_CASE("key-set sampling: distinct keys, k* first, n uniform on 2..N") {
  Rng rng(3);
  std::vector<std::uint8_t> k_star{1, 0, 1, 1, 0};
  std::vector<std::size_t> counts(6, 0);
  const std::size_t trials = 8000;
  for (std::size_t t = 0; t < trials; ++t) {
    auto keys = sample_key_bits(5, 5, k_star, rng);
    REQUIRE(keys.size() >= 2);
    REQUIRE(keys.size() <= 5);
    CHECK(keys.front() == k_star);
    CHECK(std::set<std::vector<std::uint8_t>>(keys.begin(), keys.end()).size() == keys.size());
    ++counts[keys.size()];
  }
  double chi2 = 0;
  for (std::size_t n = 2; n <= 5; ++n) {
    const double e = trials / 4.0;
    chi2 += (counts[n] - e) * (counts[n] - e) / e;
  }
  CHECK(chi2 < 16.27);  // 3 dof, p = 0.001
}

TEST_CASE("key-set size is uniform for kappa 8, N 16") {
  Rng rng(8);
  std::vector<std::uint8_t> k_star(8, 1);
  std::vector<std::size_t> counts(17, 0);
  const std::size_t trials = 10000;
  for (std::size_t t = 0; t < trials; ++t) ++counts[sample_key_bits(8, 16, k_star, rng).size()];
  const double p = 1.0 / 15, sigma = std::sqrt(p * (1 - p) / trials);
  for (std::size_t n = 2; n <= 16; ++n) CHECK(std::abs(counts[n] / double(trials) - p) <= 3 * sigma);
  CHECK(counts[0] + counts[1] == 0);
}

TEST_CASE("key-set sampling covers the full space") {
  Rng rng(1);
  auto keys = sample_key_bits(2, 4, {0, 0}, rng);
  CHECK(keys.size() >= 2);
  CHECK_THROWS_AS(sample_key_bits(2, 5, {0, 0}, rng), InvalidArgument);
  CHECK_THROWS_AS(sample_key_bits(3, 1, {0, 0, 0}, rng), InvalidArgument);
  CHECK_THROWS_AS(sample_key_bits(3, 4, {0, 0}, rng), InvalidArgument);
}

namespace {

void check_enhanced(Scheme base, std::uint64_t seed) {
  Circuit c = test::random_circuit(8, 3, 70, seed);
  SchemeParams p;
  p.key_size = 8;
  Rng rng(seed);
  LockResult lr = base == Scheme::Xbi ? lock_xbi(c, p, rng) : lock_sarlock(c, p, rng);
  DecorConfig cfg;
  cfg.max_correct_keys = 8;
  DecorResult d = decor_enhance(lr.locked, lr.key, cfg, rng);
  CHECK(d.reported_key == lr.key);
  CHECK(d.correct_key_list.front() == lr.key);
  CHECK(d.locked.key_ports() == lr.locked.key_ports());
  CHECK(d.locked.scheme() == (base == Scheme::Xbi ? Scheme::DecorXbi : Scheme::DecorSarlock));

  const TruthTable orig = truth_table(c);
  std::set<std::string> listed;
  for (const Key& k : d.correct_key_list) {
    listed.insert(k.str());
    CHECK(truth_table_under_key(d.locked.circuit(), k.bits) == orig);
  }
  for (std::size_t v = 0; v < 256; ++v) {
    std::vector<std::uint8_t> bits(8);
    for (std::size_t i = 0; i < 8; ++i) bits[i] = (v >> i) & 1;
    Key k = make_key(lr.locked.key_ports(), bits);
    if (listed.contains(k.str())) continue;
    CHECK(truth_table_under_key(d.locked.circuit(), bits) == truth_table_under_key(lr.locked.circuit(), bits));
  }
}

}  // namespace

TEST_CASE("enhanced XBI: listed keys unlock, every other key behaves as before") {
  for (std::uint64_t s = 0; s < 4; ++s) check_enhanced(Scheme::Xbi, s);
}

TEST_CASE("enhanced SARLock: listed keys unlock, every other key behaves as before") {
  for (std::uint64_t s = 0; s < 4; ++s) check_enhanced(Scheme::Sarlock, s);
}

TEST_CASE("explicit key lists, including a single extra key") {
  Circuit c = test::random_circuit(8, 3, 70, 9);
  SchemeParams p;
  p.key_size = 6;
  Rng rng(2);
  LockResult lr = lock_xbi(c, p, rng);
  Key extra = complement(lr.key);
  DecorResult d = decor_enhance_with_keys(lr.locked, {lr.key, extra}, {}, rng);
  CHECK(d.correct_key_list.size() == 2);
  CHECK(truth_table_under_key(d.locked.circuit(), extra.bits) == truth_table(c));
  Key other = lr.key;
  other.bits[0] ^= 1;
  CHECK(truth_table_under_key(d.locked.circuit(), other.bits) == truth_table_under_key(lr.locked.circuit(), other.bits));
}

TEST_CASE("enhancement is deterministic in its seed") {
  Circuit c = test::random_circuit(10, 3, 90, 4);
  SchemeParams p;
  p.key_size = 8;
  Rng lock_rng(1);
  LockResult lr = lock_xbi(c, p, lock_rng);
  Rng a(5), b(5);
  DecorResult x = decor_enhance(lr.locked, lr.key, {}, a);
  DecorResult y = decor_enhance(lr.locked, lr.key, {}, b);
  CHECK(structurally_equal(x.locked.circuit(), y.locked.circuit()));
  CHECK(x.correct_key_list == y.correct_key_list);
}

TEST_CASE("enhancement errors") {
  Circuit c = test::random_circuit(8, 3, 60, 1);
  SchemeParams p;
  p.key_size = 4;
  Rng rng(1);
  LockResult lr = lock_xbi(c, p, rng);
  DecorConfig cfg;
  cfg.max_correct_keys = 17;
  CHECK_THROWS_AS(decor_enhance(lr.locked, lr.key, cfg, rng), InvalidArgument);
  cfg.max_correct_keys = 4;
  CHECK_THROWS_AS(decor_enhance(lr.locked, complement(lr.key), cfg, rng), LockError);
  DecorResult d = decor_enhance(lr.locked, lr.key, cfg, rng);
  CHECK_THROWS_AS(decor_enhance(d.locked, lr.key, cfg, rng), LockError);
  CHECK_THROWS_AS(decor_enhance_with_keys(lr.locked, {lr.key}, cfg, rng), InvalidArgument);
}
