#include <doctest.h>

#include "decor/error.hpp"
#include "decor/models.hpp"
#include "decor/random.hpp"

using namespace decor;
using V = std::vector<std::uint8_t>;

namespace {

TrainingSet make_set(std::vector<std::pair<V, int>> rows) {
  TrainingSet ts;
  ts.params = {Encoding::Vector, 1, 1, 2, 8};
  std::size_t i = 0;
  for (auto& [f, l] : rows) ts.records.push_back({i++, "keyinput0", f, static_cast<std::uint8_t>(l)});
  return ts;
}

// Label = 1 when the centre code is XNOR; other positions are noise.
TrainingSet toy(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  TrainingSet ts;
  ts.params = {Encoding::Vector, 1, 1, 2, 8};
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t label = rng.coin();
    V f{static_cast<std::uint8_t>(label ? kXnor : kXor), static_cast<std::uint8_t>(rng.between(1, 9)),
        static_cast<std::uint8_t>(rng.between(1, 10))};
    ts.records.push_back({i, "keyinput0", f, label});
  }
  return ts;
}

}  // namespace

TEST_CASE("majority votes and ties") {
  CHECK(majority({3, 1}).bit == 0);
  CHECK(majority({3, 1}).confidence == doctest::Approx(0.75));
  CHECK(majority({1, 4}).bit == 1);
  CHECK(majority({2, 2}).bit == 0);
  CHECK(majority({2, 2}).confidence == 0.5);
  CHECK(majority({0, 0}).confidence == 0.5);
}

TEST_CASE("frequency model counts exact matches and falls back to the prior") {
  TrainingSet ts = make_set({{{6, 2, 8}, 0}, {{6, 2, 8}, 0}, {{6, 2, 8}, 1}, {{7, 2, 8}, 1}, {{7, 2, 8}, 1}});
  FrequencyModel m = FrequencyModel::train(ts);
  CHECK(m.table().size() == 2);
  CHECK(m.table().at(V{6, 2, 8}) == std::array<std::uint64_t, 2>{2, 1});
  CHECK(m.predict({6, 2, 8}).bit == 0);
  CHECK(m.predict({7, 2, 8}).bit == 1);
  CHECK(m.predict({7, 2, 8}).confidence == 1.0);
  CHECK(m.total() == 5);
  CHECK(m.predict({1, 1, 1}).bit == 1);  // prior 2:3
  CHECK_THROWS_AS(FrequencyModel::train(make_set({})), InvalidArgument);
  CHECK_THROWS_AS(FrequencyModel::train(make_set({{{6, 2}, 0}})), InvalidArgument);
}

TEST_CASE("MLP learns a separable toy task") {
  TrainingSet train = toy(400, 1), test = toy(200, 2);
  MlpOptions opt;
  opt.epochs = 30;
  Rng rng(3);
  MlpModel m = MlpModel::train(train, opt, rng);
  CHECK(m.accuracy(train) >= 0.99);
  CHECK(m.accuracy(test) >= 0.99);
  Prediction p = m.predict({kXnor, 2, 8});
  CHECK(p.bit == 1);
  CHECK(p.confidence >= 0.5);
  CHECK(p.confidence <= 1.0);
  CHECK_THROWS_AS(m.predict({kXnor, 2}), InvalidArgument);
}

TEST_CASE("MLP training is deterministic in the seed") {
  TrainingSet ts = toy(100, 5);
  AttackModel a = train_mlp(ts, {}, 9), b = train_mlp(ts, {}, 9), c = train_mlp(ts, {}, 10);
  CHECK(a.mlp->w1() == b.mlp->w1());
  CHECK(a.mlp->b2() == b.mlp->b2());
  CHECK(a.mlp->w1() != c.mlp->w1());
}

TEST_CASE("model JSON round trip") {
  TrainingSet ts = toy(60, 7);
  AttackModel f = train_frequency_model(ts);
  AttackModel f2 = model_from_json(model_to_json(f));
  CHECK(f2.kind == ModelKind::Frequency);
  CHECK(f2.params == f.params);
  CHECK(f2.frequency->table() == f.frequency->table());
  CHECK(model_to_json(f2) == model_to_json(f));

  AttackModel m = train_mlp(ts, {}, 1);
  AttackModel m2 = model_from_json(model_to_json(m));
  CHECK(m2.kind == ModelKind::Mlp);
  CHECK(model_to_json(m2) == model_to_json(m));
  for (const auto& r : ts.records) CHECK(m2.predict(r.feature).bit == m.predict(r.feature).bit);

  CHECK_THROWS(model_from_json("{}"));
  CHECK_THROWS(model_from_json("not json"));
  std::string bumped = model_to_json(f);
  auto pos = bumped.find("\"version\": 1");
  REQUIRE(pos != std::string::npos);
  bumped.replace(pos, 12, "\"version\": 99");
  CHECK_THROWS_AS(model_from_json(bumped), InvalidArgument);
}

TEST_CASE("training CSV") {
  TrainingSet ts = make_set({{{6, 2, 8}, 0}, {{7, 1, 10}, 1}});
  CHECK(write_training_csv(ts) == "reference,key_port,f0,f1,f2,label\n0,keyinput0,6,2,8,0\n1,keyinput0,7,1,10,1\n");
}
