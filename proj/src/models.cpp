#include "decor/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "decor/error.hpp"
#include "decor/random.hpp"

namespace decor {

namespace {

constexpr int kModelFormatVersion = 1;

void check_training_set(const TrainingSet& ts) {
  if (ts.records.empty()) throw InvalidArgument("training set is empty");
  const std::size_t len = feature_length(ts.params);
  for (const auto& r : ts.records)
    if (r.feature.size() != len)
      throw InvalidArgument("training record of length " + std::to_string(r.feature.size()) +
                            " does not match the encoding length " + std::to_string(len));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::string write_training_csv(const TrainingSet& ts) {
  const std::size_t len = feature_length(ts.params);
  std::string out = "reference,key_port";
  for (std::size_t i = 0; i < len; ++i) out += ",f" + std::to_string(i);
  out += ",label\n";
  for (const auto& r : ts.records) {
    out += std::to_string(r.source) + "," + r.key_port;
    for (auto c : r.feature) out += "," + std::to_string(c);
    out += "," + std::to_string(r.label) + "\n";
  }
  return out;
}

Prediction majority(const std::array<std::uint64_t, 2>& counts) {
  const std::uint64_t total = counts[0] + counts[1];
  if (total == 0 || counts[0] == counts[1]) return {0, 0.5};
  const std::uint8_t bit = counts[1] > counts[0] ? 1 : 0;
  return {bit, static_cast<double>(counts[bit]) / static_cast<double>(total)};
}

FrequencyModel FrequencyModel::train(const TrainingSet& ts) {
  check_training_set(ts);
  FrequencyModel m;
  for (const auto& r : ts.records) {
    ++m.table_[r.feature][r.label ? 1 : 0];
    ++m.prior_[r.label ? 1 : 0];
  }
  return m;
}

FrequencyModel FrequencyModel::from_parts(std::map<std::vector<std::uint8_t>, std::array<std::uint64_t, 2>> table) {
  FrequencyModel m;
  m.table_ = std::move(table);
  for (const auto& [f, c] : m.table_) {
    m.prior_[0] += c[0];
    m.prior_[1] += c[1];
  }
  return m;
}

Prediction FrequencyModel::predict(const std::vector<std::uint8_t>& feature) const {
  auto it = table_.find(feature);
  return majority(it == table_.end() ? prior_ : it->second);
}

MlpModel MlpModel::from_parts(std::size_t length, std::size_t hidden, std::vector<double> w1, std::vector<double> b1,
                              std::vector<double> w2, double b2) {
  if (w1.size() != hidden * length * kFeatureCodeCount || b1.size() != hidden || w2.size() != hidden)
    throw InvalidArgument("MLP parameter shapes do not match the architecture");
  MlpModel m;
  m.length_ = length;
  m.hidden_ = hidden;
  m.w1_ = std::move(w1);
  m.b1_ = std::move(b1);
  m.w2_ = std::move(w2);
  m.b2_ = b2;
  return m;
}

void MlpModel::hidden_activations(const std::vector<std::uint8_t>& feature, std::vector<double>& h) const {
  if (feature.size() != length_)
    throw InvalidArgument("feature of length " + std::to_string(feature.size()) + " for a model of length " +
                          std::to_string(length_));
  const std::size_t width = length_ * kFeatureCodeCount;
  h.assign(hidden_, 0.0);
  for (std::size_t j = 0; j < hidden_; ++j) {
    const double* row = w1_.data() + j * width;
    double s = b1_[j];
    for (std::size_t p = 0; p < length_; ++p) s += row[p * kFeatureCodeCount + std::min<std::size_t>(feature[p], kFeatureCodeCount - 1)];
    h[j] = std::tanh(s);
  }
}

double MlpModel::probability(const std::vector<std::uint8_t>& feature) const {
  std::vector<double> h;
  hidden_activations(feature, h);
  double z = b2_;
  for (std::size_t j = 0; j < hidden_; ++j) z += w2_[j] * h[j];
  return sigmoid(z);
}

Prediction MlpModel::predict(const std::vector<std::uint8_t>& feature) const {
  const double p = probability(feature);
  if (p > 0.5) return {1, p};
  return {0, 1.0 - p};
}

double MlpModel::accuracy(const TrainingSet& ts) const {
  if (ts.records.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& r : ts.records) hit += predict(r.feature).bit == r.label;
  return static_cast<double>(hit) / static_cast<double>(ts.records.size());
}

MlpModel MlpModel::train(const TrainingSet& ts, const MlpOptions& opt, Rng& rng) {
  check_training_set(ts);
  if (opt.hidden_width == 0) throw InvalidArgument("hidden width must be positive");
  MlpModel m;
  m.length_ = feature_length(ts.params);
  m.hidden_ = opt.hidden_width;
  const std::size_t width = m.length_ * kFeatureCodeCount;
  const double a1 = 1.0 / std::sqrt(static_cast<double>(m.length_));
  const double a2 = 1.0 / std::sqrt(static_cast<double>(m.hidden_));
  m.w1_.resize(m.hidden_ * width);
  for (auto& w : m.w1_) w = (2.0 * rng.unit() - 1.0) * a1;
  m.b1_.assign(m.hidden_, 0.0);
  m.w2_.resize(m.hidden_);
  for (auto& w : m.w2_) w = (2.0 * rng.unit() - 1.0) * a2;
  m.b2_ = 0.0;

  std::vector<std::size_t> order(ts.records.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> h;
  for (std::size_t epoch = 0; epoch < opt.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    double loss = 0.0;
    for (std::size_t idx : order) {
      const auto& r = ts.records[idx];
      m.hidden_activations(r.feature, h);
      double z = m.b2_;
      for (std::size_t j = 0; j < m.hidden_; ++j) z += m.w2_[j] * h[j];
      const double p = sigmoid(z);
      const double y = r.label ? 1.0 : 0.0;
      loss -= y * std::log(std::max(p, 1e-12)) + (1.0 - y) * std::log(std::max(1.0 - p, 1e-12));
      const double dz = p - y;
      for (std::size_t j = 0; j < m.hidden_; ++j) {
        const double dh = dz * m.w2_[j] * (1.0 - h[j] * h[j]);
        m.w2_[j] -= opt.learning_rate * dz * h[j];
        m.b1_[j] -= opt.learning_rate * dh;
        double* row = m.w1_.data() + j * width;
        for (std::size_t q = 0; q < m.length_; ++q)
          row[q * kFeatureCodeCount + std::min<std::size_t>(r.feature[q], kFeatureCodeCount - 1)] -=
              opt.learning_rate * dh;
      }
      m.b2_ -= opt.learning_rate * dz;
    }
    if (!std::isfinite(loss)) throw Error("MLP loss is not finite at epoch " + std::to_string(epoch));
  }
  return m;
}

std::string_view to_string(ModelKind k) { return k == ModelKind::Frequency ? "freq" : "mlp"; }

std::optional<ModelKind> parse_model_kind(std::string_view text) {
  if (text == "freq" || text == "frequency") return ModelKind::Frequency;
  if (text == "mlp") return ModelKind::Mlp;
  return std::nullopt;
}

Prediction AttackModel::predict(const std::vector<std::uint8_t>& feature) const {
  if (kind == ModelKind::Frequency) return frequency.value().predict(feature);
  return mlp.value().predict(feature);
}

AttackModel train_frequency_model(const TrainingSet& ts) {
  AttackModel m;
  m.kind = ModelKind::Frequency;
  m.params = ts.params;
  m.frequency = FrequencyModel::train(ts);
  m.record_count = ts.records.size();
  return m;
}

AttackModel train_mlp(const TrainingSet& ts, const MlpOptions& opt, std::uint64_t seed) {
  Rng rng(seed);
  AttackModel m;
  m.kind = ModelKind::Mlp;
  m.params = ts.params;
  m.seed = seed;
  m.epochs = opt.epochs;
  m.mlp = MlpModel::train(ts, opt, rng);
  m.record_count = ts.records.size();
  return m;
}

namespace {

nlohmann::ordered_json params_json(const ExtractorParams& p) {
  nlohmann::ordered_json j;
  j["encoding"] = std::string(to_string(p.encoding));
  j["depth"] = p.depth;
  j["fanin_bound"] = p.fanin_bound;
  j["hops"] = p.hops;
  j["layer_width"] = p.layer_width;
  return j;
}

ExtractorParams params_from_json(const nlohmann::json& j) {
  ExtractorParams p;
  auto enc = parse_encoding(j.at("encoding").get<std::string>());
  if (!enc) throw InvalidArgument("unknown encoding in model file");
  p.encoding = *enc;
  p.depth = j.at("depth").get<std::size_t>();
  p.fanin_bound = j.at("fanin_bound").get<std::size_t>();
  p.hops = j.at("hops").get<std::size_t>();
  p.layer_width = j.at("layer_width").get<std::size_t>();
  return p;
}

}  // namespace

std::string model_to_json(const AttackModel& m) {
  nlohmann::ordered_json j;
  j["format"] = "decor-attack-model";
  j["version"] = kModelFormatVersion;
  j["kind"] = std::string(to_string(m.kind));
  j["params"] = params_json(m.params);
  j["training"] = {{"seed", m.seed}, {"epochs", m.epochs}, {"records", m.record_count}};
  if (m.kind == ModelKind::Frequency) {
    auto table = nlohmann::ordered_json::array();
    for (const auto& [feature, counts] : m.frequency.value().table())
      table.push_back({{"feature", feature}, {"count0", counts[0]}, {"count1", counts[1]}});
    j["table"] = std::move(table);
  } else {
    const auto& mlp = m.mlp.value();
    j["mlp"] = {{"input_length", mlp.input_length()}, {"hidden_width", mlp.hidden_width()}, {"w1", mlp.w1()},
                {"b1", mlp.b1()},                     {"w2", mlp.w2()},                     {"b2", mlp.b2()}};
  }
  return j.dump(1) + "\n";
}

AttackModel model_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model file: ") + e.what(), 0, 0);
  }
  try {
    if (j.at("format").get<std::string>() != "decor-attack-model") throw InvalidArgument("not a model file");
    if (j.at("version").get<int>() != kModelFormatVersion)
      throw InvalidArgument("unsupported model version " + std::to_string(j.at("version").get<int>()));
    AttackModel m;
    auto kind = parse_model_kind(j.at("kind").get<std::string>());
    if (!kind) throw InvalidArgument("unknown model kind");
    m.kind = *kind;
    m.params = params_from_json(j.at("params"));
    m.seed = j.at("training").at("seed").get<std::uint64_t>();
    m.epochs = j.at("training").at("epochs").get<std::size_t>();
    m.record_count = j.at("training").at("records").get<std::size_t>();
    if (m.kind == ModelKind::Frequency) {
      std::map<std::vector<std::uint8_t>, std::array<std::uint64_t, 2>> table;
      for (const auto& e : j.at("table"))
        table[e.at("feature").get<std::vector<std::uint8_t>>()] = {e.at("count0").get<std::uint64_t>(),
                                                                   e.at("count1").get<std::uint64_t>()};
      m.frequency = FrequencyModel::from_parts(std::move(table));
    } else {
      const auto& p = j.at("mlp");
      m.mlp = MlpModel::from_parts(p.at("input_length").get<std::size_t>(), p.at("hidden_width").get<std::size_t>(),
                                   p.at("w1").get<std::vector<double>>(), p.at("b1").get<std::vector<double>>(),
                                   p.at("w2").get<std::vector<double>>(), p.at("b2").get<double>());
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model file: ") + e.what(), 0, 0);
  }
}

}  // namespace decor
