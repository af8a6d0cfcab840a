#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decor/features.hpp"

namespace decor {

class Rng;

/// One training example: the feature around one key port and its key bit.
struct FeatureRecord {
  std::size_t source = 0;  // reference id
  std::string key_port;
  std::vector<std::uint8_t> feature;
  std::uint8_t label = 0;
};

struct TrainingSet {
  ExtractorParams params;
  std::vector<FeatureRecord> records;
};

/// `reference,key_port,f0,...,f<L-1>,label` with a header row.
std::string write_training_csv(const TrainingSet& ts);

struct Prediction {
  std::uint8_t bit = 0;
  /// Probability assigned to `bit`, in [0.5, 1].
  double confidence = 0.5;
};

/// Exact-match lookup table from feature to label counts.
class FrequencyModel {
 public:
  static FrequencyModel train(const TrainingSet& ts);

  Prediction predict(const std::vector<std::uint8_t>& feature) const;
  const std::map<std::vector<std::uint8_t>, std::array<std::uint64_t, 2>>& table() const { return table_; }
  const std::array<std::uint64_t, 2>& prior() const { return prior_; }
  std::uint64_t total() const { return prior_[0] + prior_[1]; }

  static FrequencyModel from_parts(std::map<std::vector<std::uint8_t>, std::array<std::uint64_t, 2>> table);

 private:
  std::map<std::vector<std::uint8_t>, std::array<std::uint64_t, 2>> table_;
  std::array<std::uint64_t, 2> prior_{0, 0};
};

/// Majority label of counts; ties go to 0 at confidence 0.5.
Prediction majority(const std::array<std::uint64_t, 2>& counts);

struct MlpOptions {
  std::size_t hidden_width = 16;
  std::size_t epochs = 20;
  double learning_rate = 0.05;
};

/// One hidden tanh layer over one-hot gate codes, logistic output.
class MlpModel {
 public:
  static MlpModel train(const TrainingSet& ts, const MlpOptions& opt, Rng& rng);

  double probability(const std::vector<std::uint8_t>& feature) const;
  Prediction predict(const std::vector<std::uint8_t>& feature) const;
  double accuracy(const TrainingSet& ts) const;

  std::size_t input_length() const { return length_; }
  std::size_t hidden_width() const { return hidden_; }
  const std::vector<double>& w1() const { return w1_; }
  const std::vector<double>& b1() const { return b1_; }
  const std::vector<double>& w2() const { return w2_; }
  double b2() const { return b2_; }

  static MlpModel from_parts(std::size_t length, std::size_t hidden, std::vector<double> w1, std::vector<double> b1,
                             std::vector<double> w2, double b2);

 private:
  void hidden_activations(const std::vector<std::uint8_t>& feature, std::vector<double>& h) const;

  std::size_t length_ = 0;
  std::size_t hidden_ = 0;
  std::vector<double> w1_;  // hidden x (length * codes), row-major
  std::vector<double> b1_;
  std::vector<double> w2_;
  double b2_ = 0.0;
};

enum class ModelKind { Frequency, Mlp };
std::string_view to_string(ModelKind k);
std::optional<ModelKind> parse_model_kind(std::string_view text);

struct AttackModel {
  ModelKind kind = ModelKind::Frequency;
  ExtractorParams params;
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  std::size_t record_count = 0;
  std::optional<FrequencyModel> frequency;
  std::optional<MlpModel> mlp;

  Prediction predict(const std::vector<std::uint8_t>& feature) const;
};

AttackModel train_frequency_model(const TrainingSet& ts);
AttackModel train_mlp(const TrainingSet& ts, const MlpOptions& opt, std::uint64_t seed);

/// Versioned JSON; from_json rejects unknown versions.
std::string model_to_json(const AttackModel& m);
AttackModel model_from_json(std::string_view text);

}  // namespace decor
