#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decor/lock.hpp"
#include "decor/models.hpp"
#include "decor/pipeline.hpp"

namespace decor {

enum class ReferenceMode { Srs, Gss };
std::string_view to_string(ReferenceMode m);
std::optional<ReferenceMode> parse_reference_mode(std::string_view text);

struct ReferenceSpec {
  /// Scheme and key size the attacker uses for the references.
  SchemeSpec scheme;
  std::size_t count = 500;
  ReferenceMode mode = ReferenceMode::Srs;
};

/// Worker count from DECOR_THREADS, else the hardware concurrency.
std::size_t worker_count();

/// Runs fn(0..n-1) on worker_count() threads; the first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// SRS re-locks `target` (its key ports demoted to plain inputs); GSS locks
/// the pool circuits round-robin. Reference i uses a seed derived from
/// (seed, i), so the list does not depend on the worker count.
std::vector<LockedCircuit> generate_references(const Circuit& target, const ReferenceSpec& spec,
                                               const std::vector<Circuit>& pool, std::uint64_t seed);

/// One record per key port of every reference, labelled with the reported key.
TrainingSet build_training_set(const std::vector<LockedCircuit>& references, const ExtractorParams& params);

struct KeyPrediction {
  Key key;
  std::vector<double> confidences;
};

KeyPrediction predict_key(const AttackModel& m, const Circuit& target, const ExtractorParams& params);

double compute_kpa(const Key& predicted, const Key& reported);
double compute_bkpa(const Key& predicted, const std::vector<Key>& correct_keys);

struct AttackConfig {
  ReferenceSpec references;
  ExtractorParams features;
  ModelKind model = ModelKind::Frequency;
  MlpOptions mlp;
  std::uint64_t seed = 0;
};

struct AttackReport {
  std::string circuit;
  Scheme scheme = Scheme::Xbi;
  std::size_t key_size = 0;
  std::optional<std::size_t> max_keys;
  std::size_t correct_key_count = 1;
  ReferenceMode mode = ReferenceMode::Srs;
  std::size_t reference_count = 0;
  std::size_t reference_key_size = 0;
  ModelKind model = ModelKind::Frequency;
  ExtractorParams features;
  std::size_t training_records = 0;
  Key predicted;
  std::vector<double> confidences;
  double kpa = 0.0;
  double bkpa = 0.0;
  std::uint64_t seed = 0;
  std::map<std::string, std::uint64_t> stage_seeds;
};

/// References -> training set -> model -> prediction -> scores. Only the
/// netlist of `target` is visible to the attack; its key list is used to
/// score. `max_keys` is recorded for enhanced targets.
AttackReport run_attack(const LockedCircuit& target, const AttackConfig& cfg, const std::vector<Circuit>& pool = {},
                        std::optional<std::size_t> max_keys = std::nullopt);

}  // namespace decor
