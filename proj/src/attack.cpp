#include "decor/attack.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "decor/error.hpp"
#include "decor/random.hpp"

namespace decor {

std::string_view to_string(ReferenceMode m) { return m == ReferenceMode::Srs ? "srs" : "gss"; }

std::optional<ReferenceMode> parse_reference_mode(std::string_view text) {
  if (text == "srs") return ReferenceMode::Srs;
  if (text == "gss") return ReferenceMode::Gss;
  return std::nullopt;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("DECOR_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<LockedCircuit> generate_references(const Circuit& target, const ReferenceSpec& spec,
                                               const std::vector<Circuit>& pool, std::uint64_t seed) {
  if (spec.mode == ReferenceMode::Gss && pool.empty()) throw InvalidArgument("GSS mode needs a benchmark pool");
  std::vector<Circuit> bases;
  if (spec.mode == ReferenceMode::Srs) {
    bases.push_back(demote_key_ports(target));
  } else {
    for (const auto& c : pool) bases.push_back(demote_key_ports(c));
  }
  std::vector<std::optional<LockedCircuit>> slots(spec.count);
  parallel_for(spec.count, [&](std::size_t i) {
    const Circuit& base = bases[i % bases.size()];
    slots[i] = lock_with_scheme(base, spec.scheme, derive_seed(seed, "reference", i));
  });
  std::vector<LockedCircuit> out;
  out.reserve(spec.count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

TrainingSet build_training_set(const std::vector<LockedCircuit>& references, const ExtractorParams& params) {
  std::vector<std::vector<FeatureRecord>> per_ref(references.size());
  parallel_for(references.size(), [&](std::size_t r) {
    const auto& ref = references[r];
    FeatureExtractor fx(ref.circuit());
    const Key& key = ref.reported_key();
    for (std::size_t i = 0; i < key.width(); ++i)
      per_ref[r].push_back({r, key.port_names[i], fx.feature(key.port_names[i], params), key.bits[i]});
  });
  TrainingSet ts;
  ts.params = params;
  for (auto& v : per_ref)
    for (auto& rec : v) ts.records.push_back(std::move(rec));
  return ts;
}

KeyPrediction predict_key(const AttackModel& m, const Circuit& target, const ExtractorParams& params) {
  if (!(m.params == params)) throw InvalidArgument("extractor parameters differ from those used in training");
  FeatureExtractor fx(target);
  KeyPrediction p;
  p.key.port_names = target.key_inputs;
  for (const auto& port : target.key_inputs) {
    Prediction bit = m.predict(fx.feature(port, params));
    p.key.bits.push_back(bit.bit);
    p.confidences.push_back(bit.confidence);
  }
  return p;
}

double compute_kpa(const Key& predicted, const Key& reported) {
  if (predicted.width() != reported.width())
    throw InvalidArgument("key widths differ: " + std::to_string(predicted.width()) + " and " +
                          std::to_string(reported.width()));
  if (predicted.width() == 0) throw InvalidArgument("empty key");
  const std::size_t match = predicted.width() - hamming_distance(predicted, reported);
  return 100.0 * static_cast<double>(match) / static_cast<double>(predicted.width());
}

double compute_bkpa(const Key& predicted, const std::vector<Key>& correct_keys) {
  if (correct_keys.empty()) throw InvalidArgument("correct-key list is empty");
  double best = 0.0;
  for (const auto& k : correct_keys) best = std::max(best, compute_kpa(predicted, k));
  return best;
}

AttackReport run_attack(const LockedCircuit& target, const AttackConfig& cfg, const std::vector<Circuit>& pool,
                        std::optional<std::size_t> max_keys) {
  if (cfg.references.count == 0) throw InvalidArgument("reference count must be positive");
  AttackReport rep;
  rep.circuit = target.circuit().name;
  rep.scheme = target.scheme();
  rep.key_size = target.key_size();
  if (is_decor(target.scheme())) rep.max_keys = max_keys;
  rep.correct_key_count = target.correct_keys().size();
  rep.mode = cfg.references.mode;
  rep.reference_count = cfg.references.count;
  rep.reference_key_size = cfg.references.scheme.key_size;
  rep.model = cfg.model;
  rep.features = cfg.features;
  rep.seed = cfg.seed;
  rep.stage_seeds["references"] = derive_seed(cfg.seed, "references");
  rep.stage_seeds["model"] = derive_seed(cfg.seed, "model");

  const auto refs = generate_references(target.circuit(), cfg.references, pool, rep.stage_seeds["references"]);
  const TrainingSet ts = build_training_set(refs, cfg.features);
  rep.training_records = ts.records.size();
  const AttackModel model =
      cfg.model == ModelKind::Frequency ? train_frequency_model(ts) : train_mlp(ts, cfg.mlp, rep.stage_seeds["model"]);
  KeyPrediction p = predict_key(model, target.circuit(), cfg.features);
  rep.predicted = std::move(p.key);
  rep.confidences = std::move(p.confidences);
  rep.kpa = compute_kpa(rep.predicted, target.reported_key());
  rep.bkpa = compute_bkpa(rep.predicted, target.correct_keys());
  return rep;
}

}  // namespace decor
