#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "decor/attack.hpp"
#include "decor/bench.hpp"
#include "decor/bounds.hpp"
#include "decor/enhance.hpp"
#include "decor/error.hpp"
#include "decor/metrics.hpp"
#include "decor/pipeline.hpp"
#include "decor/random.hpp"
#include "decor/report.hpp"

namespace fs = std::filesystem;
using namespace decor;

namespace {

enum Exit : int { kOk = 0, kParse = 1, kInfeasible = 2, kKeyRejected = 3, kIo = 4, kUsage = 64 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KeyRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Files written by a command; removed again unless commit() is reached.
class Outputs {
 public:
  ~Outputs() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
  }
  void write(const fs::path& path, std::string_view text) {
    write_text_file(path, text);
    written_.push_back(path);
  }
  void commit() { committed_ = true; }

 private:
  std::vector<fs::path> written_;
  bool committed_ = false;
};

std::string scheme_header(Scheme s, std::size_t key_size, std::optional<std::size_t> max_keys) {
  std::string h = "# scheme: " + std::string(to_string(s)) + "\n# key-size: " + std::to_string(key_size) + "\n";
  if (max_keys) h += "# max-keys: " + std::to_string(*max_keys) + "\n";
  return h;
}

// Reads `# <tag>: <value>` from the leading comment block, if present.
std::optional<std::string> header_value(const fs::path& path, std::string_view tag) {
  const std::string text = read_text_file(path);
  const std::string prefix = "# " + std::string(tag) + ": ";
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == '#') {
    std::size_t end = text.find('\n', pos);
    std::string line = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return std::nullopt;
}

std::optional<Scheme> header_scheme(const fs::path& path) {
  auto v = header_value(path, "scheme");
  return v ? parse_scheme(*v) : std::nullopt;
}

std::optional<std::size_t> header_max_keys(const fs::path& path) {
  auto v = header_value(path, "max-keys");
  if (!v) return std::nullopt;
  try {
    return std::stoul(*v);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

Scheme require_scheme(const std::string& text) {
  auto s = parse_scheme(text);
  if (!s) throw UsageError("unknown scheme '" + text + "' (expected xbi, sarlock, decor-xbi or decor-sarlock)");
  return *s;
}

ReferenceMode require_mode(const std::string& text) {
  auto m = parse_reference_mode(text);
  if (!m) throw UsageError("unknown reference mode '" + text + "' (expected srs or gss)");
  return *m;
}

std::vector<Circuit> read_pool(const std::vector<std::string>& paths) {
  std::vector<Circuit> pool;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(p))
        if (e.path().extension() == ".bench") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) pool.push_back(read_bench_file(f));
    } else {
      pool.push_back(read_bench_file(p));
    }
  }
  return pool;
}

std::vector<Key> read_keys(const fs::path& path) {
  const std::string text = read_text_file(path);
  auto keys = parse_key_list(text);
  if (keys.empty()) throw ParseError("no keys in " + path.string(), 0, 0);
  return keys;
}

void print_overhead(const OverheadRecord& r) {
  std::printf("overhead %s %s: %zu -> %zu gates (%+.2f%%)\n", r.circuit.c_str(), std::string(to_string(r.scheme)).c_str(),
              r.gates_original, r.gates_locked, r.overhead_percent);
}

// gen-circuit
struct GenCircuitArgs {
  RandomCircuitSpec spec;
  std::string name = "synthetic";
  std::uint64_t seed = 1;
  std::string out;
};

int gen_circuit(const GenCircuitArgs& a) {
  Rng rng(derive_seed(a.seed, "circuit"));
  Outputs out;
  out.write(a.out, write_bench(generate_random_circuit(a.spec, rng, a.name)));
  out.commit();
  return kOk;
}

// lock
struct LockArgs {
  std::string in, out, key_out, keys_out, scheme = "xbi";
  std::size_t key_size = 32, max_keys = 8, passes = 2;
  bool duplicate_inputs = false, normalize = false;
  std::uint64_t seed = 1;
};

int lock(const LockArgs& a) {
  if (a.key_size == 0) throw UsageError("--key-size must be at least 1");
  const Scheme scheme = require_scheme(a.scheme);
  if (is_decor(scheme) && a.max_keys < 2) throw UsageError("--max-keys must be at least 2");
  const Circuit c = read_bench_file(a.in);
  SchemeSpec spec{scheme, a.key_size, a.max_keys, a.passes, a.duplicate_inputs, a.normalize};
  const LockedCircuit lc = lock_with_scheme(c, spec, a.seed);
  std::optional<std::size_t> n;
  if (is_decor(scheme)) n = a.max_keys;
  Outputs out;
  out.write(a.out, scheme_header(scheme, lc.key_size(), n) + write_bench(lc.circuit()));
  out.write(a.key_out, write_key_file(lc.reported_key()));
  if (!a.keys_out.empty()) out.write(a.keys_out, write_key_list(lc.correct_keys()));
  print_overhead(gate_overhead(c, lc));
  out.commit();
  return kOk;
}

// decor
struct DecorArgs {
  std::string in, key, original, out, key_out, keys_out, scheme;
  std::size_t max_keys = 8, passes = 2;
  std::uint64_t seed = 1;
};

int decor_cmd(const DecorArgs& a) {
  if (a.max_keys < 2) throw UsageError("--max-keys must be at least 2");
  const Circuit locked = read_bench_file(a.in);
  if (locked.key_inputs.empty()) throw UsageError(a.in + " has no key inputs");
  Scheme base = Scheme::Xbi;
  if (!a.scheme.empty()) {
    base = require_scheme(a.scheme);
  } else if (auto s = header_scheme(a.in)) {
    base = *s;
  }
  if (is_decor(base)) throw UsageError("input is already enhanced");
  Key k = parse_key_file(read_text_file(a.key));
  if (k.port_names != locked.key_inputs) throw KeyRejected("key file does not name the circuit's key inputs in order");

  Circuit original;
  LockedCircuit lc = LockedCircuit::unchecked(locked, base, {k});
  if (!a.original.empty()) {
    original = read_bench_file(a.original);
    if (!is_correct_key(lc, original, k).accepted()) throw KeyRejected("key does not unlock " + a.original);
  } else {
    original = apply_key(lc, k);
  }
  lc = LockedCircuit::verified(locked, base, {k}, original);

  DecorConfig cfg;
  cfg.max_correct_keys = a.max_keys;
  cfg.seed = a.seed;
  cfg.rewrite_passes = a.passes;
  Rng rng(derive_seed(a.seed, "decor"));
  DecorResult r = decor_enhance(lc, k, cfg, rng);
  Outputs out;
  out.write(a.out, scheme_header(r.locked.scheme(), r.locked.key_size(), a.max_keys) + write_bench(r.locked.circuit()));
  out.write(a.key_out, write_key_file(r.reported_key));
  out.write(a.keys_out, write_key_list(r.correct_key_list));
  print_overhead(gate_overhead(original, r.locked));
  std::printf("correct keys: %zu\n", r.correct_key_list.size());
  out.commit();
  return kOk;
}

// gen-refs
struct RefArgs {
  std::string target, out_dir, scheme = "xbi", mode = "srs";
  std::vector<std::string> pool;
  std::size_t count = 500, key_size = 0, max_keys = 8, passes = 2;
  std::uint64_t seed = 1;
};

ReferenceSpec reference_spec(const std::string& scheme, std::size_t key_size, std::size_t max_keys,
                             std::size_t passes, std::size_t count, const std::string& mode) {
  if (count == 0) throw UsageError("reference count must be at least 1");
  if (key_size == 0) throw UsageError("reference key size must be at least 1");
  ReferenceSpec spec;
  spec.scheme.scheme = require_scheme(scheme);
  spec.scheme.key_size = key_size;
  spec.scheme.max_keys = max_keys;
  spec.scheme.synth_passes = passes;
  spec.count = count;
  spec.mode = require_mode(mode);
  if (is_decor(spec.scheme.scheme) && max_keys < 2) throw UsageError("--max-keys must be at least 2");
  return spec;
}

int gen_refs(const RefArgs& a) {
  const Circuit target = read_bench_file(a.target);
  const std::size_t kappa = a.key_size ? a.key_size : target.key_inputs.size();
  const ReferenceSpec spec = reference_spec(a.scheme, kappa, a.max_keys, a.passes, a.count, a.mode);
  const auto pool = read_pool(a.pool);
  const auto refs = generate_references(target, spec, pool, derive_seed(a.seed, "references"));
  fs::create_directories(a.out_dir);
  Outputs out;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const std::string stem = (fs::path(a.out_dir) / ("ref" + std::to_string(i))).string();
    out.write(stem + ".bench", scheme_header(refs[i].scheme(), refs[i].key_size(), std::nullopt) +
                                   write_bench(refs[i].circuit()));
    out.write(stem + ".key", write_key_file(refs[i].reported_key()));
  }
  std::printf("wrote %zu references to %s\n", refs.size(), a.out_dir.c_str());
  out.commit();
  return kOk;
}

// attack
struct AttackArgs {
  std::string target, keys, original, report, csv, model_out, ref_scheme, mode = "srs", model = "freq",
                                                            feature = "vector", scheme;
  std::vector<std::string> pool;
  std::optional<std::size_t> max_keys;
  std::size_t refs = 500, key_size = 0, passes = 2, depth = 1, fanin = 1, hops = 2, width = 8;
  std::size_t hidden = 16, epochs = 20;
  double learning_rate = 0.05;
  std::uint64_t seed = 1;
};

int attack(const AttackArgs& a) {
  const Circuit target = read_bench_file(a.target);
  if (target.key_inputs.empty()) throw UsageError(a.target + " has no key inputs");
  auto keys = read_keys(a.keys);
  for (const auto& k : keys)
    if (k.port_names != target.key_inputs) throw KeyRejected("key list does not match the target's key inputs");
  Scheme scheme = keys.size() > 1 ? Scheme::DecorXbi : Scheme::Xbi;
  if (!a.scheme.empty()) {
    scheme = require_scheme(a.scheme);
  } else if (auto s = header_scheme(a.target)) {
    scheme = *s;
  }
  const LockedCircuit lc = LockedCircuit::unchecked(target, scheme, keys);
  const std::size_t max_keys = a.max_keys ? *a.max_keys : header_max_keys(a.target).value_or(8);

  AttackConfig cfg;
  const std::size_t kappa = a.key_size ? a.key_size : target.key_inputs.size();
  const std::string ref_scheme = a.ref_scheme.empty() ? std::string(to_string(scheme)) : a.ref_scheme;
  cfg.references = reference_spec(ref_scheme, kappa, max_keys, a.passes, a.refs, a.mode);
  auto enc = parse_encoding(a.feature);
  if (!enc) throw UsageError("unknown feature encoding '" + a.feature + "' (expected vector or subgraph)");
  cfg.features.encoding = *enc;
  cfg.features.depth = a.depth;
  cfg.features.fanin_bound = a.fanin;
  cfg.features.hops = a.hops;
  cfg.features.layer_width = a.width;
  if (a.depth == 0 || a.fanin == 0 || a.hops == 0 || a.width == 0) throw UsageError("feature sizes must be positive");
  auto model = parse_model_kind(a.model);
  if (!model) throw UsageError("unknown model '" + a.model + "' (expected freq or mlp)");
  cfg.model = *model;
  cfg.mlp = {a.hidden, a.epochs, a.learning_rate};
  cfg.seed = a.seed;
  const auto pool = read_pool(a.pool);

  std::optional<std::size_t> n;
  if (is_decor(scheme)) n = max_keys;
  RunRecord run;
  run.attack = run_attack(lc, cfg, pool, n);
  if (!a.original.empty()) {
    run.overhead = gate_overhead(read_bench_file(a.original), lc);
  } else {
    run.overhead.circuit = target.name;
    run.overhead.scheme = scheme;
    run.overhead.gates_locked = two_input_gate_count(target);
  }
  std::printf("%s %s: KPA %.2f%%  BKPA %.2f%%  (%zu references, %zu records)\n", target.name.c_str(),
              std::string(to_string(scheme)).c_str(), run.attack.kpa, run.attack.bkpa, run.attack.reference_count,
              run.attack.training_records);
  Outputs out;
  if (!a.report.empty()) out.write(a.report, report_json({run}));
  if (!a.csv.empty()) out.write(a.csv, report_csv({run}));
  if (!a.model_out.empty()) {
    // Retraining is deterministic, so the saved model is the one that was scored.
    const auto refs = generate_references(target, cfg.references, pool, run.attack.stage_seeds.at("references"));
    const TrainingSet ts = build_training_set(refs, cfg.features);
    const AttackModel m = cfg.model == ModelKind::Frequency
                              ? train_frequency_model(ts)
                              : train_mlp(ts, cfg.mlp, run.attack.stage_seeds.at("model"));
    out.write(a.model_out, model_to_json(m));
  }
  out.commit();
  return kOk;
}

// verify-bounds
struct BoundsArgs {
  std::size_t kappa = 8, max_keys = 8, t = 2, trials = 1000000;
  std::optional<std::size_t> n;
  std::uint64_t seed = 1;
};

int verify_bounds(const BoundsArgs& a) {
  if (a.t == 0) throw UsageError("--t must be at least 1");
  if (a.trials == 0) throw UsageError("--trials must be at least 1");
  if (a.kappa == 0 || a.kappa > 16) throw UsageError("--kappa must be in 1..16");
  if (a.max_keys < 2) throw UsageError("--max-keys must be at least 2");
  if (a.kappa < 63 && a.max_keys > (std::size_t{1} << a.kappa)) throw UsageError("--max-keys exceeds 2^kappa");
  const std::size_t n = a.n.value_or(a.max_keys);
  if (n < 1) throw UsageError("--n must be at least 1");
  bool ok = true;

  const double p6 = same_label_probability(n, a.t);
  if (a.t == 1) {
    std::printf("same label   n=%zu t=1: trivially 1.0\n", n);
  } else {
    Rng rng(derive_seed(a.seed, "same-label"));
    auto est = mc_same_label_given_feature(n, a.t, a.trials, rng);
    const bool pass = est.within(p6);
    ok = ok && pass;
    std::printf("same label   n=%zu t=%zu: theoretical %.6g  empirical %.6g  sigma %.3g  bound 1/2^(t-1) %.6g  %s\n",
                n, a.t, p6, est.value(), est.sigma(p6), 1.0 / static_cast<double>(std::size_t{1} << (a.t - 1)),
                pass ? "PASS" : "FAIL");
  }

  if (a.t == 1) {
    std::printf("same feature kappa=%zu N=%zu t=1: trivially 1.0\n", a.kappa, a.max_keys);
  } else {
    const double exact = same_feature_probability(a.kappa, a.max_keys, a.t);
    const double bound = same_feature_bound(a.kappa, a.max_keys, a.t);
    Rng rng(derive_seed(a.seed, "same-feature"));
    auto est = mc_same_feature_given_label(a.kappa, a.max_keys, a.t, a.trials, rng);
    const bool pass = est.at_most(bound);
    ok = ok && pass;
    std::printf("same feature kappa=%zu N=%zu t=%zu: exact %.6g  bound %.6g  empirical %.6g  sigma %.3g  %s\n",
                a.kappa, a.max_keys, a.t, exact, bound, est.value(), est.sigma(bound), pass ? "PASS" : "FAIL");
  }
  return ok ? kOk : 1;
}

// report
struct ReportArgs {
  std::vector<std::string> inputs;
  std::string json, csv;
};

int report(const ReportArgs& a) {
  std::vector<RunRecord> runs;
  for (const auto& p : a.inputs)
    for (auto& r : parse_report_json(read_text_file(p))) runs.push_back(std::move(r));
  if (a.json.empty() && a.csv.empty()) {
    std::cout << report_csv(runs);
    return kOk;
  }
  Outputs out;
  if (!a.json.empty()) out.write(a.json, report_json(runs));
  if (!a.csv.empty()) out.write(a.csv, report_csv(runs));
  out.commit();
  return kOk;
}

// pca
struct PcaArgs {
  std::string target, out, scheme = "xbi";
  std::size_t refs = 1000, key_size = 16, max_keys = 16, passes = 2, depth = 1, fanin = 1;
  std::uint64_t seed = 1;
};

int pca(const PcaArgs& a) {
  const Circuit target = read_bench_file(a.target);
  const ReferenceSpec spec = reference_spec(a.scheme, a.key_size, a.max_keys, a.passes, a.refs, "srs");
  const auto refs = generate_references(target, spec, {}, derive_seed(a.seed, "references"));
  ExtractorParams params;
  params.depth = a.depth;
  params.fanin_bound = a.fanin;
  const PcaProjection p = pca_top2(build_training_set(refs, params));
  std::vector<double> pc1;
  std::vector<std::uint8_t> labels;
  std::string csv = "pc1,pc2,label\n";
  char buf[96];
  for (const auto& pt : p.points) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%u\n", pt.pc1, pt.pc2, static_cast<unsigned>(pt.label));
    csv += buf;
    pc1.push_back(pt.pc1);
    labels.push_back(pt.label);
  }
  Outputs out;
  out.write(a.out, csv);
  std::printf("explained variance %.4f %.4f; best pc1 threshold accuracy %.2f%%\n", p.explained[0], p.explained[1],
              100.0 * best_threshold_accuracy(pc1, labels));
  out.commit();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Logic locking, multi-key enhancement and learning-attack evaluation"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  GenCircuitArgs gc;
  auto* c_gen = app.add_subcommand("gen-circuit", "Generate a seeded synthetic combinational circuit");
  c_gen->add_option("out", gc.out, "Output BENCH file")->required();
  c_gen->add_option("--inputs", gc.spec.inputs, "Primary inputs")->check(CLI::PositiveNumber);
  c_gen->add_option("--outputs", gc.spec.outputs, "Primary outputs")->check(CLI::PositiveNumber);
  c_gen->add_option("--gates", gc.spec.gates, "Gate count")->check(CLI::PositiveNumber);
  c_gen->add_option("--locality", gc.spec.locality, "Fan-in locality window")->check(CLI::PositiveNumber);
  c_gen->add_option("--name", gc.name, "Circuit name");
  c_gen->add_option("--seed", gc.seed, "Master seed");

  LockArgs la;
  auto* c_lock = app.add_subcommand("lock", "Lock a circuit");
  c_lock->add_option("in", la.in, "Input BENCH file")->required();
  c_lock->add_option("out", la.out, "Locked BENCH file")->required();
  c_lock->add_option("--key-out", la.key_out, "Reported key file")->required();
  c_lock->add_option("--keys-out", la.keys_out, "Full correct-key list");
  c_lock->add_option("--scheme", la.scheme, "xbi, sarlock, decor-xbi or decor-sarlock");
  c_lock->add_option("--key-size", la.key_size, "Key bits");
  c_lock->add_option("--max-keys", la.max_keys, "N for enhanced schemes");
  c_lock->add_option("--passes", la.passes, "Rewrite sweeps");
  c_lock->add_flag("--duplicate-inputs", la.duplicate_inputs, "SARLock: reuse inputs when key bits exceed inputs");
  c_lock->add_flag("--normalize", la.normalize, "Decompose wide gates first");
  c_lock->add_option("--seed", la.seed, "Master seed");

  DecorArgs da;
  auto* c_decor = app.add_subcommand("decor", "Enhance a locked circuit with multiple correct keys");
  c_decor->add_option("in", da.in, "Locked BENCH file")->required();
  c_decor->add_option("out", da.out, "Enhanced BENCH file")->required();
  c_decor->add_option("--key", da.key, "Correct key of the input")->required();
  c_decor->add_option("--original", da.original, "Unlocked circuit used to verify the key (without it the key is taken as correct)");
  c_decor->add_option("--scheme", da.scheme, "Base scheme of the input (default: from its header, else xbi)");
  c_decor->add_option("--max-keys", da.max_keys, "Maximum number of correct keys N");
  c_decor->add_option("--passes", da.passes, "Rewrite sweeps (at least 2 are run)");
  c_decor->add_option("--key-out", da.key_out, "Reported key file")->required();
  c_decor->add_option("--keys-out", da.keys_out, "Secret full key list")->required();
  c_decor->add_option("--seed", da.seed, "Master seed");

  RefArgs ra;
  auto* c_refs = app.add_subcommand("gen-refs", "Generate labelled reference netlists");
  c_refs->add_option("target", ra.target, "Target BENCH file")->required();
  c_refs->add_option("--out-dir", ra.out_dir, "Directory for ref<i>.bench / ref<i>.key")->required();
  c_refs->add_option("--scheme", ra.scheme, "Reference locking scheme");
  c_refs->add_option("--key-size", ra.key_size, "Reference key bits (default: target key size)");
  c_refs->add_option("--max-keys", ra.max_keys, "N for enhanced schemes");
  c_refs->add_option("--passes", ra.passes, "Rewrite sweeps");
  c_refs->add_option("--count", ra.count, "Number of references");
  c_refs->add_option("--mode", ra.mode, "srs or gss");
  c_refs->add_option("--pool", ra.pool, "GSS benchmark files or directories");
  c_refs->add_option("--seed", ra.seed, "Master seed");

  AttackArgs aa;
  auto* c_attack = app.add_subcommand("attack", "Train on references and predict the target key");
  c_attack->add_option("target", aa.target, "Locked target BENCH file")->required();
  c_attack->add_option("--keys", aa.keys, "Correct keys of the target, reported key first (for scoring)")->required();
  c_attack->add_option("--scheme", aa.scheme, "Target scheme (default: from its header)");
  c_attack->add_option("--original", aa.original, "Unlocked circuit, for the overhead columns");
  c_attack->add_option("--refs", aa.refs, "Number of references");
  c_attack->add_option("--ref-scheme", aa.ref_scheme, "Scheme used for the references (default: the target scheme)");
  c_attack->add_option("--key-size", aa.key_size, "Reference key bits (default: target key size)");
  c_attack->add_option("--max-keys", aa.max_keys, "N for enhanced schemes (default: from the target header, else 8)");
  c_attack->add_option("--passes", aa.passes, "Rewrite sweeps for the references");
  c_attack->add_option("--mode", aa.mode, "srs or gss");
  c_attack->add_option("--pool", aa.pool, "GSS benchmark files or directories");
  c_attack->add_option("--model", aa.model, "freq or mlp");
  c_attack->add_option("--feature", aa.feature, "vector or subgraph");
  c_attack->add_option("--depth", aa.depth, "Vector levels per side");
  c_attack->add_option("--fanin-bound", aa.fanin, "Vector children kept per node");
  c_attack->add_option("--hops", aa.hops, "Subgraph radius");
  c_attack->add_option("--layer-width", aa.width, "Subgraph codes kept per layer");
  c_attack->add_option("--hidden", aa.hidden, "MLP hidden width");
  c_attack->add_option("--epochs", aa.epochs, "MLP epochs");
  c_attack->add_option("--learning-rate", aa.learning_rate, "MLP learning rate");
  c_attack->add_option("--report", aa.report, "JSON report");
  c_attack->add_option("--csv", aa.csv, "CSV report");
  c_attack->add_option("--model-out", aa.model_out, "Trained model as JSON");
  c_attack->add_option("--seed", aa.seed, "Master seed");

  BoundsArgs ba;
  auto* c_bounds = app.add_subcommand("verify-bounds", "Monte-Carlo check of the label and feature collision bounds");
  c_bounds->add_option("--kappa", ba.kappa, "Key bits");
  c_bounds->add_option("--max-keys", ba.max_keys, "Maximum number of correct keys N");
  c_bounds->add_option("--n", ba.n, "Correct keys for the label check (default N)");
  c_bounds->add_option("--t", ba.t, "Number of references compared");
  c_bounds->add_option("--trials", ba.trials, "Monte-Carlo trials");
  c_bounds->add_option("--seed", ba.seed, "Master seed");

  ReportArgs rpa;
  auto* c_report = app.add_subcommand("report", "Merge JSON reports and emit JSON/CSV");
  c_report->add_option("inputs", rpa.inputs, "JSON reports")->required();
  c_report->add_option("--json", rpa.json, "Merged JSON output");
  c_report->add_option("--csv", rpa.csv, "CSV output (stdout when neither output is given)");

  PcaArgs pa;
  auto* c_pca = app.add_subcommand("pca", "Project reference features on their top two principal components");
  c_pca->add_option("target", pa.target, "Circuit to re-lock")->required();
  c_pca->add_option("out", pa.out, "CSV of pc1,pc2,label")->required();
  c_pca->add_option("--scheme", pa.scheme, "Reference scheme");
  c_pca->add_option("--refs", pa.refs, "Number of references");
  c_pca->add_option("--key-size", pa.key_size, "Key bits");
  c_pca->add_option("--max-keys", pa.max_keys, "N for enhanced schemes");
  c_pca->add_option("--passes", pa.passes, "Rewrite sweeps");
  c_pca->add_option("--depth", pa.depth, "Vector levels per side");
  c_pca->add_option("--fanin-bound", pa.fanin, "Vector children kept per node");
  c_pca->add_option("--seed", pa.seed, "Master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*c_gen) return gen_circuit(gc);
    if (*c_lock) return lock(la);
    if (*c_decor) return decor_cmd(da);
    if (*c_refs) return gen_refs(ra);
    if (*c_attack) return attack(aa);
    if (*c_bounds) return verify_bounds(ba);
    if (*c_report) return report(rpa);
    if (*c_pca) return pca(pa);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const CircuitError& e) {
    std::cerr << "invalid circuit: " << e.what() << "\n";
    return kParse;
  } catch (const KeyRejected& e) {
    std::cerr << "key rejected: " << e.what() << "\n";
    return kKeyRejected;
  } catch (const LockError& e) {
    std::cerr << "locking failed: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}
