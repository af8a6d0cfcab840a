#include "decor/report.hpp"

#include <cstdio>
#include <cstdlib>

#include <json.hpp>

#include "decor/bench.hpp"
#include "decor/error.hpp"

namespace decor {

using nlohmann::ordered_json;

long long report_timestamp() {
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0') return v;
  }
  return 0;
}

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

ordered_json run_json(const RunRecord& r) {
  const AttackReport& a = r.attack;
  ordered_json j;
  j["circuit"] = a.circuit;
  j["scheme"] = std::string(to_string(a.scheme));
  j["key_size"] = a.key_size;
  j["N"] = a.max_keys ? ordered_json(*a.max_keys) : ordered_json(nullptr);
  j["correct_key_count"] = a.correct_key_count;
  j["mode"] = std::string(to_string(a.mode));
  j["references"] = a.reference_count;
  j["reference_key_size"] = a.reference_key_size;
  j["model"] = std::string(to_string(a.model));
  j["features"] = {{"encoding", std::string(to_string(a.features.encoding))},
                   {"depth", a.features.depth},
                   {"fanin_bound", a.features.fanin_bound},
                   {"hops", a.features.hops},
                   {"layer_width", a.features.layer_width}};
  j["training_records"] = a.training_records;
  j["predicted_key"] = a.predicted.str();
  auto conf = ordered_json::array();
  for (double c : a.confidences) conf.push_back(fixed(c, 6));
  j["confidences"] = std::move(conf);
  j["kpa"] = fixed(a.kpa);
  j["bkpa"] = fixed(a.bkpa);
  j["overhead"] = {{"gates_original", r.overhead.gates_original},
                   {"gates_locked", r.overhead.gates_locked},
                   {"overhead_percent", fixed(r.overhead.overhead_percent)}};
  j["seed"] = a.seed;
  ordered_json seeds;
  for (const auto& [stage, s] : a.stage_seeds) seeds[stage] = s;
  j["stage_seeds"] = std::move(seeds);
  return j;
}

}  // namespace

std::string report_json(const std::vector<RunRecord>& runs) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["metadata"] = {{"tool", "decor"}, {"tool_version", std::string(kToolVersion)}, {"timestamp", report_timestamp()}};
  auto arr = ordered_json::array();
  for (const auto& r : runs) arr.push_back(run_json(r));
  j["runs"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string report_csv(const std::vector<RunRecord>& runs) {
  std::string out = "circuit,scheme,key_size,N,mode,references,kpa,bkpa,overhead_percent,seed\n";
  for (const auto& r : runs) {
    const AttackReport& a = r.attack;
    out += a.circuit + "," + std::string(to_string(a.scheme)) + "," + std::to_string(a.key_size) + "," +
           (a.max_keys ? std::to_string(*a.max_keys) : "") + "," + std::string(to_string(a.mode)) + "," +
           std::to_string(a.reference_count) + "," + fixed(a.kpa) + "," + fixed(a.bkpa) + "," +
           fixed(r.overhead.overhead_percent) + "," + std::to_string(a.seed) + "\n";
  }
  return out;
}

std::vector<RunRecord> parse_report_json(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    if (j.at("schema_version").get<int>() != kReportSchemaVersion)
      throw InvalidArgument("unsupported report schema version");
    std::vector<RunRecord> runs;
    for (const auto& e : j.at("runs")) {
      RunRecord r;
      AttackReport& a = r.attack;
      a.circuit = e.at("circuit").get<std::string>();
      auto scheme = parse_scheme(e.at("scheme").get<std::string>());
      if (!scheme) throw InvalidArgument("unknown scheme in report");
      a.scheme = *scheme;
      a.key_size = e.at("key_size").get<std::size_t>();
      if (!e.at("N").is_null()) a.max_keys = e.at("N").get<std::size_t>();
      a.correct_key_count = e.at("correct_key_count").get<std::size_t>();
      auto mode = parse_reference_mode(e.at("mode").get<std::string>());
      if (!mode) throw InvalidArgument("unknown mode in report");
      a.mode = *mode;
      a.reference_count = e.at("references").get<std::size_t>();
      a.reference_key_size = e.at("reference_key_size").get<std::size_t>();
      auto model = parse_model_kind(e.at("model").get<std::string>());
      if (!model) throw InvalidArgument("unknown model in report");
      a.model = *model;
      const auto& f = e.at("features");
      auto enc = parse_encoding(f.at("encoding").get<std::string>());
      if (!enc) throw InvalidArgument("unknown encoding in report");
      a.features.encoding = *enc;
      a.features.depth = f.at("depth").get<std::size_t>();
      a.features.fanin_bound = f.at("fanin_bound").get<std::size_t>();
      a.features.hops = f.at("hops").get<std::size_t>();
      a.features.layer_width = f.at("layer_width").get<std::size_t>();
      a.training_records = e.at("training_records").get<std::size_t>();
      const std::string bits = e.at("predicted_key").get<std::string>();
      for (std::size_t i = 0; i < bits.size(); ++i) {
        a.predicted.port_names.push_back(key_port_name(i));
        a.predicted.bits.push_back(bits[i] == '1');
      }
      for (const auto& c : e.at("confidences")) a.confidences.push_back(std::stod(c.get<std::string>()));
      a.kpa = std::stod(e.at("kpa").get<std::string>());
      a.bkpa = std::stod(e.at("bkpa").get<std::string>());
      a.seed = e.at("seed").get<std::uint64_t>();
      for (const auto& [stage, s] : e.at("stage_seeds").items()) a.stage_seeds[stage] = s.get<std::uint64_t>();
      const auto& o = e.at("overhead");
      r.overhead.circuit = a.circuit;
      r.overhead.scheme = a.scheme;
      r.overhead.gates_original = o.at("gates_original").get<std::size_t>();
      r.overhead.gates_locked = o.at("gates_locked").get<std::size_t>();
      r.overhead.overhead_percent = std::stod(o.at("overhead_percent").get<std::string>());
      runs.push_back(std::move(r));
    }
    return runs;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report: ") + e.what(), 0, 0);
  }
}

void emit_report(const std::vector<RunRecord>& runs, const std::filesystem::path& json_path,
                 const std::filesystem::path& csv_path) {
  write_text_file(json_path, report_json(runs));
  write_text_file(csv_path, report_csv(runs));
}

}  // namespace decor
