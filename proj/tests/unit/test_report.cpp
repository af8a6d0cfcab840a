#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include "decor/bench.hpp"
#include "decor/error.hpp"
#include "decor/report.hpp"

using namespace decor;

namespace {

RunRecord sample(Scheme s, std::optional<std::size_t> n) {
  RunRecord r;
  AttackReport& a = r.attack;
  a.circuit = "c432";
  a.scheme = s;
  a.key_size = 4;
  a.max_keys = n;
  a.correct_key_count = n ? 3 : 1;
  a.reference_count = 500;
  a.reference_key_size = 4;
  a.features = {Encoding::Vector, 1, 1, 2, 8};
  a.training_records = 2000;
  a.predicted = make_key({"keyinput0", "keyinput1", "keyinput2", "keyinput3"}, {1, 0, 1, 1});
  a.confidences = {1.0, 0.5, 0.75, 0.9};
  a.kpa = 75.0;
  a.bkpa = 100.0;
  a.seed = 42;
  a.stage_seeds = {{"model", 7}, {"references", 9}};
  r.overhead = {"c432", s, 160, 200, 25.0};
  return r;
}

}  // namespace

TEST_CASE("CSV rows, N blank for base schemes") {
  std::vector<RunRecord> runs{sample(Scheme::Xbi, std::nullopt), sample(Scheme::DecorXbi, 8)};
  CHECK(report_csv(runs) ==
        "circuit,scheme,key_size,N,mode,references,kpa,bkpa,overhead_percent,seed\n"
        "c432,xbi,4,,srs,500,75.0000,100.0000,25.0000,42\n"
        "c432,decor-xbi,4,8,srs,500,75.0000,100.0000,25.0000,42\n");
}

TEST_CASE("JSON is byte-stable and round-trips") {
  unsetenv("SOURCE_DATE_EPOCH");
  std::vector<RunRecord> runs{sample(Scheme::Sarlock, std::nullopt), sample(Scheme::DecorSarlock, 4)};
  const std::string a = report_json(runs);
  CHECK(a == report_json(runs));
  CHECK(a.find("\"timestamp\": 0") != std::string::npos);
  CHECK(a.find("\"N\": null") != std::string::npos);
  CHECK(a.find("\"schema_version\": 1") != std::string::npos);
  auto back = parse_report_json(a);
  REQUIRE(back.size() == 2);
  CHECK(report_json(back) == a);
  CHECK(back[1].attack.max_keys == std::optional<std::size_t>(4));
  CHECK(back[0].attack.predicted.str() == "1011");

  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  CHECK(report_json(runs).find("\"timestamp\": 1700000000") != std::string::npos);
  unsetenv("SOURCE_DATE_EPOCH");
}

TEST_CASE("report parsing errors") {
  CHECK_THROWS_AS(parse_report_json("{"), ParseError);
  CHECK_THROWS_AS(parse_report_json(R"({"schema_version": 2, "runs": []})"), InvalidArgument);
  CHECK(parse_report_json(R"({"schema_version": 1, "runs": []})").empty());
}

TEST_CASE("emit_report writes both files and names bad paths") {
  const auto dir = std::filesystem::temp_directory_path() / "decor_report_test";
  std::filesystem::create_directories(dir);
  std::vector<RunRecord> runs{sample(Scheme::Xbi, std::nullopt)};
  emit_report(runs, dir / "r.json", dir / "r.csv");
  CHECK(read_text_file(dir / "r.csv") == report_csv(runs));
  CHECK(read_text_file(dir / "r.json") == report_json(runs));
  try {
    emit_report(runs, dir / "missing" / "r.json", dir / "r.csv");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}
