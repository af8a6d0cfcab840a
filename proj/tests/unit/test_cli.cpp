#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "decor/bench.hpp"
#include "decor/lock.hpp"

namespace fs = std::filesystem;
using namespace decor;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("decor_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string at(const std::string& name) const { return (dir / name).string(); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(DECOR_CLI) + " " + args + " >" + at("stdout.txt") + " 2>" + at("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string out() const { return read_text_file(at("stdout.txt")); }
  std::string err() const { return read_text_file(at("stderr.txt")); }
};

}  // namespace

TEST_CASE("end-to-end flow and exit codes") {
  Sandbox s;
  REQUIRE(s.run("gen-circuit " + s.at("c.bench") + " --inputs 12 --outputs 4 --gates 150 --seed 1") == 0);
  REQUIRE(s.run("lock " + s.at("c.bench") + " " + s.at("l.bench") + " --key-out " + s.at("l.key") +
                " --key-size 8 --seed 2") == 0);
  CHECK(s.out().find("overhead") != std::string::npos);
  REQUIRE(s.run("decor " + s.at("l.bench") + " " + s.at("d.bench") + " --key " + s.at("l.key") + " --key-out " +
                s.at("d.key") + " --keys-out " + s.at("d.keys") + " --original " + s.at("c.bench") +
                " --max-keys 4 --seed 3") == 0);
  auto keys = parse_key_list(read_text_file(s.at("d.keys")));
  CHECK(keys.size() >= 2);
  CHECK(keys.size() <= 4);
  CHECK(keys.front() == parse_key_file(read_text_file(s.at("l.key"))));
  CHECK(parse_key_file(read_text_file(s.at("d.key"))) == keys.front());

  REQUIRE(s.run("attack " + s.at("d.bench") + " --keys " + s.at("d.keys") + " --original " + s.at("c.bench") +
                " --refs 10 --report " + s.at("r.json") + " --csv " + s.at("r.csv") + " --seed 4") == 0);
  const std::string csv = read_text_file(s.at("r.csv"));
  CHECK(csv.find(",decor-xbi,8,4,srs,10,") != std::string::npos);
  REQUIRE(s.run("report " + s.at("r.json") + " " + s.at("r.json")) == 0);
  const std::string merged = s.out();
  CHECK(std::count(merged.begin(), merged.end(), '\n') == 3);

  REQUIRE(s.run("gen-refs " + s.at("l.bench") + " --out-dir " + s.at("refs") + " --count 3 --passes 0") == 0);
  CHECK(fs::exists(s.at("refs/ref2.bench")));
  Circuit ref = read_bench_file(s.at("refs/ref0.bench"));
  Key rk = parse_key_file(read_text_file(s.at("refs/ref0.key")));
  CHECK(rk.port_names == ref.key_inputs);

  SUBCASE("usage errors exit 64") {
    CHECK(s.run("lock " + s.at("c.bench") + " " + s.at("x.bench")) == 64);
    CHECK(s.run("lock " + s.at("c.bench") + " " + s.at("x.bench") + " --key-out " + s.at("x.key") +
                " --scheme antisat") == 64);
    CHECK(s.run("frobnicate") == 64);
    CHECK(!fs::exists(s.at("x.bench")));
  }
  SUBCASE("malformed input exits 1") {
    write_text_file(s.at("bad.bench"), "INPUT(a)\nOUTPUT(z)\nz = AND(a,\n");
    CHECK(s.run("lock " + s.at("bad.bench") + " " + s.at("x.bench") + " --key-out " + s.at("x.key")) == 1);
    CHECK(s.err().find("3:") != std::string::npos);
    CHECK(!fs::exists(s.at("x.bench")));
  }
  SUBCASE("infeasible locking exits 2 and leaves no output") {
    CHECK(s.run("lock " + s.at("c.bench") + " " + s.at("x.bench") + " --key-out " + s.at("x.key") +
                " --key-size 5000") == 2);
    CHECK(!fs::exists(s.at("x.bench")));
    CHECK(!fs::exists(s.at("x.key")));
  }
  SUBCASE("a wrong reported key exits 3") {
    Key wrong = complement(keys.front());
    write_text_file(s.at("wrong.key"), write_key_file(wrong));
    CHECK(s.run("decor " + s.at("l.bench") + " " + s.at("x.bench") + " --key " + s.at("wrong.key") + " --key-out " +
                s.at("x.key") + " --keys-out " + s.at("x.keys") + " --original " + s.at("c.bench")) == 3);
    CHECK(!fs::exists(s.at("x.bench")));
  }
  SUBCASE("missing files exit 4") {
    CHECK(s.run("lock " + s.at("none.bench") + " " + s.at("x.bench") + " --key-out " + s.at("x.key")) == 4);
    CHECK(s.err().find("none.bench") != std::string::npos);
  }
}

TEST_CASE("identical seeds give byte-identical outputs") {
  Sandbox s;
  REQUIRE(s.run("gen-circuit " + s.at("c.bench") + " --gates 200 --seed 5") == 0);
  for (const char* round : {"a", "b"}) {
    fs::create_directories(s.dir / round);
    auto at = [&](const char* f) { return s.at(std::string(round) + "/" + f); };
    REQUIRE(s.run("lock " + s.at("c.bench") + " " + at("l.bench") + " --key-out " + at("l.key") +
                  " --scheme sarlock --key-size 8 --seed 9") == 0);
    REQUIRE(s.run("decor " + at("l.bench") + " " + at("d.bench") + " --key " + at("l.key") + " --key-out " + at("d.key") +
                  " --keys-out " + at("d.keys") + " --seed 9") == 0);
    REQUIRE(s.run("attack " + at("d.bench") + " --keys " + at("d.keys") + " --refs 8 --report " + at("r.json") +
                  " --seed 9") == 0);
  }
  for (const char* f : {"l.bench", "l.key", "d.bench", "d.key", "d.keys", "r.json"})
    CHECK_MESSAGE(read_text_file(s.at(std::string("a/") + f)) == read_text_file(s.at(std::string("b/") + f)), f);
}

TEST_CASE("verify-bounds prints passing checks") {
  Sandbox s;
  REQUIRE(s.run("verify-bounds --kappa 4 --max-keys 4 --n 4 --t 2 --trials 20000 --seed 1") == 0);
  CHECK(s.out().find("FAIL") == std::string::npos);
  CHECK(s.out().find("PASS") != std::string::npos);
  CHECK(s.run("verify-bounds --kappa 40") == 64);
}
