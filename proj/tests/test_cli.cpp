#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string path = "cdyn_cli_test_output.txt";
  const std::string cmd = std::string(CDYN_CLI_PATH) + " " + args + " > " + path + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::remove(path.c_str());
  return r;
}

void write(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("cycles report") {
  const auto r = run("cycles --max-len 20");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "cycles");
  CHECK(j["results"]["count"] == 1);
  CHECK(j["results"]["cycles"][0]["cycle"] == nlohmann::json::parse(R"(["1","4","2"])"));
  CHECK(j["results"]["cycles"][0]["word"] == nlohmann::json::parse("[1,2,2]"));
  CHECK(j["parameters"]["max_len"] == 20);
  CHECK_FALSE(j["results"].contains("elapsed_seconds"));
}

TEST_CASE("reports are identical across thread counts") {
  const auto a = run("--threads 1 tuc-scan --system '{\"family\":\"qxd\",\"q\":5,\"d\":3}' --window 1..300");
  const auto b = run("--threads 4 tuc-scan --system '{\"family\":\"qxd\",\"q\":5,\"d\":3}' --window 1..300");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  const auto c = run("--threads 3 minimality --window 1..200");
  const auto d = run("--threads 1 minimality --window 1..200");
  CHECK(c.status == 0);
  CHECK(c.out == d.out);
}

TEST_CASE("CSV cycles") {
  const auto r = run("cycles --format csv --max-len 12 --system '{\"family\":\"qxd\",\"q\":5,\"d\":1}'");
  REQUIRE(r.status == 0);
  CHECK(r.out.rfind("word,cycle,length\n", 0) == 0);
  CHECK(r.out.find(",13 ") != std::string::npos);
  CHECK(run("orbit --x 7 --format csv").status == 2);
}

TEST_CASE("exit codes") {
  write("cdyn_cli_bad.json", "{\"family\": ");
  CHECK(run("cycles --system cdyn_cli_bad.json").status == 2);
  CHECK(run("cycles --system missing_file.json").status == 2);
  CHECK(run("no-such-command").status == 2);
  CHECK(run("orbit").status == 2);
  CHECK(run("tuc-scan").status == 2);
  std::remove("cdyn_cli_bad.json");

  const std::string swap = R"('{"family":"table","k":1,"states":[1,2],"branch":{"1":1,"2":1},"image":{"1":2,"2":1}}')";
  CHECK(run("check uniqueness --max-len 4 --system " + swap).status == 1);
  CHECK(run("tuc-scan --system " + swap).status == 1);
  CHECK(run("check uniqueness --max-len 10").status == 0);
  CHECK(run("check separating --x 1").status == 0);
  CHECK(run("morphism check --phi '{\"affine\":{\"u\":1,\"v\":1}}' --window 1..10").status == 1);
  CHECK(run("morphism check --phi '{\"affine\":{\"u\":1,\"v\":0}}' --window 1..10").status == 0);
}

TEST_CASE("operators and orbits") {
  const auto o = run("orbit --x 27");
  REQUIRE(o.status == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["results"]["stop"]["kind"] == "entered_cycle");
  CHECK(j["results"]["trajectory"][0] == "27");

  const auto f = run("operators fixed-vectors --window 1..100 --word 1,2,2");
  REQUIRE(f.status == 0);
  const auto fj = nlohmann::json::parse(f.out);
  CHECK(fj["results"]["dimension"] == 1);

  write("cdyn_cli_set.json", "[1,2]");
  const auto red = run("operators reduce-check --set-file cdyn_cli_set.json --system "
                       R"('{"family":"table","k":2,"states":[1,2,3],"branch":{"1":1,"2":2,"3":1},"image":{"1":2,"2":1,"3":3}}')");
  std::remove("cdyn_cli_set.json");
  REQUIRE(red.status == 0);
  const auto rj = nlohmann::json::parse(red.out);
  CHECK(rj["results"]["reducing"] == true);
  CHECK(rj["results"]["invariant"] == true);

  const auto pm = run("operators pm-limit --window 1..10000 --x 1 --vector 1,5");
  REQUIRE(pm.status == 0);
  CHECK(nlohmann::json::parse(pm.out)["results"]["index"] == 4);

  const auto comm = run("operators commutant --table "
                        R"('{"family":"table","k":1,"states":[1,2],"branch":{"1":1,"2":1},"image":{"1":2,"2":1}}')");
  REQUIRE(comm.status == 0);
  const auto cj = nlohmann::json::parse(comm.out);
  CHECK(cj["results"]["reducing_subspaces"] == 4);
  CHECK(cj["results"]["invariant_sets"] == 2);
}

TEST_CASE("timing is opt-in and out files work") {
  const auto r = run("--timing code --x 5 --len 6");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["results"].contains("elapsed_seconds"));
  CHECK(j["results"]["prefix"] == nlohmann::json::parse("[1,2,2,2,2,1]"));
  CHECK(run("--out cdyn_cli_report.json tower --x 13 --depth 4").status == 0);
  std::ifstream in("cdyn_cli_report.json");
  const auto t = nlohmann::json::parse(in);
  CHECK(t["results"]["tower"]["digits"] == nlohmann::json::parse(R"(["1","1","5","13"])"));
  CHECK(t["results"]["commutes"] == true);
  std::remove("cdyn_cli_report.json");
}
