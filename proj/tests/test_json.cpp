#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <functional>

#include "cdyn/error.hpp"
#include "cdyn/report.hpp"
#include "cdyn/spec_json.hpp"

using namespace cdyn;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("integers in JSON") {
  CHECK(int_from_json(Json(42)) == 42);
  CHECK(int_from_json(Json("123456789012345678901234567890")) == Int("123456789012345678901234567890"));
  CHECK(int_to_json(Int("123456789012345678901234567890")) == Json("123456789012345678901234567890"));
  CHECK(code_of([] { int_from_json(Json("12a")); }) == ErrorCode::Parse);
  CHECK(code_of([] { int_from_json(Json(1.5)); }) == ErrorCode::Parse);
}

TEST_CASE("system specs round trip") {
  const std::vector<SystemSpec> specs{
      SystemSpec::collatz(), SystemSpec::qxd(5, 3), SystemSpec::alphabeta(3, {2, 4}, {1, 5}),
      SystemSpec::table(2, {1, 2, 3}, {1, 2, 2}, {2, 3, 1}),
      SystemSpec::qxd(Int("100000000000000000000000000001"), 1)};
  for (const auto& s : specs) {
    CHECK(system_spec_from_json(system_spec_to_json(s)) == s);
    CHECK(system_spec_from_json(Json::parse(system_spec_to_json(s).dump())) == s);
  }
  const auto c = system_spec_from_json(Json::parse(R"({"family":"collatz"})"));
  CHECK(c == SystemSpec::collatz());
  const auto t = system_spec_from_json(
      Json::parse(R"({"family":"table","k":1,"states":[1,2],"branch":{"1":1,"2":1},"image":{"1":2,"2":1}})"));
  CHECK(t == SystemSpec::table(1, {1, 2}, {1, 1}, {2, 1}));
}

TEST_CASE("malformed specs") {
  CHECK(code_of([] { system_spec_from_json(Json::parse(R"({"family":"nope"})")); }) == ErrorCode::Parse);
  CHECK(code_of([] { system_spec_from_json(Json::parse(R"({"family":"qxd","q":3})")); }) == ErrorCode::Parse);
  CHECK(code_of([] { system_spec_from_json(Json::parse(R"([1,2])")); }) == ErrorCode::Parse);
  // Shift family parses as a document but is not a dynamical system.
  const auto doc = system_document_from_json(Json::parse(R"({"family":"shift","k":3})"));
  REQUIRE(std::holds_alternative<ShiftSpec>(doc));
  CHECK(std::get<ShiftSpec>(doc).k == 3);
  CHECK(code_of([] { system_spec_from_json(Json::parse(R"({"family":"shift","k":3})")); }) == ErrorCode::InvalidSpec);
  // A non-injective table branch is rejected when the system is built.
  CHECK(code_of([] {
          make_system(system_spec_from_json(Json::parse(
              R"({"family":"table","k":1,"states":[1,2],"branch":{"1":1,"2":1},"image":{"1":1,"2":1}})")));
        }) == ErrorCode::NonInjectiveBranch);
}

TEST_CASE("morphisms round trip") {
  const auto sys = make_system(SystemSpec::table(2, {1, 2, 3}, {1, 2, 2}, {2, 3, 1}));
  const auto phi = Morphism::table(sys, sys, {{1, 1}, {2, 2}, {3, 3}});
  const auto back = morphism_from_json(morphism_to_json(phi), sys, sys);
  for (const auto& x : sys.states()) CHECK(back(x) == phi(x));
  const auto bare = morphism_from_json(Json::parse(R"({"1":"1","2":"2","3":"3"})"), sys, sys);
  CHECK(bare(2) == 2);
  const auto c = make_system(SystemSpec::collatz());
  const auto aff = morphism_from_json(Json::parse(R"({"affine":{"u":1,"v":0}})"), c, c);
  CHECK(aff(77) == 77);
  CHECK(morphism_to_json(aff) == Json::parse(R"({"affine":{"u":"1","v":"0"}})"));
}

TEST_CASE("states, words and bases") {
  CHECK(states_from_json(Json::parse("[3, \"1\", 2]")) == std::vector<Int>{3, 1, 2});
  CHECK(states_from_json(Json::parse(R"({"states":[5]})")) == std::vector<Int>{5});
  CHECK(word_to_json(Word{1, 2, 2}) == Json::parse("[1,2,2]"));
  SubspaceBasis b;
  b.exact = {{Rational(1), Rational(-1, 2)}, {Rational(1, 2), Rational(1)}};
  const auto j = basis_to_json(b);
  const auto back = basis_from_json(j, 2);
  REQUIRE(back.dim() == 2);
  for (const auto& v : b.exact) CHECK(is_zero(residual(back.exact, v)));
  CHECK_THROWS_AS(basis_from_json(Json::parse(R"([["1"]])"), 2), Error);
  CHECK(rational_vector_to_json({Rational(1, 2)}) == Json::parse(R"(["1/2"])"));
}

TEST_CASE("reports are deterministic") {
  const Json params = Json::parse(R"({"b":2,"a":[1,2],"system":{"family":"collatz"}})");
  const Json same = Json::parse(R"({"system":{"family":"collatz"},"a":[1,2],"b":2})");
  CHECK(config_hash(params) == config_hash(same));
  CHECK(config_hash(params).size() == 16);
  CHECK(config_hash(params) != config_hash(Json::parse(R"({"b":3})")));
  // 64-bit FNV-1a reference values for the compact dumps "{}" and {"a":[1,2],"b":2}.
  CHECK(config_hash(Json::object()) == "08f44b07b5901a25");
  CHECK(config_hash(Json::parse(R"({"b":2,"a":[1,2]})")) == "300a7cb0d8fe3d95");

  const auto r1 = render(make_report("cycles", params, Json{{"count", 1}}, {}));
  const auto r2 = render(make_report("cycles", same, Json{{"count", 1}}, {}));
  CHECK(r1 == r2);
  CHECK(r1.back() == '\n');
  const auto j = Json::parse(r1);
  CHECK(j["version"] == kVersion);
  CHECK(j["command"] == "cycles");
  CHECK(j["anomalies"].is_array());
  CHECK(r1.find("\"anomalies\"") < r1.find("\"command\""));
}

TEST_CASE("cycle CSV") {
  const std::vector<CycleEntry> cs{{Word{1, 2, 2}, {1, 4, 2}}};
  CHECK(cycles_csv(cs) == "word,cycle,length\n1 2 2,1 4 2,3\n");
  CHECK(cycles_to_json(cs)[0]["length"] == 3);
}

TEST_CASE("file errors") {
  CHECK(code_of([] { read_json_file("/nonexistent/file.json"); }) == ErrorCode::Io);
  const std::string path = "cdyn_test_bad.json";
  {
    std::ofstream out(path);
    out << "{\"family\": ";
  }
  CHECK(code_of([&] { read_json_file(path); }) == ErrorCode::Parse);
  std::remove(path.c_str());
}
