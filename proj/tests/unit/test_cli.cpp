#include "oseries/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace oseries::cli;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "oseries");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / ("oseries_test_" + name);
  std::ofstream(p) << text;
  return p.string();
}

} // namespace

TEST_SUITE("cli") {
  TEST_CASE("analyze reports") {
    auto f = temp_file("thirds.json", R"({"squares": ["1/3", "1/3", "1/3"]})");
    auto r = invoke({"analyze", f});
    REQUIRE(r.code == kOk);
    auto j = json::parse(r.out);
    CHECK(j["V"]["value"].get<double>() == doctest::Approx(1.0));
    CHECK(j["criteria"]["beta"]["value"].get<double>() == 0.0);
    CHECK(j["criteria"]["gamma"]["value"].get<double>() == 0.0);
    CHECK(j["criteria"]["indicator"]["alpha1"].get<double>() == doctest::Approx(1.58496).epsilon(1e-4));
    CHECK(j["config"]["input"] == f);

    auto one = json::parse(invoke({"analyze", temp_file("one.csv", "1\n")}).out);
    CHECK(one["criteria"]["alpha"]["value"].get<double>() == 0.0);
    CHECK(one["criteria"]["tandori"]["value"].get<double>() == 0.0);
    CHECK(one["V"]["clipped_below_1"] == true);

    CHECK(invoke({"analyze", temp_file("empty.csv", "")}).code == kDataError);
    CHECK(invoke({"analyze", "/nonexistent/file"}).code == kDataError);
  }

  TEST_CASE("construct reports") {
    auto r = invoke({"construct", "--k", "1"});
    REQUIRE(r.code == kOk);
    auto j = json::parse(r.out);
    CHECK(j["vectors_count"] == 3);
    CHECK(invoke({"construct", "--k", "9"}).code == kDataError);
    CHECK(invoke({"construct", "--k", "0"}).code == kDataError);
    CHECK(invoke({"construct"}).code == kDataError);
    auto g = invoke({"construct", "--b", "grid1"});
    REQUIRE(g.code == kOk);
    CHECK(json::parse(g.out)["result"]["plan"]["kind"] == "nest");
    CHECK(invoke({"construct", "--b", "0,1/2,1"}).code == kDataError);
  }

  TEST_CASE("measure and cantor commands") {
    auto m = invoke({"measure", "1/3,1/3,1/3"});
    REQUIRE(m.code == kOk);
    CHECK(json::parse(m.out)["value"].get<double>() == doctest::Approx(1.0));
    CHECK(invoke({"measure", "1/3,1/3"}).code == kDataError);
    auto c = invoke({"cantor", "--depth", "6", "--k-max", "3"});
    CHECK(c.code == kOk);
    CHECK(invoke({"cantor", "--t", "1/2"}).code == kDataError);
  }

  TEST_CASE("verify command and exit codes") {
    auto v = invoke({"verify", "--suite", "menshov", "--suite", "bernstein", "--count", "5"});
    REQUIRE(v.code == kOk);
    auto j = json::parse(v.out);
    CHECK(j["suites"].size() == 2);
    auto bad = invoke({"verify", "--suite", "menshov", "--corrupt"});
    CHECK(bad.code == kAssertionFailure);
    CHECK(json::parse(bad.out)["failed_lemmas"].size() == 1);
    CHECK(invoke({"verify", "--suite", "nonsense"}).code == kUsage);
    CHECK(invoke({}).code == kUsage);
    CHECK(invoke({"--help"}).code == kOk);
    CHECK(invoke({"bogus"}).code == kUsage);
  }

  TEST_CASE("outputs are deterministic") {
    auto f = temp_file("det.json", "[0.5, 0.5, 0.5, 0.5, 0.1]");
    CHECK(invoke({"analyze", f}).out == invoke({"analyze", f}).out);
    CHECK(invoke({"construct", "--b", "grid1", "--target", "0.5"}).out ==
          invoke({"construct", "--b", "grid1", "--target", "0.5"}).out);
    auto a = invoke({"verify", "--suite", "lemma_5_6", "--count", "10", "--seed", "4"});
    auto b = invoke({"verify", "--suite", "lemma_5_6", "--count", "10", "--seed", "4", "--jobs", "2"});
    CHECK(json::parse(a.out)["suites"] == json::parse(b.out)["suites"]);
  }

  TEST_CASE("table format and exact mode") {
    auto t = invoke({"measure", "1/3,1/3,1/3", "--format", "table"});
    CHECK(t.code == kOk);
    CHECK(t.out.find('{') == std::string::npos);
    auto f = temp_file("exact.json", R"({"squares": ["1/3", "1/3", "1/3"]})");
    CHECK_FALSE(json::parse(invoke({"analyze", f}).out).contains("h_B_exact"));
    setenv("ORTHO_EXACT", "1", 1);
    CHECK(exact_from_env());
    auto e = json::parse(invoke({"analyze", f}).out);
    unsetenv("ORTHO_EXACT");
    CHECK(e.contains("h_B_exact"));
    CHECK_FALSE(exact_from_env());
  }
}
