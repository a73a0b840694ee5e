#include "oseries/verify.hpp"

#include <doctest.h>

#include <set>

using namespace oseries;

TEST_SUITE("verify") {
  TEST_CASE("every suite passes at seed 0") {
    SuiteOptions o;
    o.count = 20;
    for (const auto& s : all_suites()) {
      CAPTURE(s.name);
      auto r = s.run(o);
      CHECK(r.name == s.name);
      CHECK(r.lemma == s.lemma);
      CHECK(r.instances > 0);
      CHECK(r.passed());
      CHECK(r.worst_ratio <= 1.0);
    }
  }

  TEST_CASE("every suite fails in the negative control") {
    SuiteOptions o;
    o.count = 5;
    o.corrupt = true;
    for (const auto& s : all_suites()) {
      CAPTURE(s.name);
      auto r = s.run(o);
      CHECK_FALSE(r.passed());
      CHECK_FALSE(r.failures.empty());
    }
  }

  TEST_CASE("registry and determinism") {
    std::set<std::string> names;
    for (const auto& s : all_suites()) names.insert(s.name);
    CHECK(names.size() == all_suites().size());
    SuiteOptions o;
    o.count = 15;
    o.seed = 11;
    CHECK(to_json(suite_lemma_5_12(o)) == to_json(suite_lemma_5_12(o)));
    CHECK(to_json(suite_geometry(o)).dump() == to_json(suite_geometry(o)).dump());
  }
}
