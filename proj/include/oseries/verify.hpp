#pragma once

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace oseries {

struct SuiteOptions {
  std::uint64_t seed = 0;
  size_t count = 100;
  bool corrupt = false;  // negative control: inflates every checked left side
};

struct SuiteResult {
  std::string name;
  std::string lemma;
  size_t instances = 0;
  size_t violations = 0;
  double worst_ratio = 0.0;  // max lhs / rhs over the instances
  std::vector<std::string> failures;  // first few, with instance numbers
  nlohmann::json details = nlohmann::json::object();
  bool passed() const { return violations == 0 && instances > 0; }
};
nlohmann::json to_json(const SuiteResult& r);

struct SuiteInfo {
  std::string name;
  std::string lemma;
  std::function<SuiteResult(const SuiteOptions&)> run;
};
const std::vector<SuiteInfo>& all_suites();

SuiteResult suite_phi(const SuiteOptions& o);
SuiteResult suite_bernstein(const SuiteOptions& o);
SuiteResult suite_lemma_5_6(const SuiteOptions& o);
SuiteResult suite_lemma_5_8(const SuiteOptions& o);
SuiteResult suite_lemma_5_10(const SuiteOptions& o);
SuiteResult suite_lemma_5_12(const SuiteOptions& o);
SuiteResult suite_lemma_5_13(const SuiteOptions& o);
SuiteResult suite_lemma_3_19(const SuiteOptions& o);
SuiteResult suite_lemma_3_23(const SuiteOptions& o);
SuiteResult suite_lemma_3_26(const SuiteOptions& o);
SuiteResult suite_geometry(const SuiteOptions& o);
SuiteResult suite_gram(const SuiteOptions& o);
SuiteResult suite_menshov(const SuiteOptions& o);
SuiteResult suite_corollary_5_5(const SuiteOptions& o);
SuiteResult suite_cantor(const SuiteOptions& o);
SuiteResult suite_sandwich(const SuiteOptions& o);
SuiteResult suite_shift(const SuiteOptions& o);

} // namespace oseries
