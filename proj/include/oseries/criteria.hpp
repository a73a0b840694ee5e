#pragma once

#include "oseries/info.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace oseries {

struct BlockTerm {
  int i = 0;
  double value = 0.0;  // block contribution (already square-rooted where the criterion does so)
  size_t count = 0;    // number of coefficients in the block
};

struct CriterionReport {
  std::string name;
  double value = 0.0;
  std::vector<BlockTerm> blocks;
  size_t residual_count = 0;  // coefficients outside every block
  double residual = 0.0;      // their contribution, not included in value
  nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json to_json(const CriterionReport& r);

// Exact floor / ceil of log2 q for q > 0.
long floor_log2(const Rational& q);
long ceil_log2(const Rational& q);

struct WeylReport {
  Rational weighted_sum_exact;  // valid when every r_n is rational
  double weighted_sum = 0.0;
  std::vector<double> partial_sums;
  std::vector<double> ratios;   // r_n / log2^2 n for n >= 2
  double ratio_max = 0.0;
  double ratio_last = 0.0;
};
WeylReport rm_weyl(const CoefficientSeq& seq, const std::vector<double>& r);
std::vector<double> rm_weights(size_t n);  // r_n = log2^2 n

// sum |a_n|^2 log2^2 |a_n|; throws unless |a_n| is non-increasing.
double alpha_condition(const CoefficientSeq& seq);
CriterionReport alpha_report(const CoefficientSeq& seq);

// Blocks 2^{-2^{i+1}} <= |a_n| < 2^{-2^i}, i >= 1; |a_n| >= 1/4 is residual.
CriterionReport beta_condition(const CoefficientSeq& seq);
// sum_{i>=1} (sum_n a_n^2 z_i^2)^{1/2}, z = -log2 a_n; the i = 0 slice goes to extra.
CriterionReport gamma_condition(const CoefficientSeq& seq);

struct Sandwich {
  double a_minus = 0, a_plus = 0, b_minus = 0, b_plus = 0;
  double gamma = 0;      // gamma sum
  double beta_u = 0;     // beta sum over the u_i blocks 2^i <= z < 2^{i+1}
  std::vector<double> u_norms;  // ||u_i|| for i = 1..
  bool gamma_ok = false, beta_ok = false, chain_ok = false;
  bool ok() const { return gamma_ok && beta_ok && chain_ok; }
};
Sandwich sandwich_check(const CoefficientSeq& seq);

// Blocks 2^{2^i} <= n < 2^{2^{i+1}}, i >= 0; n = 1 is residual.
CriterionReport tandori_sum(const CoefficientSeq& seq);

enum class IndicatorVariable { InfoBase2, InfoClosed };

struct Theorem17Report {
  double alpha1 = 0;              // ||I_B||
  double beta1 = 0;               // sum_{i>=1} ||I_B 1_{2^i <= X < 2^{i+1}}||
  double gamma1 = 0;              // sum_{i>=1} ||(I_B)_i||
  double gamma1_with_slice0 = 0;  // adds ||(I_B)_0||
  std::vector<double> beta1_blocks, gamma1_slices;  // gamma1_slices[0] is slice 0
  IndicatorVariable indicator = IndicatorVariable::InfoBase2;
};
Theorem17Report theorem17_conditions(const CoefficientSeq& seq,
                                     IndicatorVariable indicator = IndicatorVariable::InfoBase2);
nlohmann::json to_json(const Theorem17Report& r);

// sum_i ||H_i|| for H = -log3 P(atom), slices H_0 = H ∧ 2, H_i = H∧2^{i+1} - H∧2^i.
double measure_criterion(const std::vector<Rational>& probs);
double measure_criterion(const std::vector<double>& probs);

} // namespace oseries
