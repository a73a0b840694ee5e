#include "oseries/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace oseries {

namespace {

const double kLn2 = std::log(2.0);
const double kLn3 = std::log(3.0);

double log2_q(const Rational& q) { return log_rational(q) / kLn2; }

bool is_power_of_two(const Rational& q) {
  return q > 0 && mpz_popcount(q.get_num_mpz_t()) == 1 && mpz_popcount(q.get_den_mpz_t()) == 1;
}

bool leq(double x, double y) { return x <= y + 1e-12 * std::max(1.0, std::fabs(y)); }

} // namespace

long floor_log2(const Rational& q) {
  if (q <= 0) throw std::domain_error("floor_log2: requires q > 0");
  long e = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
  BigInt num = q.get_num(), den = q.get_den();
  if (e >= 0) den <<= static_cast<mp_bitcnt_t>(e);
  else num <<= static_cast<mp_bitcnt_t>(-e);
  return num >= den ? e : e - 1;
}

long ceil_log2(const Rational& q) { return is_power_of_two(q) ? floor_log2(q) : floor_log2(q) + 1; }

nlohmann::json to_json(const CriterionReport& r) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : r.blocks) blocks.push_back({{"i", b.i}, {"value", b.value}, {"count", b.count}});
  return {{"name", r.name},   {"value", r.value},
          {"blocks", blocks}, {"residual", {{"count", r.residual_count}, {"value", r.residual}}},
          {"extra", r.extra}};
}

std::vector<double> rm_weights(size_t n) {
  std::vector<double> r(n);
  for (size_t k = 0; k < n; ++k) {
    double l = std::log2(static_cast<double>(k + 1));
    r[k] = l * l;
  }
  return r;
}

WeylReport rm_weyl(const CoefficientSeq& seq, const std::vector<double>& r) {
  if (r.size() != seq.size()) throw std::invalid_argument("rm_weyl: weights and coefficients differ in length");
  WeylReport out;
  out.weighted_sum_exact = 0;
  double acc = 0;
  for (size_t k = 0; k < r.size(); ++k) {
    if (!(r[k] >= 0) || !std::isfinite(r[k])) throw std::invalid_argument("rm_weyl: weights must be finite and >= 0");
    out.weighted_sum_exact += from_double(r[k]) * seq.squares()[k];
    acc += r[k] * seq.squares()[k].get_d();
    out.partial_sums.push_back(acc);
    if (k >= 1) {
      double l = std::log2(static_cast<double>(k + 1));
      out.ratios.push_back(r[k] / (l * l));
    }
  }
  out.weighted_sum = out.weighted_sum_exact.get_d();
  if (!out.ratios.empty()) {
    out.ratio_max = *std::max_element(out.ratios.begin(), out.ratios.end());
    out.ratio_last = out.ratios.back();
  }
  return out;
}

double alpha_condition(const CoefficientSeq& seq) { return alpha_report(seq).value; }

CriterionReport alpha_report(const CoefficientSeq& seq) {
  if (!seq.is_decreasing()) throw std::invalid_argument("alpha_condition: |a_n| must be non-increasing");
  CriterionReport r;
  r.name = "alpha";
  for (const auto& q : seq.squares()) {
    if (q == 0) continue;
    double l = 0.5 * log2_q(q);
    r.value += q.get_d() * l * l;
  }
  return r;
}

CriterionReport beta_condition(const CoefficientSeq& seq) {
  CriterionReport r;
  r.name = "beta";
  std::map<int, std::pair<double, size_t>> blocks;
  for (const auto& q : seq.squares()) {
    if (q == 0) continue;
    const long F = floor_log2(q);  // 2^F <= a^2 < 2^{F+1}
    // block i: 2^{-2^{i+2}} <= a^2 < 2^{-2^{i+1}}, i.e. -2^{i+2} <= F <= -2^{i+1} - 1
    int blk = -1;
    for (int i = 1; i < 62; ++i) {
      const long lo = -(1L << (i + 2)), hi = -(1L << (i + 1)) - 1;
      if (F >= lo && F <= hi) {
        blk = i;
        break;
      }
      if (F > hi) break;
    }
    const double l = 0.5 * log2_q(q);
    const double term = q.get_d() * l * l;
    if (blk < 0) {
      ++r.residual_count;
      r.residual += term;
      continue;
    }
    blocks[blk].first += term;
    blocks[blk].second += 1;
  }
  for (const auto& [i, t] : blocks) {
    r.blocks.push_back({i, std::sqrt(t.first), t.second});
    r.value += std::sqrt(t.first);
  }
  return r;
}

CriterionReport gamma_condition(const CoefficientSeq& seq) {
  if (seq.has_negative()) throw std::invalid_argument("gamma_condition: requires a_n >= 0");
  CriterionReport r;
  r.name = "gamma";
  std::map<int, std::pair<double, size_t>> slices;
  double slice0 = 0;
  for (const auto& q : seq.squares()) {
    if (q == 0) continue;
    const double z = -0.5 * log2_q(q);
    const double w = q.get_d();
    const double z0 = std::min(z, 2.0);
    if (z0 > 0) slice0 += w * z0 * z0;
    bool any = false;
    for (int i = 1; std::ldexp(1.0, i) < z; ++i) {
      const double zi = std::min(z, std::ldexp(1.0, i + 1)) - std::ldexp(1.0, i);
      slices[i].first += w * zi * zi;
      slices[i].second += 1;
      any = true;
    }
    if (!any) ++r.residual_count;
  }
  for (const auto& [i, t] : slices) {
    r.blocks.push_back({i, std::sqrt(t.first), t.second});
    r.value += std::sqrt(t.first);
  }
  r.extra["slice0"] = std::sqrt(slice0);
  return r;
}

Sandwich sandwich_check(const CoefficientSeq& seq) {
  Sandwich s;
  // u_i: 2^i <= z < 2^{i+1}, i.e. -2^{i+2} + 1 <= ceil(log2 a^2) <= -2^{i+1}
  std::map<int, double> u_sq, beta_terms;
  int top = 0;
  for (const auto& q : seq.squares()) {
    if (q == 0) continue;
    const long C = ceil_log2(q);
    for (int i = 1; i < 62; ++i) {
      const long lo = -(1L << (i + 2)) + 1, hi = -(1L << (i + 1));
      if (C > hi) break;
      if (C >= lo) {
        u_sq[i] += q.get_d();
        const double l = 0.5 * log2_q(q);
        beta_terms[i] += q.get_d() * l * l;
        top = std::max(top, i);
        break;
      }
    }
  }
  s.u_norms.assign(static_cast<size_t>(top), 0.0);
  for (const auto& [i, v] : u_sq) s.u_norms[static_cast<size_t>(i - 1)] = std::sqrt(v);
  std::vector<double> tail_sq(static_cast<size_t>(top) + 2, 0.0);  // ||u_i + u_{i+1} + ...||^2
  for (int i = top; i >= 1; --i) tail_sq[static_cast<size_t>(i)] = tail_sq[static_cast<size_t>(i) + 1] + (u_sq.count(i) ? u_sq[i] : 0.0);
  for (int i = 1; i <= top; ++i) {
    const double p = std::ldexp(1.0, i);
    const double ui = s.u_norms[static_cast<size_t>(i - 1)];
    s.a_minus += p * std::sqrt(tail_sq[static_cast<size_t>(i) + 1]);
    s.a_plus += p * std::sqrt(tail_sq[static_cast<size_t>(i)]);
    s.b_minus += p * ui;
    s.b_plus += 2 * p * ui;
  }
  for (const auto& [i, t] : beta_terms) s.beta_u += std::sqrt(t);
  if (!seq.has_negative()) s.gamma = gamma_condition(seq).value;
  else s.gamma = gamma_condition(CoefficientSeq::from_squares(seq.squares())).value;
  s.gamma_ok = leq(s.a_minus, s.gamma) && leq(s.gamma, s.a_plus);
  s.beta_ok = leq(s.b_minus, s.beta_u) && leq(s.beta_u, s.b_plus);
  s.chain_ok = leq(s.b_minus, s.a_plus) && leq(s.a_plus, s.b_plus);
  return s;
}

CriterionReport tandori_sum(const CoefficientSeq& seq) {
  CriterionReport r;
  r.name = "tandori";
  std::map<int, std::pair<double, size_t>> blocks;
  for (size_t k = 0; k < seq.size(); ++k) {
    const unsigned long n = k + 1;
    if (n < 2) {
      ++r.residual_count;
      continue;
    }
    // 2^{2^i} <= n < 2^{2^{i+1}} iff 2^i <= floor(log2 n) < 2^{i+1}
    const int fl = 63 - __builtin_clzl(n);
    const int i = 31 - __builtin_clz(static_cast<unsigned>(fl));
    const double l = std::log2(static_cast<double>(n));
    blocks[i].first += seq.squares()[k].get_d() * l * l;
    blocks[i].second += 1;
  }
  for (const auto& [i, t] : blocks) {
    r.blocks.push_back({i, std::sqrt(t.first), t.second});
    r.value += std::sqrt(t.first);
  }
  return r;
}

Theorem17Report theorem17_conditions(const CoefficientSeq& seq, IndicatorVariable indicator) {
  Theorem17Report r;
  r.indicator = indicator;
  const PointSet b = tail_set(seq);
  const StepFunction ib = info_fn(b, 2);
  const StepFunction x = indicator == IndicatorVariable::InfoBase2 ? ib : info_fn(b, 3);
  r.alpha1 = ib.l2_norm();
  const double top = std::max(x.max_value(), ib.max_value());
  for (int i = 1; std::ldexp(1.0, i) <= top; ++i) {
    const double lo = std::ldexp(1.0, i), hi = std::ldexp(1.0, i + 1);
    const StepFunction mask = x.map([=](double v) { return (v >= lo && v < hi) ? 1.0 : 0.0; });
    const double term = (ib * mask).l2_norm();
    r.beta1_blocks.push_back(term);
    r.beta1 += term;
  }
  r.gamma1_slices.push_back(slice(ib, 0).l2_norm());
  for (unsigned i = 1; std::ldexp(1.0, static_cast<int>(i)) < ib.max_value(); ++i) {
    const double term = slice(ib, i).l2_norm();
    r.gamma1_slices.push_back(term);
    r.gamma1 += term;
  }
  r.gamma1_with_slice0 = r.gamma1 + r.gamma1_slices.front();
  return r;
}

nlohmann::json to_json(const Theorem17Report& r) {
  return {{"alpha1", r.alpha1},
          {"beta1", r.beta1},
          {"gamma1", r.gamma1},
          {"gamma1_with_slice0", r.gamma1_with_slice0},
          {"beta1_blocks", r.beta1_blocks},
          {"gamma1_slices", r.gamma1_slices},
          {"indicator", r.indicator == IndicatorVariable::InfoBase2 ? "I_B" : "H_B"}};
}

namespace {

double measure_from_logs(const std::vector<std::pair<double, double>>& p_and_h) {
  double top = 0;
  for (const auto& [p, h] : p_and_h) top = std::max(top, h);
  auto slice_norm = [&](int i) {
    double acc = 0;
    for (const auto& [p, h] : p_and_h) {
      double v = i == 0 ? std::min(h, 2.0) : std::min(h, std::ldexp(1.0, i + 1)) - std::min(h, std::ldexp(1.0, i));
      acc += p * v * v;
    }
    return std::sqrt(acc);
  };
  double total = slice_norm(0);
  for (int i = 1; std::ldexp(1.0, i) < top; ++i) total += slice_norm(i);
  return total;
}

} // namespace

double measure_criterion(const std::vector<Rational>& probs) {
  if (probs.empty()) throw std::invalid_argument("measure_criterion: empty distribution");
  Rational sum = 0;
  std::vector<std::pair<double, double>> ph;
  for (const auto& p : probs) {
    if (p <= 0) throw std::invalid_argument("measure_criterion: probabilities must be positive");
    sum += p;
    long e = inverse_power_of_three(p);
    ph.emplace_back(p.get_d(), e >= 0 ? static_cast<double>(e) : -log_rational(p) / kLn3);
  }
  if (sum != 1) throw std::invalid_argument("measure_criterion: probabilities must sum to 1");
  return measure_from_logs(ph);
}

double measure_criterion(const std::vector<double>& probs) {
  if (probs.empty()) throw std::invalid_argument("measure_criterion: empty distribution");
  double sum = 0;
  std::vector<std::pair<double, double>> ph;
  for (double p : probs) {
    if (!(p > 0)) throw std::invalid_argument("measure_criterion: probabilities must be positive");
    sum += p;
    ph.emplace_back(p, -std::log(p) / kLn3);
  }
  if (std::fabs(sum - 1) > 1e-9) throw std::invalid_argument("measure_criterion: probabilities must sum to 1");
  return measure_from_logs(ph);
}

} // namespace oseries
