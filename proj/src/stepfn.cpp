#include "oseries/stepfn.hpp"

#include <cmath>
#include <stdexcept>

namespace oseries {

double pow2(int j) { return std::ldexp(1.0, j); }

TriadicAtom atom_containing(const Rational& t, unsigned level) {
  if (!(t > 0 && t <= 1)) throw std::out_of_range("atom_containing: t must lie in (0,1]");
  Rational q = t / grid_unit(level);
  return TriadicAtom{level, ceil_div(q) - 1};
}

bool is_grid_point(const Rational& t, unsigned level) { return is_integer(t / grid_unit(level)); }

StepFunction cond_norm(const StepFunction& f, unsigned level) {
  const auto& bp = f.breakpoints();
  const auto& v = f.values();
  for (double x : v) {
    if (!std::isfinite(x)) throw std::overflow_error("cond_norm: non-finite value");
    if (x < -1e-12) throw std::invalid_argument("cond_norm: negative input");
  }
  const Rational u = grid_unit(level);

  std::vector<BigInt> cut;
  for (size_t k = 0; k + 1 < bp.size(); ++k) {
    Rational q = bp[k] / u;
    if (is_integer(q)) continue;
    BigInt n = floor_div(q);
    if (cut.empty() || cut.back() != n) cut.push_back(n);
  }
  if (cut.empty()) return f.abs_value();

  std::vector<Rational> ob;
  std::vector<double> ov;
  ob.reserve(bp.size() + 2 * cut.size());
  ov.reserve(bp.size() + 2 * cut.size());
  Rational emitted(0);
  size_t k = 0;
  for (const BigInt& n : cut) {
    Rational a = Rational(n) * u;
    Rational b = a + u;
    while (bp[k] <= a) {
      ob.push_back(bp[k]);
      ov.push_back(std::fabs(v[k]));
      emitted = bp[k];
      ++k;
    }
    if (a > emitted) {
      ob.push_back(a);
      ov.push_back(std::fabs(v[k]));
    }
    double acc = 0.0;
    Rational lo = a;
    while (true) {
      const Rational& hi = bp[k] < b ? bp[k] : b;
      acc += v[k] * v[k] * Rational((hi - lo) / u).get_d();
      lo = hi;
      if (bp[k] < b) {
        ++k;
      } else {
        if (bp[k] == b) ++k;
        break;
      }
    }
    ob.push_back(b);
    ov.push_back(std::sqrt(acc));
    emitted = b;
  }
  for (; k < bp.size(); ++k) {
    ob.push_back(bp[k]);
    ov.push_back(std::fabs(v[k]));
  }
  return StepFunction(std::move(ob), std::move(ov));
}

StepFunction slice(const StepFunction& f, unsigned i) {
  if (i == 0) return f.clip_min(2.0);
  return slice_mid(f, static_cast<int>(i));
}

StepFunction slice_down(const StepFunction& f, int j) { return f.clip_min(pow2(j)); }

StepFunction slice_mid(const StepFunction& f, int j) {
  const double lo = pow2(j), hi = pow2(j + 1);
  return f.map([=](double x) { return std::min(x, hi) - std::min(x, lo); });
}

StepFunction slice_up(const StepFunction& f, int j) {
  const double c = pow2(j);
  return f.map([=](double x) { return x - std::min(x, c); });
}

nlohmann::json to_json(const StepFunction& f) {
  nlohmann::json bp = nlohmann::json::array(), vs = nlohmann::json::array();
  for (size_t k = 0; k < f.size(); ++k) {
    bp.push_back(to_string(f.right(k)));
    vs.push_back(f.values()[k]);
  }
  return {{"breakpoints", bp}, {"values", vs}};
}

nlohmann::json to_json(const ExactStepFunction& f) {
  nlohmann::json bp = nlohmann::json::array(), vs = nlohmann::json::array();
  for (size_t k = 0; k < f.size(); ++k) {
    bp.push_back(to_string(f.right(k)));
    vs.push_back(to_string(f.values()[k]));
  }
  return {{"breakpoints", bp}, {"values", vs}};
}

namespace {

std::vector<Rational> parse_breakpoints(const nlohmann::json& j) {
  if (!j.contains("breakpoints") || !j.contains("values"))
    throw std::invalid_argument("step function JSON needs 'breakpoints' and 'values'");
  std::vector<Rational> bp;
  for (const auto& x : j.at("breakpoints")) {
    if (x.is_string()) bp.push_back(parse_rational(x.get<std::string>()));
    else if (x.is_number_integer()) bp.push_back(Rational(x.get<long>()));
    else throw std::invalid_argument("breakpoints must be \"p/q\" strings");
  }
  return bp;
}

} // namespace

StepFunction step_function_from_json(const nlohmann::json& j) {
  auto bp = parse_breakpoints(j);
  std::vector<double> vs;
  for (const auto& x : j.at("values")) {
    if (x.is_number()) vs.push_back(x.get<double>());
    else if (x.is_string()) vs.push_back(parse_rational(x.get<std::string>()).get_d());
    else throw std::invalid_argument("values must be numbers");
  }
  return StepFunction(std::move(bp), std::move(vs));
}

ExactStepFunction exact_step_function_from_json(const nlohmann::json& j) {
  auto bp = parse_breakpoints(j);
  std::vector<Rational> vs;
  for (const auto& x : j.at("values")) {
    if (x.is_string()) vs.push_back(parse_rational(x.get<std::string>()));
    else if (x.is_number_integer()) vs.push_back(Rational(x.get<long>()));
    else if (x.is_number()) vs.push_back(from_double(x.get<double>()));
    else throw std::invalid_argument("values must be rationals");
  }
  return ExactStepFunction(std::move(bp), std::move(vs));
}

} // namespace oseries
