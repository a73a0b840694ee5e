#pragma once

#include "oseries/info.hpp"
#include "oseries/stepfn.hpp"
#include "oseries/surd.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <vector>

namespace oseries {

// Element of L2([0,1)) ⊕ L2(Z): a step-function body plus coordinates on an
// orthonormal family of external vectors (identified by integer ids).
struct OrthoVector {
  SurdStepFunction body;
  std::map<long, Surd> ext;

  static OrthoVector external(long id, const Surd& c = Surd(1));
  bool is_zero() const;

  OrthoVector& operator+=(const OrthoVector& o);
  OrthoVector& operator-=(const OrthoVector& o);
  friend OrthoVector operator+(OrthoVector a, const OrthoVector& b) { return a += b; }
  friend OrthoVector operator-(OrthoVector a, const OrthoVector& b) { return a -= b; }
  OrthoVector scaled(const Surd& c) const;
  friend bool operator==(const OrthoVector& a, const OrthoVector& b);
};

Surd inner(const OrthoVector& a, const OrthoVector& b);
Surd norm_sq(const OrthoVector& a);
double inner_double(const OrthoVector& a, const OrthoVector& b);

nlohmann::json to_json(const OrthoVector& v);

// Closed intervals with disjoint interiors, sorted.
struct SimpleSet {
  std::vector<std::pair<Rational, Rational>> intervals;
  Rational measure() const;
  Rational measure_between(const Rational& s, const Rational& t) const;  // λ([s,t] ∩ D)
  Rational min() const { return intervals.front().first; }
  Rational max() const { return intervals.back().second; }
  bool contains(const Rational& t) const;
};

enum class ProcessScale { Unit, Simple };

// Process given on finitely many times. Unit: ||X(t)-X(s)||^2 = t-s.
// Simple: ||X(t)-X(s)||^2 = 3·24^2 λ([s,t] ∩ D).
struct OrthoProcess {
  std::vector<Rational> times;
  std::vector<OrthoVector> values;
  ProcessScale scale = ProcessScale::Unit;
  SimpleSet domain;  // used by Simple scale

  const OrthoVector& at(const Rational& t) const;
  Rational expected_sq(const Rational& s, const Rational& t) const;
  // Y(t) = c X(t) with the scale switched.
  OrthoProcess rescaled(const Surd& c, ProcessScale to) const;
};

nlohmann::json to_json(const OrthoProcess& x);

struct GramReport {
  double max_deviation = 0.0;  // max over pairs |‖X(t)-X(s)‖² - expected|
  bool exact_zero = false;     // exact mode and every deviation vanished
  double origin_norm = 0.0;    // ‖X(min time)‖
  bool ok(double tol = 1e-9) const { return max_deviation <= tol && origin_norm <= tol; }
};
// Exact Surd arithmetic by default; exact = false evaluates in doubles.
GramReport gram_check(const OrthoProcess& x, bool exact = true);

// Pointwise max over the chosen times of body(X(t)) (or |body|).
SurdStepFunction maximal_body(const OrthoProcess& x, const std::vector<Rational>* subset = nullptr,
                              bool absolute = false);
StepFunction maximal_function(const OrthoProcess& x, const std::vector<Rational>* subset = nullptr,
                              bool absolute = false);
// λ(f >= y) (or λ(f > y) when strict) restricted to (a,b].
Rational exceedance(const SurdStepFunction& f, const Surd& y, bool strict = false,
                    const Rational& a = Rational(0), const Rational& b = Rational(1));

// ‖max_t |X(t)|‖² with external coordinates realized on disjoint unit-measure sets.
Surd max_norm_sq(const std::vector<OrthoVector>& xs);

struct MenshovReport {
  double lhs = 0.0;  // ‖max_n |Y_1+...+Y_n|‖²
  double rhs = 0.0;  // (log2 N + 1)² Σ ‖Y_n‖²
  bool ok = false;
};
MenshovReport menshov_bound_check(const std::vector<OrthoVector>& ys);

struct AtomMaximal {
  BigInt index;
  double norm = 0.0;       // ‖M_m^j‖
  StepFunction body_max;   // max |body| part
};
// M_m^j for every level-j atom whose open interior meets the times; other atoms have M = 0.
std::vector<AtomMaximal> m_grid(const OrthoProcess& x, unsigned j);

// Finite product of factor processes on consecutive time blocks (α_{s+1}, α_s].
struct ProductFactor {
  OrthoProcess process;   // unit scale, bodies on [0,1)
  Rational lo, hi;        // the block
  // common refinement of [0,1): measures with (max, min, final) body values
  std::vector<Rational> measure;
  std::vector<double> max_body, min_body, final_body;
};
struct ProductProcess {
  std::vector<ProductFactor> factors;  // factor 0 is the block ending at 1
  bool independent = false;            // bodies mean zero, disjoint external ids
  // λ^{⊗S}(max_t |X(t)| > y) (>= y when strict = false)
  double max_exceedance(double y, bool strict = true, bool absolute = true) const;
  // λ(∪_s {max_{t in block s} |X_s(t)| > y}) = 1 - Π(1 - p_s)
  Rational union_exceedance(double y, bool strict = true, bool absolute = true) const;
  Rational factor_exceedance(size_t s, double y, bool strict = true, bool absolute = true) const;
};
constexpr size_t kMaxProductFactors = 4;
constexpr double kProductBudget = 1e7;
ProductProcess glue_blocks(const std::vector<OrthoProcess>& blocks, const std::vector<Rational>& alphas);

} // namespace oseries
