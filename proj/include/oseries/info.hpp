#pragma once

#include "oseries/rational.hpp"
#include "oseries/stepfn.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace oseries {

// Finite coefficient sequence (a_n). Squares are kept exactly.
class CoefficientSeq {
public:
  CoefficientSeq() = default;
  static CoefficientSeq from_values(const std::vector<Rational>& a);
  static CoefficientSeq from_doubles(const std::vector<double>& a);
  static CoefficientSeq from_squares(const std::vector<Rational>& squares);

  size_t size() const { return squares_.size(); }
  bool empty() const { return squares_.empty(); }
  const std::vector<Rational>& squares() const { return squares_; }
  // |a_n| as doubles.
  const std::vector<double>& moduli() const { return moduli_; }
  Rational total() const;
  bool is_normalized() const { return total() == 1; }
  CoefficientSeq normalized() const;
  bool is_decreasing() const;
  bool has_negative() const { return negative_; }

private:
  std::vector<Rational> squares_;
  std::vector<double> moduli_;
  bool negative_ = false;
};

// Accepts a JSON list of numbers / "p/q" / decimal strings, or {"squares": [...]},
// or CSV with one value per line. Errors carry the offending line number.
CoefficientSeq parse_coefficients(const std::string& text);

class PointSet {
public:
  PointSet() : pts_{Rational(0), Rational(1)} {}
  // Sorts and removes duplicates; {0,1} must be present and points must lie in [0,1].
  explicit PointSet(std::vector<Rational> pts, bool closed = true);
  static PointSet with_endpoints(std::vector<Rational> pts);

  const std::vector<Rational>& points() const { return pts_; }
  size_t size() const { return pts_.size(); }
  bool contains(const Rational& t) const;
  bool closed() const { return closed_; }
  PointSet intersect(const Rational& a, const Rational& b) const;  // B ∩ [a,b] plus {0,1}
  Rational min_gap() const;

  friend bool operator==(const PointSet& a, const PointSet& b) { return a.pts_ == b.pts_; }

private:
  std::vector<Rational> pts_;
  bool closed_ = true;
};

nlohmann::json to_json(const PointSet& b);
PointSet point_set_from_json(const nlohmann::json& j);

PointSet tail_set(const CoefficientSeq& seq);

// h_B (base 3) or I_B (base 2): -log_base(beta - alpha) on each gap (alpha, beta].
StepFunction info_fn(const PointSet& b, int base = 3);
// Integer-valued h_B when every gap is a power of 1/3.
std::optional<ExactStepFunction> info_fn_exact(const PointSet& b);

// Closed set given by a generator: a finite set, or the middle-third Cantor set.
struct ClosedSet {
  enum class Kind { Finite, Cantor };
  Kind kind = Kind::Finite;
  PointSet finite;
  unsigned depth = 0;  // default truncation depth for generated sets
  static ClosedSet from_finite(PointSet b) { return ClosedSet{Kind::Finite, std::move(b), 0}; }
  static ClosedSet cantor(unsigned depth = 0) { return ClosedSet{Kind::Cantor, PointSet(), depth}; }
  bool contains(const Rational& t) const;
};

nlohmann::json to_json(const ClosedSet& c);
ClosedSet closed_set_from_json(const nlohmann::json& j);

bool cantor_contains(const Rational& t);

// min(H_B, clip) where H_B = +inf on B. For the Cantor generator the gaps removed
// at steps 1..depth are resolved exactly and the unresolved remainder gets `clip`;
// this equals min(H_C, clip) whenever clip <= depth + 1. A negative depth picks
// the smallest depth with that property.
StepFunction info_fn_closed(const ClosedSet& c, double clip, int depth = -1);

// Distribution of H_C for the Cantor set: entry m-1 is lambda(H_C = m), m = 1..levels.
std::vector<Rational> cantor_level_measures(unsigned levels);

double dyadic_floor(double a);      // 2^j for 2^j <= a < 2^{j+1}
double dyadic_halffloor(double a);  // 2^{j-1}
// With clip_below the input is replaced by max(f,1) first; otherwise f < 1 throws.
StepFunction dyadic_floor(const StepFunction& f, bool clip_below = false);
StepFunction dyadic_halffloor(const StepFunction& f, bool clip_below = false);

struct TriadicWitness {
  bool ok = true;
  unsigned level = 0;
  BigInt index;
};
TriadicWitness is_triadic_fn(const StepFunction& h);

// Run of consecutive level-(j+1) atoms n_first .. n_first+count-1 sharing the value
// h - 2^{j+1} = a inside an atom delta_m^j.
struct SubAtomRun {
  BigInt first;
  BigInt count;
  double a = 0.0;
};
// Atoms delta_m^j for m in [m_first, m_first + m_count) all carry the same runs;
// run indices are relative to the first level-(j+1) atom inside delta_m^j.
struct TypeJBlock {
  BigInt m_first;
  BigInt m_count;
  std::vector<SubAtomRun> runs;
};
struct TypeJCheck {
  bool ok = true;
  std::string reason;
  std::vector<TypeJBlock> representation;
};
TypeJCheck is_type_j(const StepFunction& h, unsigned j);

} // namespace oseries
