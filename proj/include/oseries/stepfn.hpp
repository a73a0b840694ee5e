#pragma once

#include "oseries/rational.hpp"
#include "oseries/surd.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oseries {

namespace detail {

inline double times_length(double v, const Rational& len) { return v * len.get_d(); }
inline Rational times_length(const Rational& v, const Rational& len) { return v * len; }
inline Surd times_length(const Surd& v, const Rational& len) { return v * Surd(len); }

inline double as_double(double v) { return v; }
inline double as_double(const Rational& v) { return v.get_d(); }
inline double as_double(const Surd& v) { return v.to_double(); }

inline bool same_value(double a, double b) { return a == b; }
inline bool same_value(const Rational& a, const Rational& b) { return a == b; }
inline bool same_value(const Surd& a, const Surd& b) { return a == b; }

} // namespace detail

// Piecewise-constant function on (0,1]. Piece k is (b_{k-1}, b_k] with b_{-1} = 0;
// the breakpoints end at 1 and adjacent pieces always carry distinct values.
template <class V>
class BasicStepFunction {
public:
  using value_type = V;

  BasicStepFunction() : bps_{Rational(1)}, vals_{V(0)} {}

  BasicStepFunction(std::vector<Rational> breakpoints, std::vector<V> values)
      : bps_(std::move(breakpoints)), vals_(std::move(values)) {
    for (auto& b : bps_) b.canonicalize();
    validate();
    canonicalize();
  }

  static BasicStepFunction constant(const V& c) { return BasicStepFunction({Rational(1)}, {c}); }

  // c on (a,b], 0 elsewhere.
  static BasicStepFunction indicator(const Rational& a, const Rational& b, const V& c = V(1)) {
    if (!(0 <= a && a <= b && b <= 1)) throw std::invalid_argument("indicator: need 0 <= a <= b <= 1");
    std::vector<Rational> bp;
    std::vector<V> vs;
    if (a > 0) {
      bp.push_back(a);
      vs.push_back(V(0));
    }
    if (b > a) {
      bp.push_back(b);
      vs.push_back(c);
    }
    if (b < 1) {
      bp.push_back(Rational(1));
      vs.push_back(V(0));
    }
    if (bp.empty()) return constant(V(0));
    return BasicStepFunction(std::move(bp), std::move(vs));
  }

  const std::vector<Rational>& breakpoints() const { return bps_; }
  const std::vector<V>& values() const { return vals_; }
  size_t size() const { return bps_.size(); }
  Rational left(size_t k) const { return k == 0 ? Rational(0) : bps_[k - 1]; }
  const Rational& right(size_t k) const { return bps_[k]; }
  Rational length(size_t k) const { return right(k) - left(k); }

  size_t piece_index(const Rational& t) const {
    if (!(t > 0 && t <= 1)) throw std::out_of_range("eval: t must lie in (0,1]");
    auto it = std::lower_bound(bps_.begin(), bps_.end(), t);
    return static_cast<size_t>(it - bps_.begin());
  }

  const V& eval(const Rational& t) const { return vals_[piece_index(t)]; }

  template <class F>
  auto map(F&& fn) const -> BasicStepFunction<std::decay_t<decltype(fn(std::declval<const V&>()))>> {
    using W = std::decay_t<decltype(fn(std::declval<const V&>()))>;
    std::vector<W> out;
    out.reserve(vals_.size());
    for (const auto& v : vals_) out.push_back(fn(v));
    return BasicStepFunction<W>(bps_, std::move(out));
  }

  template <class F>
  BasicStepFunction combine(const BasicStepFunction& o, F&& fn) const {
    std::vector<Rational> bp;
    std::vector<V> vs;
    bp.reserve(bps_.size() + o.bps_.size());
    vs.reserve(bps_.size() + o.bps_.size());
    size_t i = 0, j = 0;
    while (i < bps_.size() && j < o.bps_.size()) {
      int c = cmp(bps_[i], o.bps_[j]);
      vs.push_back(fn(vals_[i], o.vals_[j]));
      if (c < 0) {
        bp.push_back(bps_[i++]);
      } else if (c > 0) {
        bp.push_back(o.bps_[j++]);
      } else {
        bp.push_back(bps_[i]);
        ++i;
        ++j;
      }
    }
    return BasicStepFunction(std::move(bp), std::move(vs));
  }

  BasicStepFunction operator+(const BasicStepFunction& o) const { return combine(o, [](const V& a, const V& b) { return a + b; }); }
  BasicStepFunction operator-(const BasicStepFunction& o) const { return combine(o, [](const V& a, const V& b) { return a - b; }); }
  BasicStepFunction operator*(const BasicStepFunction& o) const { return combine(o, [](const V& a, const V& b) { return a * b; }); }
  BasicStepFunction operator-() const { return map([](const V& a) { return V(-a); }); }
  BasicStepFunction scaled(const V& c) const { return map([&](const V& a) { return V(a * c); }); }

  BasicStepFunction min_with(const BasicStepFunction& o) const {
    return combine(o, [](const V& a, const V& b) { return b < a ? b : a; });
  }
  BasicStepFunction max_with(const BasicStepFunction& o) const {
    return combine(o, [](const V& a, const V& b) { return a < b ? b : a; });
  }
  // f ∧ c
  BasicStepFunction clip_min(const V& c) const { return map([&](const V& a) { return c < a ? c : a; }); }
  // f ∨ c
  BasicStepFunction clip_max(const V& c) const { return map([&](const V& a) { return a < c ? c : a; }); }
  // (f - c)^+
  BasicStepFunction pos_part(const V& c = V(0)) const {
    return map([&](const V& a) { return c < a ? V(a - c) : V(0); });
  }
  BasicStepFunction abs_value() const { return map([](const V& a) { return a < V(0) ? V(-a) : a; }); }

  // f * 1_{(a,b]}
  BasicStepFunction restrict_to(const Rational& a, const Rational& b) const {
    return *this * indicator(a, b, V(1));
  }

  V integral() const {
    V acc(0);
    for (size_t k = 0; k < size(); ++k) acc += detail::times_length(vals_[k], length(k));
    return acc;
  }
  V norm_sq() const {
    V acc(0);
    for (size_t k = 0; k < size(); ++k) acc += detail::times_length(vals_[k] * vals_[k], length(k));
    return acc;
  }
  double l2_norm() const { return std::sqrt(std::max(0.0, detail::as_double(norm_sq()))); }

  V max_value() const { return *std::max_element(vals_.begin(), vals_.end()); }
  V min_value() const { return *std::min_element(vals_.begin(), vals_.end()); }

  // Lebesgue measure of {f >= c} (or {f > c} when strict).
  Rational measure_where(const std::function<bool(const V&)>& pred) const {
    Rational m(0);
    for (size_t k = 0; k < size(); ++k)
      if (pred(vals_[k])) m += length(k);
    return m;
  }

  BasicStepFunction<double> to_double() const {
    return map([](const V& v) { return detail::as_double(v); });
  }

  friend bool operator==(const BasicStepFunction& a, const BasicStepFunction& b) {
    if (a.bps_ != b.bps_) return false;
    for (size_t k = 0; k < a.vals_.size(); ++k)
      if (!detail::same_value(a.vals_[k], b.vals_[k])) return false;
    return true;
  }

private:
  void validate() const {
    if (bps_.empty() || bps_.size() != vals_.size())
      throw std::invalid_argument("step function: breakpoints and values must be nonempty and of equal length");
    if (bps_.back() != 1) throw std::invalid_argument("step function: last breakpoint must be 1");
    if (bps_.front() <= 0) throw std::invalid_argument("step function: breakpoints must be positive");
    for (size_t k = 1; k < bps_.size(); ++k)
      if (!(bps_[k - 1] < bps_[k])) throw std::invalid_argument("step function: breakpoints must increase strictly");
  }

  void canonicalize() {
    size_t w = 0;
    for (size_t k = 0; k < bps_.size(); ++k) {
      if (w > 0 && detail::same_value(vals_[w - 1], vals_[k])) {
        bps_[w - 1] = std::move(bps_[k]);
      } else {
        if (w != k) {
          bps_[w] = std::move(bps_[k]);
          vals_[w] = std::move(vals_[k]);
        }
        ++w;
      }
    }
    bps_.resize(w);
    vals_.resize(w);
  }

  std::vector<Rational> bps_;
  std::vector<V> vals_;
};

using StepFunction = BasicStepFunction<double>;
using ExactStepFunction = BasicStepFunction<Rational>;
using SurdStepFunction = BasicStepFunction<Surd>;

// Atom delta_n^i = (n 3^{-2^i}, (n+1) 3^{-2^i}].
struct TriadicAtom {
  unsigned level = 0;
  BigInt index;
  Rational left() const { return Rational(index) * grid_unit(level); }
  Rational right() const { return Rational(index + 1) * grid_unit(level); }
  BigInt count() const { return pow3(1UL << level); }
};

// Atom of level i whose half-open interval contains t in (0,1].
TriadicAtom atom_containing(const Rational& t, unsigned level);
bool is_grid_point(const Rational& t, unsigned level);

// Atom-wise root mean square of f over F_level. Requires f >= 0.
StepFunction cond_norm(const StepFunction& f, unsigned level);

// Slices f_0 = f ∧ 2, f_i = f ∧ 2^{i+1} - f ∧ 2^i, and the down/mid/up split.
StepFunction slice(const StepFunction& f, unsigned i);
StepFunction slice_down(const StepFunction& f, int j);  // f ∧ 2^j
StepFunction slice_mid(const StepFunction& f, int j);   // f ∧ 2^{j+1} - f ∧ 2^j
StepFunction slice_up(const StepFunction& f, int j);    // f - f ∧ 2^j

nlohmann::json to_json(const StepFunction& f);
nlohmann::json to_json(const ExactStepFunction& f);
StepFunction step_function_from_json(const nlohmann::json& j);
ExactStepFunction exact_step_function_from_json(const nlohmann::json& j);

double pow2(int j);

} // namespace oseries
