#pragma once

#include "oseries/stepfn.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

// Dense materialization of a step function on the level-2 cell grid (1/729 cells: every
// level-0 atom holds 243 cells, level-1 atoms 81, level-2 atoms 9). Breakpoints must lie on it.
constexpr long kCells = 729;

inline long cells_per_atom(unsigned level) {
  switch (level) {
    case 0: return 243;
    case 1: return 81;
    case 2: return 9;
    default: return 1;
  }
}

inline std::vector<double> dense(const oseries::StepFunction& f) {
  std::vector<double> v(kCells);
  for (long c = 0; c < kCells; ++c) v[c] = f.eval(oseries::Rational(c + 1, kCells));
  return v;
}

// h ∧ 2^j + atom-wise root mean square of (h - 2^j)^+, evaluated cell by cell.
inline std::vector<double> v_step(const std::vector<double>& h, unsigned j) {
  const double c = std::ldexp(1.0, static_cast<int>(j));
  const long w = cells_per_atom(j);
  std::vector<double> out(h.size());
  for (long a = 0; a < kCells; a += w) {
    double s = 0;
    for (long x = a; x < a + w; ++x) {
      double e = std::max(h[x] - c, 0.0);
      s += e * e;
    }
    const double rms = std::sqrt(s / static_cast<double>(w));
    for (long x = a; x < a + w; ++x) out[x] = std::min(h[x], c) + rms;
  }
  return out;
}

inline std::vector<double> v_apply(std::vector<double> h, unsigned lo, unsigned hi) {
  for (unsigned j = hi + 1; j-- > lo;) h = v_step(h, j);
  return h;
}

inline double l2(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (size_t k = 0; k < a.size(); ++k) m = std::max(m, std::fabs(a[k] - b[k]));
  return m;
}

} // namespace oracle
