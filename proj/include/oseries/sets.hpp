#pragma once

#include "oseries/info.hpp"
#include "oseries/stepfn.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace oseries {

// Smallest i with t a multiple of 3^{-2^i}; -1 if t is not a triadic grid point.
int grid_level(const Rational& t);

struct TriadicSetCheck {
  bool ok = true;
  std::string reason;
  Rational point;     // offending point (or an endpoint that is missing)
  int level = -1;
  BigInt index;
};
TriadicSetCheck is_triadic_set(const PointSet& b);

struct GridPair {
  unsigned level = 0;
  BigInt index;
  friend bool operator<(const GridPair& x, const GridPair& y) {
    return x.level != y.level ? x.level < y.level : x.index < y.index;
  }
  friend bool operator==(const GridPair& x, const GridPair& y) { return x.level == y.level && x.index == y.index; }
};

struct GeneratedSetResult {
  PointSet base;
  PointSet generated;
  std::vector<GridPair> pairs;  // the index set I, sorted
  TriadicSetCheck triadic;      // the output is triadic
};
GeneratedSetResult generate(const PointSet& a);
nlohmann::json to_json(const GeneratedSetResult& g);

// rho(t, S) = distance from t to the sorted set S.
Rational rho(const Rational& t, const std::vector<Rational>& s);

struct RhoSums {
  Rational generated_to_base;  // sum over t in Ã of rho(t, A)
  Rational base_to_generated;  // sum over s in A of rho(s, Ã)
  bool first_ok = false;       // <= 3
  bool second_ok = false;      // <= 1
};
RhoSums rho_sums(const PointSet& a, const PointSet& generated);

struct MonotonicityReport {
  bool subset_ok = false;          // Ã ⊆ Ã1
  size_t difference_size = 0;      // #(Ã1 \ Ã)
  bool info_ok = false;            // h_Ã >= h_A and h_Ã1 >= h_A1
  bool equal_when_same = true;     // A = A1 forces Ã = Ã1
};
MonotonicityReport monotonicity_checks(const PointSet& a, const PointSet& a1);

// Measure-preserving bijection of (0,1] that translates each piece (l, r] by `shift`.
class ShiftMap {
public:
  struct Piece {
    Rational left, right, shift;
  };

  ShiftMap();  // identity
  // Permutes the level-(j+1) atoms inside delta_m^j: sub-atom k goes to slot perm[k].
  // j = -1 permutes the three level-0 atoms of (0,1] (m must be 0).
  static ShiftMap of_type(int j, const BigInt& m, const std::vector<size_t>& perm);

  const std::vector<Piece>& pieces() const { return pieces_; }
  Rational apply(const Rational& t) const;  // 0 is fixed
  PointSet apply(const PointSet& b) const;
  StepFunction push_forward(const StepFunction& f) const;  // f ∘ S^{-1}
  ShiftMap compose(const ShiftMap& inner) const;           // this ∘ inner
  ShiftMap inverse() const;
  bool is_identity() const;
  bool is_bijective() const;  // images tile (0,1]

private:
  explicit ShiftMap(std::vector<Piece> pieces);
  std::vector<Piece> pieces_;
};

// Level-(j+1) grid points of the closure of delta_m^j.
std::vector<Rational> sub_grid_points(int j, const BigInt& m);

struct ContinuityWindow {
  Rational half_width;
  Rational left, right;        // U = [left, right]
  std::vector<double> trace;   // V(H 1_U) at depth 1..D
  double ratio = 0.0;          // largest increment ratio over the second half of the trace
  double limit_estimate = 0.0; // last value plus the geometric tail of the increments
  bool stabilized = false;     // increments vanish or decay geometrically
};
struct ContinuityReport {
  Rational t;
  std::vector<ContinuityWindow> windows;
  std::string verdict;
};
// For every window U = [t - w, t + w] ∩ [0,1] and depth d = 1..max_depth, V of
// min(H_B, d + 1) 1_U with the generator resolved to depth d.
ContinuityReport continuity_verdict(const ClosedSet& b, const Rational& t, const std::vector<Rational>& half_widths,
                                    unsigned max_depth);
nlohmann::json to_json(const ContinuityReport& r);

struct CantorTail {
  unsigned k = 0;
  Rational l2_sq_partial;   // sum_{k < m <= levels} (m-k)^2 lambda(H_C = m)
  Rational l1_partial;      // sum_{k < m <= levels} (m-k) lambda(H_C = m)
  double l2 = 0.0;          // sqrt(l2_sq_partial)
  double bound = 0.0;       // 3 (2/3)^k
  bool bound_ok = false;    // l2 <= bound
};
// ||(H_C - k)^+|| from the level distribution of H_C, summed to `levels`.
CantorTail cantor_tail(unsigned k, unsigned levels = 200);

} // namespace oseries
