#include "oseries/sets.hpp"

#include "oseries/vcalc.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace oseries {

int grid_level(const Rational& t) {
  if (t < 0 || t > 1) return -1;
  const long e = inverse_power_of_three(Rational(1) / Rational(t.get_den()));
  if (e < 0) return -1;
  int lvl = 0;
  while ((1L << lvl) < e) ++lvl;
  return lvl;
}

namespace {

bool contains_sorted(const std::vector<Rational>& s, const Rational& t) { return std::binary_search(s.begin(), s.end(), t); }

constexpr unsigned kMaxLevel = 20;

} // namespace

TriadicSetCheck is_triadic_set(const PointSet& b) {
  TriadicSetCheck out;
  const auto& pts = b.points();
  for (const Rational& base : {Rational(0), Rational(1, 3), Rational(2, 3), Rational(1)}) {
    if (!contains_sorted(pts, base)) {
      out.ok = false;
      out.reason = "missing base point " + to_string(base);
      out.point = base;
      return out;
    }
  }
  const Rational gap = b.min_gap();
  for (const Rational& p : pts) {
    const int lvl = grid_level(p);
    if (lvl < 0) {
      out.ok = false;
      out.reason = to_string(p) + " is not a triadic grid point";
      out.point = p;
      return out;
    }
    if (static_cast<unsigned>(lvl) > kMaxLevel) throw std::length_error("is_triadic_set: grid level above 20");
    for (int i = 0; i < lvl; ++i) {
      const Rational u = grid_unit(static_cast<unsigned>(i));
      const BigInt n = floor_div(p / u);
      const Rational lo = Rational(n) * u, hi = lo + u;
      if (!contains_sorted(pts, lo) || !contains_sorted(pts, hi)) {
        out.ok = false;
        out.reason = to_string(p) + " lies inside atom (" + to_string(lo) + ", " + to_string(hi) + ") without both endpoints";
        out.point = p;
        out.level = i;
        out.index = n;
        return out;
      }
    }
    bool paired = false;
    for (unsigned i = static_cast<unsigned>(lvl); i <= kMaxLevel && !paired; ++i) {
      const Rational u = grid_unit(i);
      if (u < gap) break;
      if ((p + u <= 1 && contains_sorted(pts, p + u)) || (p - u >= 0 && contains_sorted(pts, p - u))) paired = true;
    }
    if (!paired) {
      out.ok = false;
      out.reason = to_string(p) + " is not an endpoint of any grid pair inside the set";
      out.point = p;
      out.level = lvl;
      return out;
    }
  }
  return out;
}

Rational rho(const Rational& t, const std::vector<Rational>& s) {
  if (s.empty()) throw std::invalid_argument("rho: empty set");
  auto it = std::lower_bound(s.begin(), s.end(), t);
  Rational best = -1;
  if (it != s.end()) best = *it - t;
  if (it != s.begin()) {
    Rational d = t - *std::prev(it);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

GeneratedSetResult generate(const PointSet& a) {
  GeneratedSetResult out;
  out.base = a;
  std::set<GridPair> pairs;
  const auto& pts = a.points();
  for (size_t k = 0; k < pts.size(); ++k) {
    const Rational& t = pts[k];
    if (t <= 0) continue;
    Rational d = -1;
    if (k > 0) d = t - pts[k - 1];
    if (k + 1 < pts.size() && (d < 0 || pts[k + 1] - t < d)) d = pts[k + 1] - t;
    if (d < 0) continue;
    for (unsigned i = 1; grid_unit(i - 1) >= d; ++i) {
      if (i > kMaxLevel) throw std::length_error("generate: points closer than the level-20 grid");
      pairs.insert(GridPair{i, atom_containing(t, i).index});
    }
  }
  std::vector<Rational> g{Rational(0), Rational(1, 3), Rational(2, 3), Rational(1)};
  for (const auto& p : pairs) {
    const Rational u = grid_unit(p.level);
    g.push_back(Rational(p.index) * u);
    g.push_back(Rational(p.index + 1) * u);
  }
  out.generated = PointSet(std::move(g));
  out.pairs.assign(pairs.begin(), pairs.end());
  out.triadic = is_triadic_set(out.generated);
  return out;
}

nlohmann::json to_json(const GeneratedSetResult& g) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : g.pairs) pairs.push_back({{"level", p.level}, {"index", p.index.get_str()}});
  return {{"base", to_json(g.base)},
          {"generated", to_json(g.generated)},
          {"pairs", pairs},
          {"triadic", g.triadic.ok}};
}

RhoSums rho_sums(const PointSet& a, const PointSet& generated) {
  RhoSums r;
  r.generated_to_base = 0;
  r.base_to_generated = 0;
  for (const auto& t : generated.points()) r.generated_to_base += rho(t, a.points());
  for (const auto& s : a.points()) r.base_to_generated += rho(s, generated.points());
  r.first_ok = r.generated_to_base <= 3;
  r.second_ok = r.base_to_generated <= 1;
  return r;
}

MonotonicityReport monotonicity_checks(const PointSet& a, const PointSet& a1) {
  for (const auto& p : a.points())
    if (!a1.contains(p)) throw std::invalid_argument("monotonicity_checks: requires A ⊆ A1");
  MonotonicityReport r;
  const GeneratedSetResult g = generate(a), g1 = generate(a1);
  r.subset_ok = true;
  for (const auto& p : g.generated.points())
    if (!g1.generated.contains(p)) r.subset_ok = false;
  for (const auto& p : g1.generated.points())
    if (!g.generated.contains(p)) ++r.difference_size;
  auto dominates = [](const PointSet& gen, const PointSet& base) {
    const StepFunction diff = info_fn(gen, 3) - info_fn(base, 3);
    return diff.min_value() >= -1e-12;
  };
  r.info_ok = dominates(g.generated, a) && dominates(g1.generated, a1);
  if (a == a1) r.equal_when_same = g.generated == g1.generated;
  return r;
}

ShiftMap::ShiftMap() : pieces_{{Rational(0), Rational(1), Rational(0)}} {}

ShiftMap::ShiftMap(std::vector<Piece> pieces) {
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.left < y.left; });
  for (auto& p : pieces) {
    if (!(p.right > p.left)) continue;
    if (!pieces_.empty() && pieces_.back().right == p.left && pieces_.back().shift == p.shift) {
      pieces_.back().right = p.right;
    } else {
      pieces_.push_back(std::move(p));
    }
  }
}

ShiftMap ShiftMap::of_type(int j, const BigInt& m, const std::vector<size_t>& perm) {
  if (j < -1) throw std::invalid_argument("shift map: level must be >= -1");
  Rational lo(0), hi(1);
  if (j >= 0) {
    if (static_cast<unsigned>(j) >= kMaxLevel) throw std::invalid_argument("shift map: level too large");
    const Rational ul = grid_unit(static_cast<unsigned>(j));
    if (m < 0 || Rational(m) * ul >= 1) throw std::invalid_argument("shift map: atom index out of range");
    lo = Rational(m) * ul;
    hi = lo + ul;
  } else if (m != 0) {
    throw std::invalid_argument("shift map: the (-1)-type map acts on the single atom m = 0");
  }
  const Rational us = grid_unit(static_cast<unsigned>(j + 1));
  const BigInt count = floor_div((hi - lo) / us);
  if (BigInt(static_cast<unsigned long>(perm.size())) != count)
    throw std::invalid_argument("shift map: permutation must have " + count.get_str() + " entries");
  std::vector<bool> seen(perm.size(), false);
  for (size_t k : perm) {
    if (k >= perm.size() || seen[k]) throw std::invalid_argument("shift map: not a permutation");
    seen[k] = true;
  }
  std::vector<Piece> pieces;
  if (lo > 0) pieces.push_back({Rational(0), lo, Rational(0)});
  for (size_t k = 0; k < perm.size(); ++k) {
    const Rational l = lo + us * static_cast<long>(k);
    pieces.push_back({l, l + us, us * (static_cast<long>(perm[k]) - static_cast<long>(k))});
  }
  if (hi < 1) pieces.push_back({hi, Rational(1), Rational(0)});
  return ShiftMap(std::move(pieces));
}

Rational ShiftMap::apply(const Rational& t) const {
  if (t == 0) return t;
  if (!(t > 0 && t <= 1)) throw std::out_of_range("shift map: argument outside [0,1]");
  for (const auto& p : pieces_)
    if (t > p.left && t <= p.right) return t + p.shift;
  throw std::logic_error("shift map: pieces do not cover (0,1]");
}

PointSet ShiftMap::apply(const PointSet& b) const {
  std::vector<Rational> out;
  for (const auto& p : b.points()) out.push_back(apply(p));
  return PointSet::with_endpoints(std::move(out));
}

StepFunction ShiftMap::push_forward(const StepFunction& f) const {
  struct Iv {
    Rational l, r;
    double v;
  };
  std::vector<Iv> ivs;
  for (const auto& p : pieces_) {
    for (size_t k = f.piece_index(p.left == 0 ? f.right(0) : p.left); k < f.size(); ++k) {
      const Rational l = std::max(f.left(k), p.left), r = std::min(f.right(k), p.right);
      if (r > l) ivs.push_back({l + p.shift, r + p.shift, f.values()[k]});
      if (f.right(k) >= p.right) break;
    }
  }
  std::sort(ivs.begin(), ivs.end(), [](const Iv& x, const Iv& y) { return x.l < y.l; });
  std::vector<Rational> bp;
  std::vector<double> vals;
  for (const auto& iv : ivs) {
    bp.push_back(iv.r);
    vals.push_back(iv.v);
  }
  return StepFunction(std::move(bp), std::move(vals));
}

ShiftMap ShiftMap::compose(const ShiftMap& inner) const {
  std::vector<Piece> out;
  for (const auto& p : inner.pieces_) {
    const Rational a = p.left + p.shift, b = p.right + p.shift;
    for (const auto& q : pieces_) {
      const Rational l = std::max(a, q.left), r = std::min(b, q.right);
      if (r > l) out.push_back({l - p.shift, r - p.shift, p.shift + q.shift});
    }
  }
  return ShiftMap(std::move(out));
}

ShiftMap ShiftMap::inverse() const {
  std::vector<Piece> out;
  for (const auto& p : pieces_) out.push_back({p.left + p.shift, p.right + p.shift, -p.shift});
  return ShiftMap(std::move(out));
}

bool ShiftMap::is_identity() const { return pieces_.size() == 1 && pieces_[0].shift == 0; }

bool ShiftMap::is_bijective() const {
  std::vector<std::pair<Rational, Rational>> dom, img;
  for (const auto& p : pieces_) {
    dom.emplace_back(p.left, p.right);
    img.emplace_back(p.left + p.shift, p.right + p.shift);
  }
  std::sort(img.begin(), img.end());
  auto tiles = [](const std::vector<std::pair<Rational, Rational>>& v) {
    Rational at(0);
    for (const auto& [l, r] : v) {
      if (l != at || !(r > l)) return false;
      at = r;
    }
    return at == 1;
  };
  return tiles(dom) && tiles(img);
}

std::vector<Rational> sub_grid_points(int j, const BigInt& m) {
  Rational lo(0), hi(1);
  if (j >= 0) {
    const Rational ul = grid_unit(static_cast<unsigned>(j));
    lo = Rational(m) * ul;
    hi = lo + ul;
  }
  const Rational us = grid_unit(static_cast<unsigned>(j + 1));
  std::vector<Rational> out;
  for (Rational x = lo; x <= hi; x += us) out.push_back(x);
  return out;
}

ContinuityReport continuity_verdict(const ClosedSet& b, const Rational& t, const std::vector<Rational>& half_widths,
                                    unsigned max_depth) {
  if (!b.contains(t)) throw std::invalid_argument("continuity_verdict: t must belong to B");
  if (max_depth == 0) throw std::invalid_argument("continuity_verdict: depth must be >= 1");
  ContinuityReport r;
  r.t = t;
  bool all_stable = true;
  for (const auto& w : half_widths) {
    if (!(w > 0)) throw std::invalid_argument("continuity_verdict: window half-widths must be positive");
    ContinuityWindow win;
    win.half_width = w;
    win.left = std::max<Rational>(Rational(0), t - w);
    win.right = std::min<Rational>(Rational(1), t + w);
    const StepFunction mask = StepFunction::indicator(win.left, win.right, 1.0);
    for (unsigned d = 1; d <= max_depth; ++d) {
      const StepFunction h = info_fn_closed(b, static_cast<double>(d) + 1.0, static_cast<int>(d)) * mask;
      win.trace.push_back(v_functional(h));
    }
    const auto& tr = win.trace;
    win.limit_estimate = tr.back();
    win.stabilized = true;
    if (tr.size() >= 3) {
      std::vector<double> inc;
      for (size_t k = 1; k < tr.size(); ++k) inc.push_back(tr[k] - tr[k - 1]);
      const double tiny = 1e-12 * std::max(1.0, tr.back());
      for (size_t k = inc.size() / 2; k + 1 < inc.size(); ++k) {
        if (inc[k + 1] <= tiny) continue;
        const double q = inc[k] > tiny ? inc[k + 1] / inc[k] : 2.0;
        win.ratio = std::max(win.ratio, q);
      }
      win.stabilized = win.ratio < 0.95;
      if (win.stabilized && inc.back() > tiny) win.limit_estimate += inc.back() * win.ratio / (1.0 - win.ratio);
    }
    all_stable = all_stable && win.stabilized;
    r.windows.push_back(std::move(win));
  }
  r.verdict = all_stable ? "trace converges geometrically in every window"
                         : "trace still growing at the largest depth in some window";
  return r;
}

nlohmann::json to_json(const ContinuityReport& r) {
  nlohmann::json ws = nlohmann::json::array();
  for (const auto& w : r.windows)
    ws.push_back({{"half_width", to_string(w.half_width)},
                  {"window", {to_string(w.left), to_string(w.right)}},
                  {"trace", w.trace},
                  {"ratio", w.ratio},
                  {"limit_estimate", w.limit_estimate},
                  {"stabilized", w.stabilized}});
  return {{"t", to_string(r.t)}, {"windows", ws}, {"verdict", r.verdict}};
}

CantorTail cantor_tail(unsigned k, unsigned levels) {
  CantorTail c;
  c.k = k;
  c.l2_sq_partial = 0;
  c.l1_partial = 0;
  const auto mu = cantor_level_measures(levels);
  for (unsigned m = k + 1; m <= levels; ++m) {
    const long e = static_cast<long>(m - k);
    c.l2_sq_partial += Rational(e * e) * mu[m - 1];
    c.l1_partial += Rational(e) * mu[m - 1];
  }
  c.l2 = std::sqrt(c.l2_sq_partial.get_d());
  c.bound = 3.0 * std::pow(2.0 / 3.0, static_cast<double>(k));
  c.bound_ok = c.l2 <= c.bound;
  return c;
}

} // namespace oseries
