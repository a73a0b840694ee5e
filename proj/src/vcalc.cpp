#include "oseries/vcalc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oseries {

namespace {

constexpr double kTol = 1e-12;

void require_nonnegative(const StepFunction& h, const char* who) {
  if (h.min_value() < -kTol) throw std::invalid_argument(std::string(who) + ": requires h >= 0");
}

bool leq(double x, double y) { return x <= y + kTol * std::max(1.0, std::fabs(y)); }

} // namespace

StepFunction v_step(const StepFunction& h, unsigned j) {
  require_nonnegative(h, "v_step");
  const double c = pow2(static_cast<int>(j));
  return h.clip_min(c) + cond_norm(h.pos_part(c), j);
}

StepFunction v_bar_step(const StepFunction& h, unsigned j) {
  require_nonnegative(h, "v_bar_step");
  const double c = pow2(static_cast<int>(j));
  StepFunction low = h.map([c](double x) { return std::min(x, c) + (x >= c ? c : 0.0); });
  return low + cond_norm(h.pos_part(2 * c), j);
}

unsigned stabilization_level(const StepFunction& h) {
  const double top = std::max(h.max_value(), 1.0);
  if (!std::isfinite(top)) throw std::overflow_error("stabilization_level: unbounded h");
  unsigned i = 0;
  while (pow2(static_cast<int>(i)) < top) ++i;
  return i;
}

VTrace v_composite(const StepFunction& h, unsigned j_lo, unsigned j_hi, bool bar) {
  if (j_lo > j_hi) throw std::invalid_argument("v_composite: need j_lo <= j_hi");
  VTrace t;
  t.stabilization_level = stabilization_level(h);
  StepFunction f = h;
  for (unsigned j = j_hi + 1; j-- > j_lo;) {
    f = bar ? v_bar_step(f, j) : v_step(f, j);
    t.levels.push_back({j, f, f.l2_norm()});
  }
  t.result = f;
  t.value = f.l2_norm();
  return t;
}

StepFunction v_apply(const StepFunction& h, unsigned j_lo, unsigned j_hi, bool bar) {
  StepFunction f = h;
  for (unsigned j = j_hi + 1; j-- > j_lo;) f = bar ? v_bar_step(f, j) : v_step(f, j);
  return f;
}

VTrace v_functional_trace(const StepFunction& h) { return v_composite(h, 0, stabilization_level(h)); }

double v_functional(const StepFunction& h) { return v_functional_trace(h).value; }

nlohmann::json to_json(const VTrace& t, bool with_functions) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : t.levels) {
    nlohmann::json e = {{"j", l.j}, {"norm", l.norm}};
    if (with_functions) e["function"] = to_json(l.f);
    levels.push_back(e);
  }
  return {{"levels", levels}, {"value", t.value}, {"stabilization_level", t.stabilization_level}};
}

BlockSelection select_blocks(const std::vector<double>& a, unsigned i) {
  if (i == 0) throw std::invalid_argument("select_blocks: need i >= 1");
  for (double x : a)
    if (!(x >= 0)) throw std::invalid_argument("select_blocks: entries must be >= 0");
  BlockSelection r;
  const size_t K = a.size();
  const double two_i = pow2(static_cast<int>(i));
  r.nu = pow3(1UL << (i - 1));
  r.c_bound = r.nu.get_d() * two_i * two_i * (two_i + 1);
  r.b = a;
  r.c.assign(K, 0.0);
  r.d.assign(K, 0.0);

  std::vector<size_t> ord(K);
  std::iota(ord.begin(), ord.end(), size_t{0});
  std::stable_sort(ord.begin(), ord.end(), [&](size_t x, size_t y) { return a[x] < a[y]; });

  while (r.L < K && a[ord[r.L]] <= two_i * two_i) ++r.L;
  const BigInt t_big = BigInt(static_cast<unsigned long>(r.L)) / r.nu;
  r.t = t_big.get_ui();
  const size_t nu = r.t > 0 ? r.nu.get_ui() : 0;

  std::vector<bool> in_s(K, false);
  std::vector<double> block_min(K, 0.0);
  for (size_t s = 0; s < r.t; ++s) {
    std::vector<size_t> blk(ord.begin() + s * nu, ord.begin() + (s + 1) * nu);
    const double m = a[blk.front()], M = a[blk.back()];
    const bool sel = m >= M - two_i;
    r.selected.push_back(sel);
    if (sel)
      for (size_t k : blk) {
        in_s[k] = true;
        block_min[k] = m;
        r.b[k] = a[k] + two_i;
      }
    r.blocks.push_back(std::move(blk));
  }
  // positions 1..(t+1)nu outside S get c, later positions get d
  const BigInt cut = (t_big + 1) * r.nu;
  for (size_t pos = 0; pos < K; ++pos) {
    const size_t k = ord[pos];
    if (in_s[k]) continue;
    if (BigInt(static_cast<unsigned long>(pos + 1)) <= cut) r.c[k] = two_i;
    else r.d[k] = two_i;
  }

  r.precedes = r.decomposition_ok = r.d_ok = true;
  for (size_t k = 0; k < K; ++k) {
    r.sum_c_sq += r.c[k] * r.c[k];
    if (in_s[k]) {
      if (!leq(r.b[k], 2 * two_i + block_min[k])) r.precedes = false;
    } else if (r.b[k] != a[k]) {
      r.precedes = false;
    }
    if (r.c[k] < 0 || r.d[k] < 0 || std::fabs(a[k] + two_i - r.b[k] - r.c[k] - r.d[k]) > kTol * (1 + a[k]))
      r.decomposition_ok = false;
    if (!leq(r.d[k], (a[k] + two_i) / two_i)) r.d_ok = false;
  }
  r.c_ok = leq(r.sum_c_sq, r.c_bound);
  return r;
}

RunSelection select_blocks_runs(const std::vector<std::pair<double, BigInt>>& runs, unsigned i) {
  if (i == 0) throw std::invalid_argument("select_blocks_runs: need i >= 1");
  RunSelection r;
  const double two_i = pow2(static_cast<int>(i));
  r.nu = pow3(1UL << (i - 1));
  r.c_bound = r.nu.get_d() * two_i * two_i * (two_i + 1);

  std::vector<size_t> ord(runs.size());
  std::iota(ord.begin(), ord.end(), size_t{0});
  std::stable_sort(ord.begin(), ord.end(), [&](size_t x, size_t y) { return runs[x].first < runs[y].first; });
  std::vector<BigInt> ends;  // cumulative end position of each sorted run
  BigInt acc = 0;
  r.L = 0;
  for (size_t idx : ord) {
    const auto& [a, n] = runs[idx];
    if (!(a >= 0) || n < 0) throw std::invalid_argument("select_blocks_runs: invalid run");
    acc += n;
    ends.push_back(acc);
    if (a <= two_i * two_i) r.L = acc;
  }
  r.K = acc;
  r.t = r.L / r.nu;
  const BigInt T1 = r.t * r.nu, T2 = (r.t + 1) * r.nu;

  // value at 1-based sorted position p
  auto value_at = [&](const BigInt& p) {
    size_t s = static_cast<size_t>(std::lower_bound(ends.begin(), ends.end(), p) - ends.begin());
    return runs[ord[s]].first;
  };

  std::vector<std::vector<RunSegment>> per_run(runs.size());
  BigInt p0 = 0;
  for (size_t s = 0; s < ord.size(); ++s) {
    const size_t idx = ord[s];
    const double a = runs[idx].first;
    const BigInt p1 = ends[s];
    std::vector<BigInt> cuts{p0, p1};
    auto add_cut = [&](const BigInt& c) {
      if (c > p0 && c < p1) cuts.push_back(c);
    };
    add_cut(T1);
    add_cut(T2);
    if (p0 < T1) {
      BigInt first_block_end = (p0 / r.nu + 1) * r.nu;
      add_cut(first_block_end);
      BigInt last = std::min(p1, T1);
      add_cut(((last - 1) / r.nu) * r.nu);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
      const BigInt& q0 = cuts[c];
      const BigInt& q1 = cuts[c + 1];
      RunSegment seg;
      seg.run = idx;
      seg.count = q1 - q0;
      seg.b = a;
      if (q1 <= T1) {
        const BigInt blk = q0 / r.nu;
        bool sel;
        double m = a;
        if (q1 > (blk + 1) * r.nu || (q0 == blk * r.nu && q1 == (blk + 1) * r.nu)) {
          sel = true;  // whole blocks inside one run
        } else {
          m = value_at(blk * r.nu + 1);
          const double M = value_at((blk + 1) * r.nu);
          sel = m >= M - two_i;
        }
        if (sel) {
          seg.in_selected_block = true;
          seg.block_min = m;
          seg.b = a + two_i;
        } else {
          seg.c = two_i;
        }
      } else if (q1 <= T2) {
        seg.c = two_i;
      } else {
        seg.d = two_i;
      }
      per_run[idx].push_back(std::move(seg));
    }
    p0 = p1;
  }

  r.precedes = r.decomposition_ok = r.d_ok = true;
  for (size_t idx = 0; idx < runs.size(); ++idx) {
    const double a = runs[idx].first;
    for (auto& seg : per_run[idx]) {
      r.sum_c_sq += seg.c * seg.c * seg.count.get_d();
      if (seg.in_selected_block) {
        if (!leq(seg.b, 2 * two_i + seg.block_min)) r.precedes = false;
      } else if (seg.b != a) {
        r.precedes = false;
      }
      if (seg.c < 0 || seg.d < 0 || std::fabs(a + two_i - seg.b - seg.c - seg.d) > kTol * (1 + a))
        r.decomposition_ok = false;
      if (!leq(seg.d, (a + two_i) / two_i)) r.d_ok = false;
      r.segments.push_back(std::move(seg));
    }
  }
  r.c_ok = leq(r.sum_c_sq, r.c_bound);
  return r;
}

namespace {

// Piecewise description on sorted, disjoint intervals (l, r]; gaps are 0.
struct PieceBuilder {
  std::vector<Rational> bps;
  std::vector<double> vals;
  void add(const Rational& l, const Rational& r, double v) {
    if (!(r > l)) return;
    const Rational last = bps.empty() ? Rational(0) : bps.back();
    if (l < last) throw std::logic_error("PieceBuilder: overlapping pieces");
    if (l > last) {
      bps.push_back(l);
      vals.push_back(0.0);
    }
    bps.push_back(r);
    vals.push_back(v);
  }
  StepFunction build() {
    if (bps.empty() || bps.back() < 1) {
      bps.push_back(Rational(1));
      vals.push_back(0.0);
    }
    return StepFunction(std::move(bps), std::move(vals));
  }
};

} // namespace

TypeJResult apply_type_j(const StepFunction& h, unsigned j) {
  if (j < 5) throw std::invalid_argument("apply_type_j: requires j >= 5");
  TypeJCheck tc = is_type_j(h, j);
  if (!tc.ok) throw std::invalid_argument("apply_type_j: h is not of type j: " + tc.reason);

  const double two_j = pow2(static_cast<int>(j));
  const Rational ul = grid_unit(j), us = grid_unit(j + 1);
  const double ratio = Rational(us / ul).get_d();

  TypeJResult out;
  out.selection_ok = true;
  out.g_ok = true;
  PieceBuilder corr, fn, gn;
  for (const auto& blk : tc.representation) {
    std::vector<std::pair<double, BigInt>> runs;
    for (const auto& run : blk.runs) runs.emplace_back(run.a, run.count);
    RunSelection sel = select_blocks_runs(runs, j);
    if (!sel.ok()) out.selection_ok = false;
    if (!sel.d_ok) out.g_ok = false;

    double f_sq = 0, g_sq = 0;
    for (const auto& seg : sel.segments) {
      f_sq += seg.c * seg.c * seg.count.get_d() * ratio;
      g_sq += seg.d * seg.d * seg.count.get_d() * ratio;
    }
    const Rational m_lo = Rational(blk.m_first) * ul;
    const Rational m_hi = Rational(blk.m_first + blk.m_count) * ul;

    if (blk.m_count > 1) {
      // a single full run per atom: the correction is uniform on the whole range
      double v = sel.segments.front().c + sel.segments.front().d;
      for (const auto& seg : sel.segments)
        if (seg.c + seg.d != v) throw std::logic_error("apply_type_j: non-uniform correction on a full atom range");
      corr.add(m_lo, m_hi, v);
    } else {
      // segments of a run are consecutive sub-atoms in run order
      std::vector<BigInt> offset(blk.runs.size());
      for (size_t k = 0; k < blk.runs.size(); ++k) offset[k] = blk.runs[k].first;
      struct Iv {
        BigInt lo, n;
        double v;
      };
      std::vector<Iv> ivs;
      for (const auto& seg : sel.segments) {
        ivs.push_back({offset[seg.run], seg.count, seg.c + seg.d});
        offset[seg.run] += seg.count;
      }
      std::sort(ivs.begin(), ivs.end(), [](const Iv& x, const Iv& y) { return x.lo < y.lo; });
      for (const auto& iv : ivs) corr.add(m_lo + Rational(iv.lo) * us, m_lo + Rational(iv.lo + iv.n) * us, iv.v);
    }
    fn.add(m_lo, m_hi, std::sqrt(f_sq));
    gn.add(m_lo, m_hi, std::sqrt(g_sq));
  }
  out.correction = corr.build();
  out.f_norm = fn.build();
  out.g_norm = gn.build();
  out.uh = h - out.correction;
  out.w = v_step(out.uh, j);

  const StepFunction vh = v_step(h, j);
  const StepFunction diff = (vh - out.w).map([](double x) { return std::max(x, 0.0); });
  out.p = diff.min_with(out.f_norm);
  out.q = diff - out.p;

  out.f_ok = leq(out.f_norm.max_value(), 1.0 / two_j);
  const StepFunction excess = vh.pos_part(two_j);
  bool pq = leq(out.p.max_value(), 1.0 / two_j) && out.p.min_value() >= -kTol && out.q.min_value() >= -kTol;
  const StepFunction q_room = excess.scaled(1.0 / two_j) - out.q;
  const StepFunction pq_room = excess - (out.p + out.q);
  pq = pq && q_room.min_value() >= -1e-9 && pq_room.min_value() >= -1e-9;
  // p and q must be F_j-measurable
  auto measurable = [&](const StepFunction& f) {
    for (size_t k = 0; k + 1 < f.size(); ++k)
      if (!is_grid_point(f.right(k), j)) return false;
    return true;
  };
  pq = pq && measurable(out.p) && measurable(out.q);
  out.pq_ok = pq;
  return out;
}

} // namespace oseries
