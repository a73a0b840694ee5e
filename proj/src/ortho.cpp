#include "oseries/ortho.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace oseries {

namespace {

template <class V, class Acc>
Acc body_inner(const BasicStepFunction<V>& a, const BasicStepFunction<V>& b, Acc acc,
               const std::function<Acc(const V&, const V&, const Rational&)>& term) {
  const auto& ba = a.breakpoints();
  const auto& bb = b.breakpoints();
  size_t i = 0, j = 0;
  Rational lo(0);
  while (i < ba.size() && j < bb.size()) {
    const Rational& hi = ba[i] < bb[j] ? ba[i] : bb[j];
    const V& x = a.values()[i];
    const V& y = b.values()[j];
    if (!(x == V(0)) && !(y == V(0))) acc += term(x, y, hi - lo);
    lo = hi;
    bool ai = ba[i] == hi, bj = bb[j] == hi;
    if (ai) ++i;
    if (bj) ++j;
  }
  return acc;
}

void drop_zeros(std::map<long, Surd>& m) {
  for (auto it = m.begin(); it != m.end();)
    it = it->second.is_zero() ? m.erase(it) : std::next(it);
}

} // namespace

OrthoVector OrthoVector::external(long id, const Surd& c) {
  OrthoVector v;
  if (!c.is_zero()) v.ext[id] = c;
  return v;
}

bool OrthoVector::is_zero() const {
  return ext.empty() && body.size() == 1 && body.values()[0].is_zero();
}

OrthoVector& OrthoVector::operator+=(const OrthoVector& o) {
  body = body + o.body;
  for (const auto& [id, c] : o.ext) ext[id] += c;
  drop_zeros(ext);
  return *this;
}

OrthoVector& OrthoVector::operator-=(const OrthoVector& o) {
  body = body - o.body;
  for (const auto& [id, c] : o.ext) ext[id] -= c;
  drop_zeros(ext);
  return *this;
}

OrthoVector OrthoVector::scaled(const Surd& c) const {
  OrthoVector v;
  if (c.is_zero()) return v;
  v.body = body.scaled(c);
  for (const auto& [id, x] : ext) v.ext[id] = x * c;
  return v;
}

bool operator==(const OrthoVector& a, const OrthoVector& b) { return a.body == b.body && a.ext == b.ext; }

Surd inner(const OrthoVector& a, const OrthoVector& b) {
  Surd acc = body_inner<Surd, Surd>(a.body, b.body, Surd(0), [](const Surd& x, const Surd& y, const Rational& len) {
    return x * y * Surd(len);
  });
  const auto& small = a.ext.size() <= b.ext.size() ? a.ext : b.ext;
  const auto& large = a.ext.size() <= b.ext.size() ? b.ext : a.ext;
  for (const auto& [id, c] : small) {
    auto it = large.find(id);
    if (it != large.end()) acc += c * it->second;
  }
  return acc;
}

Surd norm_sq(const OrthoVector& a) { return inner(a, a); }

double inner_double(const OrthoVector& a, const OrthoVector& b) {
  double acc = body_inner<Surd, double>(a.body, b.body, 0.0, [](const Surd& x, const Surd& y, const Rational& len) {
    return x.to_double() * y.to_double() * len.get_d();
  });
  for (const auto& [id, c] : a.ext) {
    auto it = b.ext.find(id);
    if (it != b.ext.end()) acc += c.to_double() * it->second.to_double();
  }
  return acc;
}

nlohmann::json to_json(const OrthoVector& v) {
  nlohmann::json bp = nlohmann::json::array(), vals = nlohmann::json::array(), exact = nlohmann::json::array();
  for (size_t k = 0; k < v.body.size(); ++k) {
    bp.push_back(to_string(v.body.right(k)));
    vals.push_back(v.body.values()[k].to_double());
    exact.push_back(v.body.values()[k].to_string());
  }
  nlohmann::json ext = nlohmann::json::object();
  for (const auto& [id, c] : v.ext) ext[std::to_string(id)] = {{"value", c.to_double()}, {"exact", c.to_string()}};
  return {{"body", {{"breakpoints", bp}, {"values", vals}, {"exact", exact}}}, {"ext", ext}};
}

Rational SimpleSet::measure() const {
  Rational m(0);
  for (const auto& [a, b] : intervals) m += b - a;
  return m;
}

Rational SimpleSet::measure_between(const Rational& s, const Rational& t) const {
  Rational m(0);
  for (const auto& [a, b] : intervals) {
    Rational lo = std::max(a, s), hi = std::min(b, t);
    if (hi > lo) m += hi - lo;
  }
  return m;
}

bool SimpleSet::contains(const Rational& t) const {
  for (const auto& [a, b] : intervals)
    if (a <= t && t <= b) return true;
  return false;
}

const OrthoVector& OrthoProcess::at(const Rational& t) const {
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end() || *it != t) throw std::out_of_range("process not defined at " + to_string(t));
  return values[static_cast<size_t>(it - times.begin())];
}

Rational OrthoProcess::expected_sq(const Rational& s, const Rational& t) const {
  const Rational& lo = s < t ? s : t;
  const Rational& hi = s < t ? t : s;
  if (scale == ProcessScale::Unit) return hi - lo;
  return 3 * 24 * 24 * domain.measure_between(lo, hi);
}

OrthoProcess OrthoProcess::rescaled(const Surd& c, ProcessScale to) const {
  OrthoProcess out;
  out.times = times;
  out.scale = to;
  out.domain = domain;
  out.values.reserve(values.size());
  for (const auto& v : values) out.values.push_back(v.scaled(c));
  return out;
}

nlohmann::json to_json(const OrthoProcess& x) {
  nlohmann::json pts = nlohmann::json::array();
  for (size_t k = 0; k < x.times.size(); ++k) {
    nlohmann::json p = to_json(x.values[k]);
    p["t"] = to_string(x.times[k]);
    pts.push_back(std::move(p));
  }
  nlohmann::json dom = nlohmann::json::array();
  for (const auto& [a, b] : x.domain.intervals) dom.push_back({to_string(a), to_string(b)});
  return {{"scale", x.scale == ProcessScale::Unit ? "unit" : "simple"}, {"domain", dom}, {"points", pts}};
}

GramReport gram_check(const OrthoProcess& x, bool exact) {
  GramReport rep;
  const size_t n = x.values.size();
  if (n != x.times.size()) throw std::invalid_argument("gram_check: times and values differ in length");
  if (n == 0) {
    rep.exact_zero = exact;
    return rep;
  }
  std::vector<OrthoVector> inc(n);
  inc[0] = x.values[0];
  for (size_t k = 1; k < n; ++k) inc[k] = x.values[k] - x.values[k - 1];

  if (exact) {
    // P[i][j] = <X(t_i), X(t_j)> from prefix sums of increment inner products.
    std::vector<std::vector<Surd>> p(n, std::vector<Surd>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i; j < n; ++j) {
        Surd g = inner(inc[i], inc[j]);
        Surd v = g;
        if (j == i) {
          if (i > 0) v += p[i - 1][i] + p[i - 1][i] - p[i - 1][i - 1];
        } else {
          v += p[i][j - 1];
          if (i > 0) v += p[i - 1][j] - p[i - 1][j - 1];
        }
        p[i][j] = v;
        p[j][i] = v;
      }
    bool all_zero = true;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) {
        Surd dev = p[j][j] - p[i][j] - p[i][j] + p[i][i] - Surd(x.expected_sq(x.times[i], x.times[j]));
        if (!dev.is_zero()) {
          all_zero = false;
          rep.max_deviation = std::max(rep.max_deviation, std::fabs(dev.to_double()));
        }
      }
    rep.exact_zero = all_zero;
    rep.origin_norm = std::sqrt(std::max(0.0, p[0][0].to_double()));
    return rep;
  }

  std::vector<std::vector<double>> p(n, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      double g = inner_double(inc[i], inc[j]);
      double v;
      if (j == i) v = (i > 0 ? 2 * p[i - 1][i] - p[i - 1][i - 1] : 0.0) + g;
      else v = g + (i > 0 ? p[i - 1][j] : 0.0) + p[i][j - 1] - (i > 0 ? p[i - 1][j - 1] : 0.0);
      p[i][j] = v;
      p[j][i] = v;
    }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      double dev = p[j][j] - 2 * p[i][j] + p[i][i] - x.expected_sq(x.times[i], x.times[j]).get_d();
      rep.max_deviation = std::max(rep.max_deviation, std::fabs(dev));
    }
  rep.origin_norm = std::sqrt(std::max(0.0, p[0][0]));
  return rep;
}

SurdStepFunction maximal_body(const OrthoProcess& x, const std::vector<Rational>* subset, bool absolute) {
  std::optional<SurdStepFunction> m;
  auto take = [&](const OrthoVector& v) {
    SurdStepFunction b = absolute ? v.body.abs_value() : v.body;
    m = m ? m->max_with(b) : b;
  };
  if (subset) {
    for (const auto& t : *subset) take(x.at(t));
  } else {
    for (const auto& v : x.values) take(v);
  }
  return m ? *m : SurdStepFunction();
}

StepFunction maximal_function(const OrthoProcess& x, const std::vector<Rational>* subset, bool absolute) {
  return maximal_body(x, subset, absolute).to_double();
}

Rational exceedance(const SurdStepFunction& f, const Surd& y, bool strict, const Rational& a, const Rational& b) {
  Rational m(0);
  for (size_t k = 0; k < f.size(); ++k) {
    Rational lo = std::max(f.left(k), a), hi = std::min(f.right(k), b);
    if (!(hi > lo)) continue;
    const Surd& v = f.values()[k];
    if (strict ? v > y : v >= y) m += hi - lo;
  }
  return m;
}

Surd max_norm_sq(const std::vector<OrthoVector>& xs) {
  if (xs.empty()) return Surd(0);
  std::optional<SurdStepFunction> m;
  std::map<long, Surd> ext_max;
  for (const auto& v : xs) {
    SurdStepFunction b = v.body.abs_value();
    m = m ? m->max_with(b) : b;
    for (const auto& [id, c] : v.ext) {
      Surd a = abs(c);
      auto it = ext_max.find(id);
      if (it == ext_max.end()) ext_max.emplace(id, a);
      else it->second = max(it->second, a);
    }
  }
  Surd acc = m->norm_sq();
  for (const auto& [id, c] : ext_max) acc += c * c;
  return acc;
}

MenshovReport menshov_bound_check(const std::vector<OrthoVector>& ys) {
  if (ys.empty()) throw std::invalid_argument("menshov_bound_check: empty family");
  for (size_t i = 0; i < ys.size(); ++i)
    for (size_t j = i + 1; j < ys.size(); ++j)
      if (!inner(ys[i], ys[j]).is_zero())
        throw std::invalid_argument("menshov_bound_check: vectors " + std::to_string(i) + " and " +
                                    std::to_string(j) + " are not orthogonal");
  std::vector<OrthoVector> partial;
  partial.reserve(ys.size());
  OrthoVector s;
  Surd total(0);
  for (const auto& y : ys) {
    s += y;
    partial.push_back(s);
    total += norm_sq(y);
  }
  MenshovReport rep;
  rep.lhs = max_norm_sq(partial).to_double();
  double k = std::log2(static_cast<double>(ys.size())) + 1.0;
  rep.rhs = k * k * total.to_double();
  rep.ok = rep.lhs <= rep.rhs * (1 + 1e-12);
  return rep;
}

std::vector<AtomMaximal> m_grid(const OrthoProcess& x, unsigned j) {
  std::map<BigInt, std::vector<size_t>> members;
  bool has_interior = false;
  const Rational u = grid_unit(j);
  for (size_t k = 0; k < x.times.size(); ++k) {
    const Rational& t = x.times[k];
    if (!(t > 0 && t <= 1)) continue;
    members[atom_containing(t, j).index].push_back(k);
  }
  std::vector<AtomMaximal> out;
  for (const auto& [n, idx] : members) {
    has_interior = false;
    for (size_t k : idx)
      if (!is_grid_point(x.times[k], j)) has_interior = true;
    if (!has_interior) continue;
    const OrthoVector& base = x.at(Rational(n) * u);
    std::vector<OrthoVector> diffs;
    for (size_t k : idx) diffs.push_back(x.values[k] - base);
    AtomMaximal am;
    am.index = n;
    am.norm = std::sqrt(std::max(0.0, max_norm_sq(diffs).to_double()));
    std::optional<SurdStepFunction> m;
    for (const auto& d : diffs) m = m ? m->max_with(d.body.abs_value()) : d.body.abs_value();
    am.body_max = m->to_double();
    out.push_back(std::move(am));
  }
  return out;
}

namespace {

ProductFactor make_factor(const OrthoProcess& p, const Rational& lo, const Rational& hi) {
  ProductFactor f;
  f.process = p;
  f.lo = lo;
  f.hi = hi;
  std::vector<size_t> in_block;
  for (size_t k = 0; k < p.times.size(); ++k)
    if (p.times[k] > lo && p.times[k] <= hi) in_block.push_back(k);
  if (in_block.empty()) throw std::invalid_argument("glue_blocks: block has no times in (lo, hi]");
  std::vector<Rational> bps;
  for (size_t k : in_block)
    for (const auto& b : p.values[k].body.breakpoints()) bps.push_back(b);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  const OrthoVector& last = p.values[in_block.back()];
  Rational prev(0);
  for (const auto& b : bps) {
    double mx = -INFINITY, mn = INFINITY;
    for (size_t k : in_block) {
      double v = p.values[k].body.eval(b).to_double();
      mx = std::max(mx, v);
      mn = std::min(mn, v);
    }
    f.measure.push_back(b - prev);
    f.max_body.push_back(mx);
    f.min_body.push_back(mn);
    f.final_body.push_back(last.body.eval(b).to_double());
    prev = b;
  }
  return f;
}

constexpr double kTol = 1e-12;

bool exceeds(double v, double y, bool strict) { return strict ? v > y + kTol : v >= y - kTol; }

} // namespace

Rational ProductProcess::factor_exceedance(size_t s, double y, bool strict, bool absolute) const {
  const auto& f = factors.at(s);
  Rational m(0);
  for (size_t a = 0; a < f.measure.size(); ++a) {
    double v = absolute ? std::max(f.max_body[a], -f.min_body[a]) : f.max_body[a];
    if (exceeds(v, y, strict)) m += f.measure[a];
  }
  return m;
}

Rational ProductProcess::union_exceedance(double y, bool strict, bool absolute) const {
  Rational keep(1);
  for (size_t s = 0; s < factors.size(); ++s) keep *= 1 - factor_exceedance(s, y, strict, absolute);
  return 1 - keep;
}

double ProductProcess::max_exceedance(double y, bool strict, bool absolute) const {
  const size_t S = factors.size();
  std::vector<std::vector<double>> meas(S);
  for (size_t s = 0; s < S; ++s)
    for (const auto& m : factors[s].measure) meas[s].push_back(m.get_d());
  double total = 0.0;
  // Factors are visited from the block nearest 0, carrying the sum of their finals.
  std::function<void(size_t, double, double, double)> rec = [&](size_t left, double tail, double best, double w) {
    if (left == 0) {
      if (exceeds(best, y, strict)) total += w;
      return;
    }
    const size_t s = left - 1;
    const auto& f = factors[s];
    for (size_t a = 0; a < f.measure.size(); ++a) {
      double hi = f.max_body[a] + tail;
      double b = std::max(best, hi);
      if (absolute) b = std::max(b, -(f.min_body[a] + tail));
      rec(s, tail + f.final_body[a], b, w * meas[s][a]);
    }
  };
  rec(S, 0.0, -INFINITY, 1.0);
  return total;
}

ProductProcess glue_blocks(const std::vector<OrthoProcess>& blocks, const std::vector<Rational>& alphas) {
  if (blocks.empty()) throw std::invalid_argument("glue_blocks: no blocks");
  if (blocks.size() > kMaxProductFactors)
    throw std::length_error("glue_blocks: at most " + std::to_string(kMaxProductFactors) + " factors");
  if (alphas.size() != blocks.size() + 1)
    throw std::invalid_argument("glue_blocks: need one more cut point than blocks");
  for (size_t s = 0; s + 1 < alphas.size(); ++s)
    if (!(alphas[s] > alphas[s + 1])) throw std::invalid_argument("glue_blocks: cut points must decrease");
  ProductProcess out;
  double combos = 1.0;
  for (size_t s = 0; s < blocks.size(); ++s) {
    out.factors.push_back(make_factor(blocks[s], alphas[s + 1], alphas[s]));
    combos *= static_cast<double>(out.factors.back().measure.size());
  }
  if (combos > kProductBudget) throw std::length_error("glue_blocks: product partition exceeds budget");

  bool indep = true;
  std::map<long, size_t> owner;
  for (size_t s = 0; s < blocks.size(); ++s)
    for (const auto& v : blocks[s].values) {
      if (!v.body.integral().is_zero()) indep = false;
      for (const auto& [id, c] : v.ext) {
        auto [it, fresh] = owner.emplace(id, s);
        if (!fresh && it->second != s) indep = false;
      }
    }
  out.independent = indep;
  return out;
}

} // namespace oseries
