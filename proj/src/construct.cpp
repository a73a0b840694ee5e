#include "oseries/construct.hpp"

#include "oseries/sets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace oseries {

namespace {

constexpr long kSimpleConstant = 3 * 24 * 24;
constexpr long kShareDenominator = 46656;

long ipow3(unsigned k) {
  long r = 1;
  for (unsigned i = 0; i < k; ++i) r *= 3;
  return r;
}

Surd inv_sqrt(const Rational& q) { return Surd::sqrt(1 / q); }

// Rational cell values c -> f(c) on (a,b] split into `cells` equal parts, scaled by s; zero elsewhere.
SurdStepFunction place_cells(const std::vector<Rational>& vals, const Rational& a, const Rational& b, const Surd& s) {
  std::vector<Rational> bp;
  std::vector<Surd> vs;
  if (a > 0) {
    bp.push_back(a);
    vs.emplace_back(0);
  }
  const long n = static_cast<long>(vals.size());
  const Rational w = (b - a) / n;
  for (long c = 0; c < n; ++c) {
    bp.push_back(a + w * (c + 1));
    vs.push_back(vals[static_cast<size_t>(c)].get_num() == 0 ? Surd(0) : Surd(vals[static_cast<size_t>(c)]) * s);
  }
  if (b < 1) {
    bp.emplace_back(1);
    vs.emplace_back(0);
  }
  return SurdStepFunction(std::move(bp), std::move(vs));
}

// Rational body values of φ_n on the 3^k ternary cells of [0,1).
std::vector<Rational> phi_cells(unsigned k, long n) {
  const long cells = ipow3(k);
  const auto nd = ternary_digits(n, k);
  std::vector<Rational> out(static_cast<size_t>(cells));
  const Rational scale(1, cells);
  for (long c = 0; c < cells; ++c) {
    const auto cd = ternary_digits(c, k);
    long acc = 0, p = 1;
    for (unsigned l = 1; l <= k; ++l) {
      p *= 3;
      acc += p * hat(cd[l - 1] - nd[l - 1]);
      if (cd[l - 1] != nd[l - 1]) break;
    }
    out[static_cast<size_t>(c)] = scale * acc;
    out[static_cast<size_t>(c)].canonicalize();
  }
  return out;
}

SurdStepFunction to_surd(const ExactStepFunction& f) {
  return f.map([](const Rational& v) { return Surd(v); });
}

bool body_vanishes_on(const SurdStepFunction& f, const Rational& a, const Rational& b) {
  for (size_t k = 0; k < f.size(); ++k)
    if (f.right(k) > a && f.left(k) < b && !f.values()[k].is_zero()) return false;
  return true;
}

void finalize(ComplexityCert& c) {
  const Rational len = c.b - c.a;
  if (len > 0) {
    SurdStepFunction m = maximal_body(c.process);
    Surd thr = c.y * inv_sqrt(len);
    c.fail_measure = len - exceedance(m, thr, false, c.a, c.b);
    c.eps = Rational(c.fail_measure / len).get_d();
  } else {
    c.fail_measure = 0;
    c.eps = 0.0;
  }
}

// Extends a simple process known at `skeleton` times to every point of B inside [lo,hi].
// Between consecutive skeleton times the increment Δ is split by a bridge over fresh ids.
void bridge_fill(OrthoProcess& x, const Rational& lo, const Rational& hi, const PointSet* b_set, IdSource& ids) {
  if (!b_set) return;
  std::vector<Rational> extra;
  for (const auto& t : b_set->points())
    if (t > lo && t < hi && !std::binary_search(x.times.begin(), x.times.end(), t)) extra.push_back(t);
  if (extra.empty()) return;
  std::map<Rational, OrthoVector> pts;
  for (size_t i = 0; i < x.times.size(); ++i) pts.emplace(x.times[i], x.values[i]);
  for (size_t i = 0; i + 1 < x.times.size(); ++i) {
    const Rational& s = x.times[i];
    const Rational& t = x.times[i + 1];
    std::vector<Rational> inner_pts;
    for (const auto& p : extra)
      if (p > s && p < t) inner_pts.push_back(p);
    if (inner_pts.empty()) continue;
    const Rational L = t - s;
    const OrthoVector delta = x.values[i + 1] - x.values[i];
    std::vector<Rational> dt;
    Rational prev = s;
    for (const auto& p : inner_pts) {
      dt.push_back(p - prev);
      prev = p;
    }
    dt.push_back(t - prev);
    std::vector<long> e;
    OrthoVector u;
    for (const auto& d : dt) {
      e.push_back(ids.fresh());
      u += OrthoVector::external(e.back(), Surd::sqrt(d / L));
    }
    OrthoVector cur = x.values[i];
    for (size_t q = 0; q + 1 < dt.size(); ++q) {
      Surd w = Surd::sqrt(dt[q] / L);
      OrthoVector eta = delta.scaled(Surd(dt[q] / L));
      eta += (OrthoVector::external(e[q]) - u.scaled(w)).scaled(Surd::sqrt(kSimpleConstant * dt[q]));
      cur += eta;
      pts.emplace(inner_pts[q], cur);
    }
  }
  x.times.clear();
  x.values.clear();
  for (auto& [t, v] : pts) {
    x.times.push_back(t);
    x.values.push_back(std::move(v));
  }
}

void require_window(const Rational& a, const Rational& b) {
  if (!(0 <= a && a <= b && b <= 1)) throw std::invalid_argument("window must satisfy 0 <= a <= b <= 1");
}

CertSummary summary(const ComplexityCert& c) {
  return CertSummary{c.kind, c.k, c.domain.min(), c.domain.max(), c.y.to_double(), c.eps};
}

SimpleSet interval(const Rational& lo, const Rational& hi) {
  SimpleSet d;
  d.intervals.emplace_back(lo, hi);
  return d;
}

} // namespace

int hat(long m) {
  long r = ((m % 3) + 3) % 3;
  return r == 2 ? -1 : static_cast<int>(r);
}

std::vector<int> ternary_digits(long n, unsigned k) {
  std::vector<int> d(k);
  for (unsigned i = k; i-- > 0;) {
    d[i] = static_cast<int>(n % 3);
    n /= 3;
  }
  return d;
}

ExactStepFunction digit_function(unsigned l) {
  if (l == 0) throw std::invalid_argument("digit_function: l >= 1");
  const long cells = ipow3(l);
  std::vector<Rational> bp, vs;
  for (long c = 0; c < cells; ++c) {
    bp.emplace_back(c + 1, cells);
    vs.emplace_back(c % 3);
  }
  return ExactStepFunction(std::move(bp), std::move(vs));
}

ExactStepFunction digit_ones(unsigned k) {
  if (k == 0) return ExactStepFunction::constant(Rational(0));
  const long cells = ipow3(k);
  std::vector<Rational> bp, vs;
  for (long c = 0; c < cells; ++c) {
    bp.emplace_back(c + 1, cells);
    long ones = 0;
    for (int d : ternary_digits(c, k)) ones += d == 1;
    vs.emplace_back(ones);
  }
  return ExactStepFunction(std::move(bp), std::move(vs));
}

std::vector<OrthoVector> phi_family_window(unsigned k, const OrthoVector& chi, const Rational& a, const Rational& b) {
  if (k > kMaxPhiDepth) throw std::length_error("phi_family: k exceeds " + std::to_string(kMaxPhiDepth));
  require_window(a, b);
  if (!(a < b)) throw std::invalid_argument("phi_family: empty window");
  if (norm_sq(chi) != Surd(1)) throw std::invalid_argument("phi_family: chi must have unit norm");
  if (!body_vanishes_on(chi.body, a, b)) throw std::invalid_argument("phi_family: chi must vanish on the window");
  const long cells = ipow3(k);
  const Surd s = inv_sqrt(b - a);
  const OrthoVector ext = chi.scaled(Surd::sqrt(Rational(3)) * Surd(Rational(1, cells)));
  std::vector<OrthoVector> out;
  out.reserve(static_cast<size_t>(cells));
  for (long n = 0; n < cells; ++n) {
    OrthoVector v;
    if (k > 0) v.body = place_cells(phi_cells(k, n), a, b, s);
    v += ext;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<OrthoVector> phi_family(unsigned k, const OrthoVector& chi) {
  if (chi.body.size() != 1 || !chi.body.values()[0].is_zero())
    throw std::invalid_argument("phi_family: chi must have empty body");
  return phi_family_window(k, chi, Rational(0), Rational(1));
}

namespace {

// Exact Gram test against diag·I when every body is an integer multiple of 1/cells on the
// cells grid and all external parts coincide; integer dot products stay below 2^53 in doubles.
std::optional<bool> fast_gram_check(const std::vector<OrthoVector>& f, long cells, const Rational& diag) {
  if (f.empty()) return true;
  for (const auto& v : f)
    if (v.ext != f[0].ext) return std::nullopt;
  Surd c(0);
  for (const auto& [id, coef] : f[0].ext) c += coef * coef;
  if (!c.is_rational()) return std::nullopt;
  const size_t n = f.size(), w = static_cast<size_t>(cells);
  std::vector<double> rows(n * w, 0.0);
  double max_abs = 0;
  for (size_t i = 0; i < n; ++i) {
    const auto& b = f[i].body;
    for (size_t k = 0; k < b.size(); ++k) {
      if (!b.values()[k].is_rational()) return std::nullopt;
      Rational m = b.values()[k].rational_value() * cells;
      Rational lo = b.left(k) * cells, hi = b.right(k) * cells;
      if (!is_integer(m) || !is_integer(lo) || !is_integer(hi)) return std::nullopt;
      const double mv = m.get_d();
      max_abs = std::max(max_abs, std::fabs(mv));
      for (long x = lo.get_num().get_si(); x < hi.get_num().get_si(); ++x) rows[i * w + static_cast<size_t>(x)] = mv;
    }
  }
  if (max_abs * max_abs * static_cast<double>(cells) >= 0x1p52) return std::nullopt;
  const Rational cube = Rational(cells) * cells * cells;
  const Rational off = -c.rational_value() * cube, on = (diag - c.rational_value()) * cube;
  if (!is_integer(off) || !is_integer(on)) return false;
  const double t_off = off.get_d(), t_on = on.get_d();
  for (size_t i = 0; i < n; ++i) {
    const double* ri = &rows[i * w];
    for (size_t j = i; j < n; ++j) {
      const double* rj = &rows[j * w];
      double d = 0;
      for (size_t x = 0; x < w; ++x) d += ri[x] * rj[x];
      if (d != (i == j ? t_on : t_off)) return false;
    }
  }
  return true;
}

} // namespace

PhiFamilyReport phi_family_check(unsigned k) {
  PhiFamilyReport r;
  r.k = k;
  const OrthoVector chi = OrthoVector::external(0);
  const auto f = phi_family(k, chi);
  const long cells = ipow3(k);
  const Rational diag(3, cells);

  if (auto fast = fast_gram_check(f, cells, diag)) {
    r.orthogonal = *fast;
  } else {
    r.orthogonal = true;
    for (size_t i = 0; i < f.size(); ++i)
      for (size_t j = i; j < f.size(); ++j)
        if (inner(f[i], f[j]) != (i == j ? Surd(diag) : Surd(0))) r.orthogonal = false;
  }

  r.mean_zero = true;
  SurdStepFunction body_sum;
  OrthoVector total;
  for (const auto& v : f) {
    if (!v.body.integral().is_zero()) r.mean_zero = false;
    body_sum = body_sum + v.body;
    total += v;
  }
  if (!(body_sum == SurdStepFunction())) r.mean_zero = false;

  const Surd ext_coef = Surd::sqrt(Rational(3)) * Surd(Rational(1, cells));
  r.ext_part = total == chi.scaled(Surd::sqrt(Rational(3)));
  for (const auto& v : f)
    if (v.ext != chi.scaled(ext_coef).ext) r.ext_part = false;

  const SurdStepFunction ones = to_surd(digit_ones(k));
  std::optional<SurdStepFunction> mx;
  SurdStepFunction partial;
  r.prefix_identity = true;
  r.vanishing = true;
  for (long n = 0; n < cells; ++n) {
    const Rational cell_right(n + 1, cells);
    if (partial.eval(cell_right) != ones.eval(cell_right)) r.prefix_identity = false;
    if (!f[static_cast<size_t>(n)].body.eval(cell_right).is_zero()) r.vanishing = false;
    partial = partial + f[static_cast<size_t>(n)].body;
    mx = mx ? mx->max_with(partial) : partial;
  }
  r.max_partial = mx && *mx == ones;

  r.proof_products = true;
  if (k >= 1) {
    const ExactStepFunction x1 = digit_function(1);
    std::vector<ExactStepFunction> h;
    for (long n = 0; n < 3; ++n) h.push_back(x1.map([n](const Rational& v) { return Rational(hat(v.get_num().get_si() - n)); }));
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) {
        Rational want = i == j ? Rational(2, 3) : Rational(-1, 3);
        if ((h[i] * h[j]).integral() != want) r.proof_products = false;
      }
    for (unsigned l = 1; l <= std::min(k, 3u); ++l) {
      const long cl = ipow3(l);
      for (long n = 0; n < cl; ++n) {
        const auto nd = ternary_digits(n, l);
        std::vector<Rational> bp, vs;
        for (long c = 0; c < cl; ++c) {
          const auto cd = ternary_digits(c, l);
          bool prefix = std::equal(cd.begin(), cd.end() - 1, nd.begin());
          bp.emplace_back(c + 1, cl);
          vs.emplace_back(prefix ? hat(cd[l - 1] - nd[l - 1]) : 0);
        }
        ExactStepFunction g(std::move(bp), std::move(vs));
        if (g.norm_sq() != Rational(2, cl)) r.proof_products = false;
      }
    }
  }
  return r;
}

nlohmann::json to_json(const PhiFamilyReport& r) {
  return {{"k", r.k},
          {"orthogonal", r.orthogonal},
          {"mean_zero", r.mean_zero},
          {"ext_part", r.ext_part},
          {"max_partial", r.max_partial},
          {"prefix_identity", r.prefix_identity},
          {"vanishing", r.vanishing},
          {"proof_products", r.proof_products},
          {"ok", r.ok()}};
}

Rational binomial_left_tail(unsigned k, const Rational& p, const Rational& threshold) {
  Rational tail(0);
  const Rational q = 1 - p;
  for (unsigned i = 0; i <= k && Rational(i) < threshold; ++i) {
    BigInt c;
    mpz_bin_uiui(c.get_mpz_t(), k, i);
    Rational term(c);
    for (unsigned a = 0; a < i; ++a) term *= p;
    for (unsigned a = i; a < k; ++a) term *= q;
    tail += term;
  }
  return tail;
}

BernsteinReport bernstein_check(unsigned k) {
  if (k == 0) throw std::invalid_argument("bernstein_check: k >= 1");
  BernsteinReport r;
  r.k = k;
  r.tail = binomial_left_tail(k, Rational(1, 3), Rational(k, 6));
  r.bound = std::exp(-static_cast<double>(k) / 144.0);
  r.ok = r.tail.get_d() <= r.bound;
  return r;
}

double merged_level(const StepFunction& h, const SimpleSet& d) {
  double acc = 0.0;
  for (const auto& [lo, hi] : d.intervals) acc += h.restrict_to(lo, hi).norm_sq();
  return std::sqrt(acc);
}

double nested_level(double a, unsigned k, const SimpleSet& d) {
  return (a + 4.0 * k) * std::sqrt(d.measure().get_d());
}

nlohmann::json to_json(const ComplexityCert& c, bool with_process) {
  nlohmann::json dom = nlohmann::json::array();
  for (const auto& [lo, hi] : c.domain.intervals) dom.push_back({to_string(lo), to_string(hi)});
  nlohmann::json kids = nlohmann::json::array();
  for (const auto& s : c.children)
    kids.push_back({{"kind", s.kind}, {"k", s.k}, {"lo", to_string(s.lo)}, {"hi", to_string(s.hi)}, {"y", s.y}, {"eps", s.eps}});
  nlohmann::json j = {{"kind", c.kind},
                      {"k", c.k},
                      {"domain", dom},
                      {"window", {to_string(c.a), to_string(c.b)}},
                      {"y", c.y.to_double()},
                      {"y_exact", c.y.to_string()},
                      {"fail_measure", to_string(c.fail_measure)},
                      {"eps", c.eps},
                      {"eps_bound", c.eps_bound},
                      {"points", c.process.times.size()},
                      {"children", kids}};
  if (with_process) j["process"] = to_json(c.process);
  return j;
}

CertCheck verify_cert(const ComplexityCert& c) {
  CertCheck r;
  GramReport g = gram_check(c.process, true);
  r.gram_deviation = g.max_deviation;
  r.gram_exact = g.exact_zero;
  r.origin_zero = c.process.at(c.domain.min()).is_zero();
  r.final_ok = c.process.at(c.domain.max()) == c.chi.scaled(Surd::sqrt(kSimpleConstant * c.domain.measure()));

  SurdStepFunction outside = SurdStepFunction::constant(Surd(1)) - SurdStepFunction::indicator(c.a, c.b, Surd(1));
  SurdStepFunction free_of_chi = c.chi.body.map([](const Surd& v) { return v.is_zero() ? Surd(1) : Surd(0); });
  SurdStepFunction forbidden = outside * free_of_chi;
  r.support_ok = true;
  for (const auto& v : c.process.values)
    if (!(v.body * forbidden == SurdStepFunction())) r.support_ok = false;

  ComplexityCert copy;
  copy.a = c.a;
  copy.b = c.b;
  copy.y = c.y;
  copy.process = c.process;
  finalize(copy);
  r.fail_measure = copy.fail_measure;
  r.eps = copy.eps;
  r.eps_within_bound = r.fail_measure == c.fail_measure && r.eps <= c.eps_bound + 1e-12;
  return r;
}

nlohmann::json to_json(const CertCheck& c) {
  return {{"gram_deviation", c.gram_deviation}, {"gram_exact", c.gram_exact},   {"origin_zero", c.origin_zero},
          {"final_ok", c.final_ok},             {"support_ok", c.support_ok},   {"fail_measure", to_string(c.fail_measure)},
          {"eps", c.eps},                       {"eps_within_bound", c.eps_within_bound}, {"ok", c.ok()}};
}

ComplexityCert example_process(unsigned k, const OrthoVector& chi, const Rational& a, const Rational& b,
                               const Rational& lo, const Rational& hi, const PointSet* b_set, IdSource& ids) {
  if (!(lo < hi)) throw std::invalid_argument("example_process: need lo < hi");
  const long cells = ipow3(k);
  const Rational step = (hi - lo) / cells;
  if (b_set)
    for (long m = 0; m <= cells; ++m)
      if (!b_set->contains(lo + step * m))
        throw std::invalid_argument("example_process: grid point " + to_string(lo + step * m) + " not in B");
  const auto f = phi_family_window(k, chi, a, b);
  const Surd scale = Surd::sqrt(576 * (hi - lo));

  ComplexityCert c;
  c.kind = "example";
  c.k = k;
  c.domain = interval(lo, hi);
  c.a = a;
  c.b = b;
  c.chi = chi;
  c.y = Surd::sqrt(16 * Rational(k) * k * (hi - lo));
  c.process.scale = ProcessScale::Simple;
  c.process.domain = c.domain;
  OrthoVector acc;
  for (long m = 0; m <= cells; ++m) {
    c.process.times.push_back(lo + step * m);
    c.process.values.push_back(acc.scaled(scale));
    if (m < cells) acc += f[static_cast<size_t>(m)];
  }
  bridge_fill(c.process, lo, hi, b_set, ids);
  c.eps_bound = k == 0 ? 1.0 : binomial_left_tail(k, Rational(1, 3), Rational(k, 6)).get_d();
  finalize(c);
  return c;
}

ComplexityCert leaf_process(const OrthoVector& chi, const Rational& a, const Rational& b, const Rational& lo,
                            const Rational& hi, const PointSet* b_set, IdSource& ids) {
  require_window(a, b);
  if (!(lo < hi)) throw std::invalid_argument("leaf_process: need lo < hi");
  ComplexityCert c;
  c.kind = "leaf";
  c.domain = interval(lo, hi);
  c.a = a;
  c.b = b;
  c.chi = chi;
  c.process.scale = ProcessScale::Simple;
  c.process.domain = c.domain;
  c.process.times = {lo, hi};
  c.process.values = {OrthoVector(), chi.scaled(Surd::sqrt(kSimpleConstant * (hi - lo)))};
  bridge_fill(c.process, lo, hi, b_set, ids);
  finalize(c);
  return c;
}

std::string kind_name(PlanNode::Kind k) {
  switch (k) {
    case PlanNode::Kind::Leaf: return "leaf";
    case PlanNode::Kind::Example: return "example";
    case PlanNode::Kind::Nest: return "nest";
    case PlanNode::Kind::Merge: return "merge";
  }
  return "?";
}

nlohmann::json to_json(const PlanNode& p) {
  nlohmann::json j = {{"kind", kind_name(p.kind)}, {"lo", to_string(p.lo)}, {"hi", to_string(p.hi)}, {"y", p.y.to_double()}};
  if (p.kind == PlanNode::Kind::Example || p.kind == PlanNode::Kind::Nest) j["k"] = p.k;
  if (!p.children.empty()) {
    nlohmann::json kids = nlohmann::json::array();
    for (const auto& c : p.children) kids.push_back(to_json(c));
    j["children"] = kids;
  }
  if (!p.shares.empty()) {
    nlohmann::json sh = nlohmann::json::array();
    for (const auto& s : p.shares) sh.push_back(to_string(s));
    j["shares"] = sh;
  }
  return j;
}

SimpleSet plan_domain(const PlanNode& p) {
  if (p.kind != PlanNode::Kind::Merge) return interval(p.lo, p.hi);
  SimpleSet d;
  for (const auto& c : p.children)
    for (const auto& iv : plan_domain(c).intervals) {
      if (!d.intervals.empty() && d.intervals.back().second == iv.first) d.intervals.back().second = iv.second;
      else d.intervals.push_back(iv);
    }
  return d;
}

PlanNode plan_leaf(const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw std::invalid_argument("plan_leaf: need lo < hi");
  PlanNode p;
  p.lo = lo;
  p.hi = hi;
  p.lo.canonicalize();
  p.hi.canonicalize();
  return p;
}

PlanNode plan_example(unsigned k, const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw std::invalid_argument("plan_example: need lo < hi");
  if (k > kMaxPhiDepth) throw std::length_error("plan_example: k too large");
  PlanNode p;
  p.kind = PlanNode::Kind::Example;
  p.k = k;
  p.lo = lo;
  p.hi = hi;
  p.lo.canonicalize();
  p.hi.canonicalize();
  p.y = Surd::sqrt(16 * Rational(k) * k * (hi - lo));
  return p;
}

PlanNode plan_nest(unsigned k, std::vector<PlanNode> children) {
  if (static_cast<long>(children.size()) != ipow3(k)) throw std::invalid_argument("plan_nest: need 3^k children");
  if (k == 0) return std::move(children.front());
  if (k > kMaxPhiDepth) throw std::length_error("plan_nest: k too large");
  const Rational eta = children.front().hi - children.front().lo;
  for (size_t n = 0; n < children.size(); ++n) {
    const auto& c = children[n];
    if (c.hi - c.lo != eta) throw std::invalid_argument("plan_nest: children differ in length");
    if (plan_domain(c).intervals.size() != 1) throw std::invalid_argument("plan_nest: children must be intervals");
    if (n > 0 && children[n - 1].hi > c.lo) throw std::invalid_argument("plan_nest: children overlap or are unsorted");
  }
  PlanNode p;
  p.kind = PlanNode::Kind::Nest;
  p.k = k;
  p.lo = children.front().lo;
  p.hi = children.back().hi;
  Surd ymin = children.front().y;
  for (const auto& c : children) ymin = min(ymin, c.y);
  const Rational measure = eta * ipow3(k);
  p.y = Surd::sqrt(Rational(ipow3(k))) * ymin + Surd::sqrt(16 * Rational(k) * k * measure);
  p.children = std::move(children);
  return p;
}

PlanNode plan_merge(std::vector<PlanNode> children) {
  if (children.empty()) throw std::invalid_argument("plan_merge: no children");
  std::sort(children.begin(), children.end(), [](const PlanNode& x, const PlanNode& y) { return x.lo < y.lo; });
  for (size_t l = 1; l < children.size(); ++l)
    if (children[l - 1].hi > children[l].lo) throw std::invalid_argument("plan_merge: interiors overlap");
  if (children.size() == 1) return std::move(children.front());

  PlanNode p;
  p.kind = PlanNode::Kind::Merge;
  p.lo = children.front().lo;
  p.hi = children.back().hi;
  std::vector<Surd> sq;
  bool rational = true;
  for (const auto& c : children) {
    sq.push_back(c.y * c.y);
    rational = rational && sq.back().is_rational();
  }
  Surd total(0);
  for (const auto& s : sq) total += s;
  const size_t L = children.size();
  p.shares.assign(L, Rational(0));
  if (!total.is_zero()) {
    if (rational) {
      const Rational t = total.rational_value();
      for (size_t l = 0; l < L; ++l) p.shares[l] = sq[l].rational_value() / t;
    } else {
      const double t = total.to_double();
      std::vector<long> units(L, 0);
      long used = 0;
      size_t largest = 0;
      for (size_t l = 0; l < L; ++l) {
        if (sq[l].is_zero()) continue;
        units[l] = std::max(1L, std::lround(sq[l].to_double() / t * kShareDenominator));
        used += units[l];
        if (units[l] > units[largest]) largest = l;
      }
      units[largest] += kShareDenominator - used;
      if (units[largest] < 1) throw std::logic_error("plan_merge: share rounding failed");
      for (size_t l = 0; l < L; ++l) p.shares[l] = Rational(units[l], kShareDenominator);
    }
    for (auto& s : p.shares) s.canonicalize();
    bool first = true;
    for (size_t l = 0; l < L; ++l) {
      if (p.shares[l] == 0) continue;
      Surd yl = children[l].y * inv_sqrt(p.shares[l]);
      p.y = first ? yl : min(p.y, yl);
      first = false;
    }
  }
  p.children = std::move(children);
  return p;
}

ComplexityCert realize(const PlanNode& plan, const OrthoVector& chi, const Rational& a, const Rational& b,
                       const PointSet* b_set, IdSource& ids) {
  require_window(a, b);
  switch (plan.kind) {
    case PlanNode::Kind::Leaf: return leaf_process(chi, a, b, plan.lo, plan.hi, b_set, ids);
    case PlanNode::Kind::Example: return example_process(plan.k, chi, a, b, plan.lo, plan.hi, b_set, ids);
    default: break;
  }

  ComplexityCert c;
  c.k = plan.k;
  c.kind = kind_name(plan.kind);
  c.domain = plan_domain(plan);
  c.a = a;
  c.b = b;
  c.chi = chi;
  c.y = plan.y;
  c.process.scale = ProcessScale::Simple;
  c.process.domain = c.domain;
  std::map<Rational, OrthoVector> pts;
  double child_eps = 0.0;

  if (plan.kind == PlanNode::Kind::Nest) {
    const long cells = ipow3(plan.k);
    const auto f = phi_family_window(plan.k, chi, a, b);
    const Rational eta = plan.children.front().hi - plan.children.front().lo;
    const Surd outer = Surd::sqrt(576 * cells * eta);
    const Surd unit = Surd::sqrt(Rational(cells, 3));
    const Rational w = (b - a) / cells;
    OrthoVector prefix;
    for (long n = 0; n < cells; ++n) {
      const auto& child = plan.children[static_cast<size_t>(n)];
      ComplexityCert sub = realize(child, f[static_cast<size_t>(n)].scaled(unit), a + w * n, a + w * (n + 1), b_set, ids);
      for (size_t i = 0; i < sub.process.times.size(); ++i)
        pts.emplace(sub.process.times[i], prefix + sub.process.values[i]);
      prefix += f[static_cast<size_t>(n)].scaled(outer);
      child_eps = std::max(child_eps, sub.eps);
      c.children.push_back(summary(sub));
    }
    c.eps_bound = child_eps + binomial_left_tail(plan.k, Rational(1, 3), Rational(plan.k, 6)).get_d();
  } else {
    const size_t L = plan.children.size();
    const Rational total = c.domain.measure();
    std::vector<long> e;
    OrthoVector u;
    std::vector<Surd> w;
    for (size_t l = 0; l < L; ++l) {
      w.push_back(Surd::sqrt(plan_domain(plan.children[l]).measure() / total));
      e.push_back(ids.fresh());
      u += OrthoVector::external(e.back(), w.back());
    }
    OrthoVector prefix;
    Rational lo = a;
    for (size_t l = 0; l < L; ++l) {
      const Rational hi = l + 1 == L ? b : lo + (b - a) * plan.shares[l];
      OrthoVector chi_l = chi.scaled(w[l]) + OrthoVector::external(e[l]) - u.scaled(w[l]);
      ComplexityCert sub = realize(plan.children[l], chi_l, lo, hi, b_set, ids);
      for (size_t i = 0; i < sub.process.times.size(); ++i)
        pts.emplace(sub.process.times[i], prefix + sub.process.values[i]);
      prefix += sub.process.values.back();
      child_eps = std::max(child_eps, sub.eps);
      c.children.push_back(summary(sub));
      lo = hi;
    }
    c.eps_bound = child_eps;
  }
  for (auto& [t, v] : pts) {
    c.process.times.push_back(t);
    c.process.values.push_back(std::move(v));
  }
  finalize(c);
  return c;
}

namespace {

PlanNode plan_atom(const PointSet& b, const Rational& lo, const Rational& hi, int level) {
  const auto& pts = b.points();
  auto first = std::lower_bound(pts.begin(), pts.end(), lo);
  auto last = std::upper_bound(pts.begin(), pts.end(), hi);
  std::vector<Rational> inside(first, last);
  if (inside.size() <= 2 || level + 1 > static_cast<int>(kMaxBuildLevel)) {
    if (inside.size() > 2) throw std::length_error("build_divergent: level budget exceeded");
    return plan_leaf(lo, hi);
  }
  const unsigned sub = static_cast<unsigned>(level + 1);
  const Rational unit = grid_unit(sub);
  std::vector<Rational> cuts;
  for (const auto& t : inside)
    if (is_grid_point(t, sub)) cuts.push_back(t);
  if (cuts.front() != lo || cuts.back() != hi) throw std::invalid_argument("build_divergent: B is not triadic");

  struct Segment {
    PlanNode node;
    bool single;
  };
  std::vector<Segment> segs;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Rational& s = cuts[i];
    const Rational& t = cuts[i + 1];
    if (t - s == unit) {
      segs.push_back({plan_atom(b, s, t, static_cast<int>(sub)), true});
    } else {
      auto it = std::upper_bound(pts.begin(), pts.end(), s);
      if (it != pts.end() && *it < t) throw std::invalid_argument("build_divergent: B is not triadic");
      segs.push_back({plan_leaf(s, t), false});
    }
  }

  std::vector<PlanNode> pieces;
  size_t i = 0;
  while (i < segs.size()) {
    if (!segs[i].single) {
      pieces.push_back(std::move(segs[i].node));
      ++i;
      continue;
    }
    size_t j = i;
    while (j < segs.size() && segs[j].single) ++j;
    while (i < j) {
      unsigned k = 0;
      while (static_cast<size_t>(ipow3(k + 1)) <= j - i && k + 1 <= kMaxPhiDepth) ++k;
      const size_t n = static_cast<size_t>(ipow3(k));
      if (k == 0) {
        pieces.push_back(std::move(segs[i].node));
      } else {
        bool leaves = true;
        std::vector<PlanNode> kids;
        for (size_t q = i; q < i + n; ++q) {
          leaves = leaves && segs[q].node.kind == PlanNode::Kind::Leaf;
          kids.push_back(std::move(segs[q].node));
        }
        pieces.push_back(leaves ? plan_example(k, kids.front().lo, kids.back().hi) : plan_nest(k, std::move(kids)));
      }
      i += n;
    }
  }
  return plan_merge(std::move(pieces));
}

} // namespace

DivergentResult build_divergent(const PointSet& b, std::optional<double> target, long first_id) {
  for (const auto& t : b.points()) {
    int lvl = grid_level(t);
    if (lvl < 0 || lvl > static_cast<int>(kMaxBuildLevel))
      throw std::length_error("build_divergent: point " + to_string(t) + " lies beyond the level budget");
  }
  if (b.size() > 2) {
    TriadicSetCheck tc = is_triadic_set(b);
    if (!tc.ok) throw std::invalid_argument("build_divergent: B is not triadic (" + tc.reason + ")");
  }
  DivergentResult r;
  r.plan = plan_atom(b, Rational(0), Rational(1), -1);
  IdSource ids(first_id);
  const OrthoVector chi = OrthoVector::external(ids.fresh());
  r.cert = realize(r.plan, chi, Rational(0), Rational(1), &b, ids);
  r.check = verify_cert(r.cert);
  r.unit = r.cert.process.rescaled(Surd::sqrt(Rational(3)) * Surd(Rational(1, 72)), ProcessScale::Unit);
  r.target = target;
  if (target) {
    SurdStepFunction m = maximal_body(r.unit);
    r.target_exceedance = exceedance(m, Surd(from_double(*target)), true);
  }
  r.next_id = ids.peek();
  return r;
}

nlohmann::json to_json(const DivergentResult& r, bool with_process) {
  nlohmann::json j = {{"plan", to_json(r.plan)}, {"certificate", to_json(r.cert, false)}, {"check", to_json(r.check)}};
  j["achieved"] = {{"eps", r.cert.eps}, {"y", r.cert.y.to_double()}, {"y_unit", r.cert.y.to_double() / (24 * std::sqrt(3.0))}};
  if (r.target) {
    j["target"] = *r.target;
    j["target_exceedance"] = to_string(r.target_exceedance);
    j["target_exceedance_value"] = r.target_exceedance.get_d();
  }
  if (with_process) j["process"] = to_json(r.unit);
  return j;
}

PrefixResult divergent_prefix(const std::vector<PointSet>& sets, const std::vector<Rational>& alphas) {
  if (sets.empty()) throw std::invalid_argument("divergent_prefix: no blocks");
  if (sets.size() > kMaxProductFactors) throw std::length_error("divergent_prefix: too many blocks");
  if (alphas.size() != sets.size() + 1) throw std::invalid_argument("divergent_prefix: need one more cut point than blocks");
  PrefixResult r;
  long next = 1;
  for (size_t s = 0; s < sets.size(); ++s) {
    const Rational lo = alphas[s + 1], hi = alphas[s];
    if (!(lo < hi) || lo < 0 || hi > 1) throw std::invalid_argument("divergent_prefix: cut points must decrease inside [0,1]");
    DivergentResult d = build_divergent(sets[s], std::nullopt, next);
    next = d.next_id;
    const Rational len = hi - lo;
    OrthoProcess placed = d.unit.rescaled(Surd::sqrt(len), ProcessScale::Unit);
    for (auto& t : placed.times) t = lo + t * len;
    r.placed.push_back(std::move(placed));
    r.blocks.push_back(std::move(d));
  }
  r.product = glue_blocks(r.placed, alphas);
  return r;
}

} // namespace oseries
