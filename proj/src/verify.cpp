#include "oseries/verify.hpp"

#include "oseries/construct.hpp"
#include "oseries/criteria.hpp"
#include "oseries/info.hpp"
#include "oseries/ortho.hpp"
#include "oseries/random.hpp"
#include "oseries/sets.hpp"
#include "oseries/vcalc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <map>
#include <set>

namespace oseries {

nlohmann::json to_json(const SuiteResult& r) {
  return {{"name", r.name},           {"lemma", r.lemma},       {"instances", r.instances},
          {"violations", r.violations}, {"worst_ratio", r.worst_ratio}, {"failures", r.failures},
          {"passed", r.passed()},     {"details", r.details}};
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

class Tally {
public:
  Tally(SuiteResult& r, bool corrupt) : r_(r), corrupt_(corrupt) {}

  // lhs <= rhs + tol
  void le(double lhs, double rhs, size_t inst, const std::string& what, double tol = 1e-9) {
    if (corrupt_) lhs += std::fabs(rhs) + tol + 1;
    if (rhs > 0) r_.worst_ratio = std::max(r_.worst_ratio, lhs / rhs);
    if (!(lhs <= rhs + tol)) fail(inst, what + ": " + fmt(lhs) + " > " + fmt(rhs));
  }
  void holds(bool ok, size_t inst, const std::string& what) {
    if (corrupt_) ok = false;
    if (!ok) fail(inst, what);
  }

private:
  void fail(size_t inst, const std::string& msg) {
    ++r_.violations;
    if (r_.failures.size() < 5) r_.failures.push_back("instance " + std::to_string(inst) + ": " + msg);
  }
  SuiteResult& r_;
  bool corrupt_;
};

SuiteResult start(const char* name, const char* lemma) {
  SuiteResult r;
  r.name = name;
  r.lemma = lemma;
  return r;
}

// Distinct deterministic stream per suite.
Rng suite_rng(const SuiteOptions& o, std::uint64_t salt) { return Rng(o.seed * 0x9E3779B97F4A7C15ULL + salt); }

// Indicator of the level-j atoms meeting a piece where h >= thr.
StepFunction atoms_meeting(const StepFunction& h, unsigned j, double thr) {
  const Rational u = grid_unit(j);
  std::set<BigInt> hit;
  for (size_t k = 0; k < h.size(); ++k) {
    if (h.values()[k] < thr) continue;
    BigInt a = floor_div(h.left(k) / u), b = ceil_div(h.right(k) / u);
    for (BigInt n = a; n < b; ++n) hit.insert(n);
  }
  std::vector<Rational> bp;
  std::vector<double> vs;
  Rational at(0);
  for (const BigInt& n : hit) {
    Rational l = Rational(n) * u, r = l + u;
    if (l > at) {
      bp.push_back(l);
      vs.push_back(0.0);
    }
    bp.push_back(r);
    vs.push_back(1.0);
    at = r;
  }
  if (at < 1) {
    bp.push_back(Rational(1));
    vs.push_back(0.0);
  }
  return StepFunction(std::move(bp), std::move(vs));
}

StepFunction plus_one(const StepFunction& f) {
  return f.map([](double x) { return x + 1; });
}

} // namespace

SuiteResult suite_phi(const SuiteOptions& o) {
  auto r = start("phi", "Lemma 2.1");
  Tally t(r, o.corrupt);
  for (unsigned k = 1; k <= 3; ++k) {
    auto rep = phi_family_check(k);
    t.holds(rep.ok(), k, "phi family k=" + std::to_string(k));
    r.details["k" + std::to_string(k)] = to_json(rep);
    ++r.instances;
  }
  return r;
}

SuiteResult suite_bernstein(const SuiteOptions& o) {
  auto r = start("bernstein", "Lemma 2.2");
  Tally t(r, o.corrupt);
  for (unsigned k = 1; k <= 200; ++k) {
    auto b = bernstein_check(k);
    t.le(b.tail.get_d(), b.bound, k, "binomial tail k=" + std::to_string(k), 0.0);
    t.holds(b.ok, k, "exact comparison k=" + std::to_string(k));
    ++r.instances;
  }
  return r;
}

SuiteResult suite_lemma_5_6(const SuiteOptions& o) {
  auto r = start("lemma_5_6", "Lemma 5.6");
  Tally t(r, o.corrupt);
  Rng rng = suite_rng(o, 56);
  for (size_t n = 0; n < o.count; ++n) {
    unsigned i = static_cast<unsigned>(rng.uniform_int(1, 3));
    auto h = random_triadic_fn(rng, i);
    for (unsigned j = 0; j < i; ++j) {
      auto lhs = v_apply(h, j, i, true).pos_part(pow2(j));
      auto rhs = v_apply(h, j, i, false).scaled(2).pos_part(pow2(j));
      t.le((lhs - rhs).max_value(), 0.0, n, "pointwise j=" + std::to_string(j) + " i=" + std::to_string(i));
    }
    ++r.instances;
  }
  return r;
}

SuiteResult suite_lemma_5_8(const SuiteOptions& o) {
  auto r = start("lemma_5_8", "Lemma 5.8");
  Tally t(r, o.corrupt);
  Rng rng = suite_rng(o, 58);
  size_t rejected = 0;
  auto norm = [](const std::vector<double>& p, const std::vector<double>& f) {
    double s = 0;
    for (size_t k = 0; k < p.size(); ++k) s += p[k] * f[k] * f[k];
    return std::sqrt(s);
  };
  // V g = g ∧ 4 + ||(g - 4)^+|| on a finite probability space
  auto v_minus_one = [&](const std::vector<double>& p, const std::vector<double>& g) {
    std::vector<double> ex(g.size()), out(g.size());
    for (size_t k = 0; k < g.size(); ++k) ex[k] = std::max(g[k] - 4, 0.0);
    double c = norm(p, ex);
    for (size_t k = 0; k < g.size(); ++k) out[k] = std::min(g[k], 4.0) + c - 1;
    return norm(p, out);
  };
  while (r.instances < o.count) {
    size_t atoms = static_cast<size_t>(rng.uniform_int(1, 10));
    std::vector<double> p(atoms), g1(atoms), g(atoms);
    double total = 0;
    for (auto& x : p) total += (x = 0.05 + rng.uniform01());
    for (auto& x : p) x /= total;
    for (size_t k = 0; k < atoms; ++k) {
      g1[k] = 2 + 30 * std::pow(rng.uniform01(), 2);
      g[k] = g1[k] + (rng.bernoulli(0.3) ? 0.0 : 40 * std::pow(rng.uniform01(), 3));
    }
    std::vector<double> ga(atoms), g1a(atoms);
    bool on_a = true;
    for (size_t k = 0; k < atoms; ++k) {
      bool in_a = g[k] >= 8;
      if (in_a && g1[k] < 4) on_a = false;
      ga[k] = in_a ? g[k] - 2 : 0;
      g1a[k] = in_a ? g1[k] - 2 : 0;
    }
    if (!on_a || norm(p, ga) > 14 * norm(p, g1a)) {
      ++rejected;
      continue;
    }
    const size_t n = r.instances++;
    t.le(v_minus_one(p, g), 14 * v_minus_one(p, g1), n, "||Vg-1|| <= 14||Vg1-1||");
  }
  r.details["rejected_samples"] = rejected;
  return r;
}

SuiteResult suite_lemma_5_10(const SuiteOptions& o) {
  auto r = start("lemma_5_10", "Lemma 5.10");
  Tally t(r, o.corrupt);
  Rng rng = suite_rng(o, 510);
  for (size_t n = 0; n < o.count; ++n) {
    unsigned i = static_cast<unsigned>(rng.uniform_int(1, 3));
    auto h = random_triadic_fn(rng, i);
    double lhs = v_apply(h, 0, i).l2_norm();
    double rhs = 14 * v_apply(dyadic_halffloor(h), 0, i).l2_norm();
    t.le(lhs, rhs, n, "factor 14, i=" + std::to_string(i));
    ++r.instances;
  }
  return r;
}

SuiteResult suite_lemma_5_12(const SuiteOptions& o) {
  auto r = start("lemma_5_12", "Lemma 5.12");
  Tally t(r, o.corrupt);
  Rng rng = suite_rng(o, 512);
  for (size_t n = 0; n < o.count; ++n) {
    auto h = plus_one(random_grid_step(rng, 729, 12, 15));
    auto g = h.min_with(plus_one(random_grid_step(rng, 729, 12, 15)));
    unsigned j = static_cast<unsigned>(rng.uniform_int(1, 2));
    const int ji = static_cast<int>(j);
    auto a = atoms_meeting(h, j, pow2(ji));
    double lhs = (slice_up(v_step(h, j), ji - 1) - slice_up(v_step(g, j), ji - 1)).l2_norm();
    double rhs = (slice_up(h, ji) - slice_up(g, ji)).l2_norm() +
                 ((slice_down(h, ji) - slice_down(g, ji)) * a).l2_norm() +
                 (slice_mid(h, ji - 1) - slice_mid(g, ji - 1)).l2_norm();
    t.le(lhs, rhs, n, "triangle bound j=" + std::to_string(j));
    ++r.instances;
  }
  return r;
}

SuiteResult suite_lemma_5_13(const SuiteOptions& o) {
  auto r = start("lemma_5_13", "Lemma 5.13");
  Tally t(r, o.corrupt);
  Rng rng = suite_rng(o, 513);
  double w32 = 0, w33 = 0;
  for (size_t n = 0; n < o.count; ++n) {
    auto b = random_point_set(rng, static_cast<size_t>(rng.uniform_int(1, 8)), 200);
    auto gen = generate(b).generated;
    auto hb = info_fn(b, 3);
    auto ht = dyadic_halffloor(info_fn(gen, 3), true);
    unsigned j = static_cast<unsigned>(rng.uniform_int(1, 2));
    unsigned i = static_cast<unsigned>(rng.uniform_int(j + 1, 3));
    const int ji = static_cast<int>(j);
    auto g = v_apply(hb, j + 1, i);
    auto h = v_apply(hb.max_with(ht), j + 1, i);
    auto a = atoms_meeting(h, j, pow2(ji));
    double e32 = (slice_mid(h, ji - 1) - slice_mid(g, ji - 1)).l2_norm();
    double b32 = pow2(ji) * std::pow(3.0, -pow2(ji - 1));
    double e33 = ((slice_down(h, ji) - slice_down(g, ji)) * a).l2_norm();
    double b33 = pow2(ji + 1) * std::pow(3.0, -pow2(ji - 2));
    w32 = std::max(w32, e32 / b32);
    w33 = std::max(w33, e33 / b33);
    t.le(e32, b32, n, "slice distance j=" + std::to_string(j));
    t.le(e33, b33, n, "restricted distance j=" + std::to_string(j));
    ++r.instances;
  }
  r.details["worst_ratio_slice"] = w32;
  r.details["worst_ratio_restricted"] = w33;
  return r;
}

SuiteResult suite_lemma_3_19(const SuiteOptions& o) {
  auto r = start("lemma_3_19", "Lemma 3.19");
  Tally t(r, o.corrupt);
  Rng rng = suite_rng(o, 319);
  for (size_t n = 0; n < o.count; ++n) {
    unsigned j = static_cast<unsigned>(rng.uniform_int(1, 2));
    auto h = random_type_j(rng, j);
    t.holds(is_type_j(h, j).ok, n, "fixture of type " + std::to_string(j));
    auto vh = is_type_j(v_step(h, j), j - 1);
    t.holds(vh.ok, n, "V_j h of type j-1 (j=" + std::to_string(j) + "): " + vh.reason);
    if (n % 4 == 0) {
      auto h5 = random_type_j(rng, 5);
      auto tj = apply_type_j(h5, 5);
      t.holds(tj.ok(), n, "type-5 operator certificates");
      auto w = is_type_j(tj.w, 4);
      t.holds(w.ok, n, "V_5 U h of type 4: " + w.reason);
      t.holds(is_type_j(v_step(h5, 5), 4).ok, n, "V_5 h of type 4");
    }
    ++r.instances;
  }
  return r;
}

SuiteResult suite_lemma_3_23(const SuiteOptions& o) {
  auto r = start("lemma_3_23", "Lemma 3.23");
  Tally t(r, o.corrupt);
  Rng rng = suite_rng(o, 323);
  for (size_t n = 0; n < o.count; ++n) {
    unsigned i = static_cast<unsigned>(rng.uniform_int(1, 2));
    size_t len = static_cast<size_t>(rng.uniform_int(0, 40));
    const double top = pow2(2 * static_cast<int>(i) + 1);
    std::vector<double> a(len);
    for (auto& x : a) x = rng.bernoulli(0.3) ? 0.0 : std::floor(rng.uniform01() * top * 8) / 8;
    auto sel = select_blocks(a, i);
    t.holds(sel.precedes, n, "precedence certificate");
    t.le(sel.sum_c_sq, sel.c_bound, n, "sum c^2 bound");
    t.holds(sel.c_ok && sel.d_ok && sel.decomposition_ok, n, "c/d/decomposition postconditions");

    std::map<double, BigInt> counts;
    for (double x : a) counts[x] += 1;
    std::vector<std::pair<double, BigInt>> runs(counts.begin(), counts.end());
    auto rs = select_blocks_runs(runs, i);
    t.holds(rs.ok(), n, "run-length postconditions");
    t.le(std::fabs(rs.sum_c_sq - sel.sum_c_sq), 0.0, n, "run-length sum c^2 agrees", 1e-9);
    ++r.instances;
  }
  return r;
}

SuiteResult suite_lemma_3_26(const SuiteOptions& o) {
  auto r = start("lemma_3_26", "Lemma 3.26");
  Tally t(r, o.corrupt);
  Rng rng = suite_rng(o, 326);
  size_t atoms_checked = 0;
  for (size_t n = 0; n < o.count; ++n) {
    unsigned i = static_cast<unsigned>(rng.uniform_int(1, 3));
    auto h = random_triadic_fn(rng, i);
    auto f = v_apply(h, 1, i).map([](double x) { return x - 1; });
    auto g = v_apply(dyadic_floor(h), 1, i).map([](double x) { return x - 1; });
    const Rational u = grid_unit(1);
    for (long m = 0; m < 9; ++m) {
      Rational a = Rational(m) * u, b = a + u;
      if (h.restrict_to(a, b).measure_where([](double x) { return x >= 2; }) != u) continue;
      ++atoms_checked;
      t.le(f.restrict_to(a, b).l2_norm(), 3 * g.restrict_to(a, b).l2_norm(), n,
           "level-shifted factor 3 on atom " + std::to_string(m));
    }
    // Literal levels 8..i are empty at this scale: the bound reads V h <= ||(h - 2^7)^+|| + 2^8.
    t.le(v_functional(h), h.pos_part(pow2(7)).l2_norm() + pow2(8), n, "literal level bound");
    ++r.instances;
  }
  r.details["atoms_checked"] = atoms_checked;
  return r;
}

SuiteResult suite_geometry(const SuiteOptions& o) {
  auto r = start("geometry", "Lemmas 4.2, 4.4, 4.5");
  Tally t(r, o.corrupt);
  Rng rng = suite_rng(o, 45);
  Rational worst_first(0), worst_second(0);
  size_t max_new = 0;
  for (size_t n = 0; n < o.count; ++n) {
    auto a = random_point_set(rng, static_cast<size_t>(rng.uniform_int(1, 12)), 1000);
    auto gen = generate(a);
    auto rs = rho_sums(a, gen.generated);
    t.holds(rs.first_ok && rs.second_ok, n, "exact rho bounds");
    t.le(rs.generated_to_base.get_d(), 3.0, n, "sum rho(t, A) <= 3", 0.0);
    t.le(rs.base_to_generated.get_d(), 1.0, n, "sum rho(s, gen A) <= 1", 0.0);
    worst_first = std::max(worst_first, rs.generated_to_base);
    worst_second = std::max(worst_second, rs.base_to_generated);
    t.holds(gen.triadic.ok, n, "generated set triadic: " + gen.triadic.reason);

    std::vector<Rational> more = a.points();
    for (long k = rng.uniform_int(0, 4); k > 0; --k) more.push_back(Rational(rng.uniform_int(0, 1000), 1000));
    PointSet a1(more);
    auto mono = monotonicity_checks(a, a1);
    t.holds(mono.subset_ok, n, "generated sets nested under A subset A1");
    t.holds(mono.info_ok, n, "information function grows under generation");
    t.holds(mono.equal_when_same, n, "generation deterministic");
    max_new = std::max(max_new, mono.difference_size);
    ++r.instances;
  }
  r.details["max_generated_to_base"] = to_string(worst_first);
  r.details["max_base_to_generated"] = to_string(worst_second);
  r.details["max_new_generated_points"] = max_new;
  return r;
}

SuiteResult suite_gram(const SuiteOptions& o) {
  auto r = start("gram", "Lemma 3.3 / Example 3.7 processes");
  Tally t(r, o.corrupt);
  Rng rng = suite_rng(o, 33);
  const size_t builds = std::max<size_t>(1, o.count / 10);
  for (size_t n = 0; n < builds; ++n) {
    auto b = random_triadic_set(rng);
    auto res = build_divergent(b);
    t.holds(res.check.ok(), n, "certificate checks");
    auto g = gram_check(res.unit, true);
    t.holds(g.exact_zero && g.ok(), n, "unit process Gram identity");
    ++r.instances;
  }
  for (unsigned k = 1; k <= 3; ++k) {
    IdSource ids;
    OrthoVector chi = OrthoVector::external(ids.fresh());
    auto cert = example_process(k, chi, Rational(0), Rational(1), Rational(0), Rational(1), nullptr, ids);
    auto g = gram_check(cert.process, true);
    t.holds(g.exact_zero && g.ok(), k, "example process k=" + std::to_string(k));
    ++r.instances;
  }
  return r;
}

SuiteResult suite_menshov(const SuiteOptions& o) {
  auto r = start("menshov", "Lemma 5.1");
  Tally t(r, o.corrupt);
  for (unsigned k = 1; k <= 3; ++k) {
    auto fam = phi_family(k, OrthoVector::external(0));
    auto m = menshov_bound_check(fam);
    t.le(m.lhs, m.rhs, k, "phi family N=" + std::to_string(fam.size()));
    r.details["N" + std::to_string(fam.size())] = {{"lhs", m.lhs}, {"rhs", m.rhs}};
    ++r.instances;
  }
  OrthoVector one, haar;
  one.body = SurdStepFunction::constant(Surd(1));
  haar.body = SurdStepFunction({Rational(1, 2), Rational(1)}, {Surd(1), Surd(-1)});
  auto m = menshov_bound_check({one, haar});
  t.le(m.lhs, m.rhs, 0, "Haar pair");
  r.details["haar"] = {{"lhs", m.lhs}, {"rhs", m.rhs}};
  ++r.instances;
  return r;
}

SuiteResult suite_corollary_5_5(const SuiteOptions& o) {
  auto r = start("corollary_5_5", "Corollary 5.5");
  Tally t(r, o.corrupt);
  Rng rng = suite_rng(o, 55);
  const size_t builds = std::max<size_t>(1, o.count / 10);
  size_t atoms = 0;
  for (size_t n = 0; n < builds; ++n) {
    auto b = random_triadic_set(rng);
    auto res = build_divergent(b);
    auto hb = info_fn(b, 3);
    unsigned i = std::max(1u, stabilization_level(hb));
    for (unsigned j = 0; j <= 1 && j < i; ++j) {
      auto f = v_apply(hb, j, i, true).pos_part(pow2(static_cast<int>(j)));
      const Rational u = grid_unit(j);
      for (const auto& m : m_grid(res.unit, j)) {
        Rational a = Rational(m.index) * u;
        t.le(m.norm, 3 * f.restrict_to(a, a + u).l2_norm(), n,
             "atom " + m.index.get_str() + " at level " + std::to_string(j));
        ++atoms;
      }
    }
    ++r.instances;
  }
  r.details["atoms_checked"] = atoms;
  return r;
}

SuiteResult suite_cantor(const SuiteOptions& o) {
  auto r = start("cantor", "Example 6.8");
  Tally t(r, o.corrupt);
  size_t literal_failures = 0;
  nlohmann::json rows = nlohmann::json::array();
  for (unsigned k = 0; k <= 12; ++k) {
    auto c = cantor_tail(k);
    // Independent oracle: lambda(H_C = m) = 2^{m-1} 3^{-m}.
    Rational l2(0), l1(0);
    for (unsigned m = k + 1; m <= 200; ++m) {
      Rational p(pow_int(2, m - 1), pow3(m));
      l2 += Rational((m - k) * (m - k)) * p;
      l1 += Rational(m - k) * p;
    }
    t.holds(l2 == c.l2_sq_partial && l1 == c.l1_partial, k, "exact tail sums");
    const double closed_l1 = 3 * std::pow(2.0 / 3.0, k), closed_l2_sq = 15 * std::pow(2.0 / 3.0, k);
    t.le(std::fabs(c.l1_partial.get_d() - closed_l1), 0.0, k, "L1 tail = 3(2/3)^k", 1e-12);
    t.le(std::fabs(c.l2_sq_partial.get_d() - closed_l2_sq), 0.0, k, "L2 tail^2 = 15(2/3)^k", 1e-12);
    if (!c.bound_ok) ++literal_failures;
    rows.push_back({{"k", k}, {"l2", c.l2}, {"bound", c.bound}, {"l1", c.l1_partial.get_d()}});
    ++r.instances;
  }
  std::vector<Rational> widths{Rational(1, 3), Rational(1, 9), Rational(1, 27)};
  auto cv = continuity_verdict(ClosedSet::cantor(), Rational(0), widths, 10);
  bool stable = std::all_of(cv.windows.begin(), cv.windows.end(), [](const auto& w) { return w.stabilized; });
  t.holds(stable, 0, "continuity trace stabilizes: " + cv.verdict);
  ++r.instances;
  r.details["tails"] = rows;
  r.details["l2_literal_bound_failures"] = literal_failures;
  return r;
}

SuiteResult suite_sandwich(const SuiteOptions& o) {
  auto r = start("sandwich", "Proposition 1.5");
  Tally t(r, o.corrupt);
  Rng rng = suite_rng(o, 15);
  bool tandori_witness = false;
  for (size_t n = 0; n < o.count; ++n) {
    auto seq = random_coefficients(rng, static_cast<size_t>(rng.uniform_int(1, 40)));
    auto s = sandwich_check(seq);
    t.holds(s.ok(), n, "sandwich chain");
    auto sq = seq.squares();
    std::shuffle(sq.begin(), sq.end(), rng.engine());
    auto perm = CoefficientSeq::from_squares(sq);
    double b0 = beta_condition(seq).value, b1 = beta_condition(perm).value;
    double g0 = gamma_condition(seq).value, g1 = gamma_condition(perm).value;
    t.le(std::fabs(b0 - b1), 0.0, n, "beta permutation invariance", 1e-9 * (1 + b0));
    t.le(std::fabs(g0 - g1), 0.0, n, "gamma permutation invariance", 1e-9 * (1 + g0));
    std::reverse(sq.begin(), sq.end());
    double t0 = tandori_sum(seq).value, t1 = tandori_sum(CoefficientSeq::from_squares(sq)).value;
    if (std::fabs(t0 - t1) > 1e-9 * (1 + t0)) tandori_witness = true;
    ++r.instances;
  }
  t.holds(tandori_witness, o.count, "Tandori sum changes under some permutation");
  r.details["tandori_witness"] = tandori_witness;
  return r;
}

SuiteResult suite_shift(const SuiteOptions& o) {
  auto r = start("shift", "Lemma 6.3");
  Tally t(r, o.corrupt);
  Rng rng = suite_rng(o, 63);
  for (size_t n = 0; n < o.count; ++n) {
    int j = static_cast<int>(rng.uniform_int(-1, 1));
    BigInt m = j < 0 ? BigInt(0) : rng.below(pow3(1UL << j));
    const size_t subs = j < 0 ? 3 : static_cast<size_t>(pow3(1UL << j).get_ui());
    std::vector<size_t> perm(subs);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    auto s = ShiftMap::of_type(j, m, perm);

    auto pts = random_triadic_set(rng).points();
    for (auto& p : sub_grid_points(j, m)) pts.push_back(p);
    PointSet b(pts);
    auto sb = s.apply(b);
    t.holds(s.is_bijective(), n, "shift map bijective");
    t.holds(s.compose(s.inverse()).is_identity(), n, "shift map inverse");
    double v0 = v_functional(info_fn(b, 3)), v1 = v_functional(info_fn(sb, 3));
    t.le(std::fabs(v0 - v1), 0.0, n, "V h_B invariant (j=" + std::to_string(j) + ")", 1e-9);
    ++r.instances;
  }
  return r;
}

const std::vector<SuiteInfo>& all_suites() {
  static const std::vector<SuiteInfo> suites{
      {"phi", "Lemma 2.1", suite_phi},
      {"bernstein", "Lemma 2.2", suite_bernstein},
      {"lemma_5_6", "Lemma 5.6", suite_lemma_5_6},
      {"lemma_5_8", "Lemma 5.8", suite_lemma_5_8},
      {"lemma_5_10", "Lemma 5.10", suite_lemma_5_10},
      {"lemma_5_12", "Lemma 5.12", suite_lemma_5_12},
      {"lemma_5_13", "Lemma 5.13", suite_lemma_5_13},
      {"lemma_3_19", "Lemma 3.19", suite_lemma_3_19},
      {"lemma_3_23", "Lemma 3.23", suite_lemma_3_23},
      {"lemma_3_26", "Lemma 3.26", suite_lemma_3_26},
      {"geometry", "Lemmas 4.2, 4.4, 4.5", suite_geometry},
      {"gram", "Lemma 3.3 / Example 3.7 processes", suite_gram},
      {"menshov", "Lemma 5.1", suite_menshov},
      {"corollary_5_5", "Corollary 5.5", suite_corollary_5_5},
      {"cantor", "Example 6.8", suite_cantor},
      {"sandwich", "Proposition 1.5", suite_sandwich},
      {"shift", "Lemma 6.3", suite_shift},
  };
  return suites;
}

} // namespace oseries
