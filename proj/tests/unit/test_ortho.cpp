#include "oseries/construct.hpp"
#include "oseries/ortho.hpp"

#include <doctest.h>

#include <cmath>

using namespace oseries;

namespace {

// Partial sums S_1..S_N of the phi family on times (lo, hi] split evenly, plus S_0 = 0 at lo.
OrthoProcess partial_sum_process(unsigned k, long chi_id, const Rational& lo, const Rational& hi) {
  auto fam = phi_family(k, OrthoVector::external(chi_id));
  OrthoProcess p;
  const Rational step = (hi - lo) / Rational(static_cast<long>(fam.size()));
  p.times.push_back(lo);
  p.values.push_back(OrthoVector{});
  OrthoVector acc;
  for (size_t n = 0; n < fam.size(); ++n) {
    acc += fam[n];
    p.times.push_back(lo + step * Rational(static_cast<long>(n + 1)));
    p.values.push_back(acc);
  }
  return p;
}

OrthoVector body_vec(std::vector<Rational> bps, std::vector<long> vals) {
  std::vector<Surd> v;
  for (long x : vals) v.emplace_back(x);
  OrthoVector o;
  o.body = SurdStepFunction(std::move(bps), std::move(v));
  return o;
}

} // namespace

TEST_SUITE("ortho") {
  TEST_CASE("vector algebra and inner products") {
    auto a = OrthoVector::external(1, Surd::sqrt(Rational(2)));
    auto b = body_vec({Rational(1, 2), Rational(1)}, {1, -1});
    CHECK(inner(a, b).is_zero());
    CHECK(norm_sq(a) == Surd(2));
    CHECK(norm_sq(b) == Surd(1));
    CHECK(norm_sq(a + b) == Surd(3));
    CHECK((a - a).is_zero());
    CHECK(inner_double(a.scaled(Surd(3)), a) == doctest::Approx(6.0));
    CHECK(to_json(b).contains("body"));
  }

  TEST_CASE("Gram check on the unit-scale partial sums") {
    auto p = partial_sum_process(1, 0, Rational(0), Rational(1));
    // increments of squared norm 1 on time steps 1/3
    OrthoProcess u = p;
    for (auto& v : u.values) v = v.scaled(Surd::sqrt(Rational(1, 3)));
    auto g = gram_check(u, true);
    CHECK(g.exact_zero);
    CHECK(g.ok());
    CHECK(gram_check(u, false).ok());

    OrthoProcess single;
    single.times = {Rational(0)};
    single.values = {OrthoVector{}};
    CHECK(gram_check(single).max_deviation == 0.0);

    OrthoProcess bad = u;
    bad.values[2] += OrthoVector::external(99, Surd(Rational(1, 10)));
    auto gb = gram_check(bad, true);
    CHECK_FALSE(gb.exact_zero);
    CHECK(gb.max_deviation > 1e-3);
    CHECK_FALSE(gb.ok());
  }

  TEST_CASE("maximal function of partial sums") {
    auto p1 = partial_sum_process(1, 0, Rational(0), Rational(1));
    auto m1 = maximal_body(p1);
    CHECK(m1 == SurdStepFunction::indicator(Rational(1, 3), Rational(2, 3), Surd(1)));
    CHECK(exceedance(m1, Surd(1)) == Rational(1, 3));
    auto p2 = partial_sum_process(2, 0, Rational(0), Rational(1));
    auto m2 = maximal_body(p2);
    CHECK(exceedance(m2, Surd(1)) == Rational(5, 9));
    CHECK(exceedance(m2, Surd(2)) == Rational(1, 9));
    CHECK(exceedance(m2, Surd(1), true) == Rational(1, 9));
    CHECK(exceedance(m2, Surd(1), false, Rational(1, 3), Rational(2, 3)) == Rational(1, 3));
    OrthoProcess zero;
    zero.times = {Rational(0), Rational(1)};
    zero.values = {OrthoVector{}, OrthoVector{}};
    CHECK(maximal_function(zero) == StepFunction::constant(0.0));
  }

  TEST_CASE("Menshov-type maximal inequality") {
    auto y = body_vec({Rational(1)}, {2});
    auto one = menshov_bound_check({y});
    CHECK(one.lhs == doctest::Approx(4.0));
    CHECK(one.rhs == doctest::Approx(4.0));
    CHECK(one.ok);
    // constant 1 then a Haar function: sums 1, then 2 on the left half and 0 on the right
    auto haar = menshov_bound_check({body_vec({Rational(1)}, {1}), body_vec({Rational(1, 2), Rational(1)}, {1, -1})});
    CHECK(haar.lhs == doctest::Approx(0.5 * 4 + 0.5 * 1));
    CHECK(haar.rhs == doctest::Approx(4.0 * 2));
    CHECK(haar.lhs < haar.rhs);
    auto fam = menshov_bound_check(phi_family(2, OrthoVector::external(0)));
    CHECK(fam.ok);
    CHECK(fam.rhs == doctest::Approx(std::pow(std::log2(9.0) + 1, 2) * 3));
    CHECK_THROWS(menshov_bound_check({y, y}));
  }

  TEST_CASE("maximal norm with external parts") {
    std::vector<OrthoVector> xs{OrthoVector::external(1), OrthoVector::external(2, Surd(2))};
    CHECK(max_norm_sq(xs) == Surd(5));
  }

  TEST_CASE("atom maxima on the grid") {
    auto p = partial_sum_process(2, 0, Rational(0), Rational(1));
    auto atoms = m_grid(p, 0);
    REQUIRE(atoms.size() == 3);
    for (const auto& a : atoms) CHECK(a.norm > 0.0);
    // constant on the first atom
    OrthoProcess c = p;
    for (size_t n = 1; n <= 3; ++n) c.values[n] = c.values[0];
    auto ca = m_grid(c, 0);
    REQUIRE(ca.size() == 3);
    CHECK(ca[0].norm == 0.0);
    CHECK(ca[1].norm > 0.0);
    // No time inside the open interior of the last atom
    OrthoProcess gap;
    gap.times = {Rational(0), Rational(1, 3), Rational(1)};
    gap.values = {OrthoVector{}, body_vec({Rational(1)}, {1}), body_vec({Rational(1)}, {1})};
    for (const auto& a : m_grid(gap, 0)) CHECK(a.norm == 0.0);
  }

  TEST_CASE("product of independent blocks") {
    auto b0 = partial_sum_process(1, 0, Rational(1, 2), Rational(1));
    auto b1 = partial_sum_process(1, 1, Rational(0), Rational(1, 2));
    auto single = glue_blocks({b0}, {Rational(1), Rational(1, 2)});
    CHECK(single.factor_exceedance(0, 1.0, false, false) == Rational(1, 3));
    CHECK(single.max_exceedance(1.0, false, false) == doctest::Approx(1.0 / 3));
    auto two = glue_blocks({b0, b1}, {Rational(1), Rational(1, 2), Rational(0)});
    CHECK(two.independent);
    CHECK(two.union_exceedance(1.0, false, false) == Rational(5, 9));
    CHECK(two.max_exceedance(1.0, false, false) == doctest::Approx(5.0 / 9));
    CHECK_THROWS(glue_blocks({}, {}));
    CHECK_THROWS(glue_blocks({b0, b1}, {Rational(1), Rational(0)}));
    std::vector<OrthoProcess> many(kMaxProductFactors + 1, b0);
    CHECK_THROWS(glue_blocks(many, std::vector<Rational>(many.size() + 1)));
  }

  TEST_CASE("simple-set measures") {
    SimpleSet d{{{Rational(0), Rational(1, 3)}, {Rational(2, 3), Rational(1)}}};
    CHECK(d.measure() == Rational(2, 3));
    CHECK(d.measure_between(Rational(1, 6), Rational(5, 6)) == Rational(1, 3));
    CHECK(d.contains(Rational(1, 3)));
    CHECK_FALSE(d.contains(Rational(1, 2)));
  }
}
