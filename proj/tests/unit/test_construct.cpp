#include "oseries/construct.hpp"
#include "oseries/sets.hpp"

#include <doctest.h>

#include <gmpxx.h>

#include <cmath>

using namespace oseries;

namespace {

// P(Bin(k,1/3) < k/6) = sum_{6j < k} C(k,j) 2^{k-j} / 3^k
Rational binomial_oracle(unsigned k) {
  mpz_class num = 0;
  for (unsigned j = 0; 6 * j < k; ++j) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), k, j);
    mpz_class p2;
    mpz_ui_pow_ui(p2.get_mpz_t(), 2, k - j);
    num += c * p2;
  }
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 3, k);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

SurdStepFunction surd_of(const ExactStepFunction& f, const Surd& c) {
  return f.map([&](const Rational& v) { return Surd(v) * c; });
}

} // namespace

TEST_SUITE("construct") {
  TEST_CASE("ternary helpers") {
    CHECK(hat(0) == 0);
    CHECK(hat(1) == 1);
    CHECK(hat(2) == -1);
    CHECK(hat(-1) == -1);
    CHECK(hat(-2) == 1);
    CHECK(ternary_digits(5, 3) == std::vector<int>{0, 1, 2});
    auto x1 = digit_function(1);
    CHECK(x1.eval(Rational(1, 3)) == 0);
    CHECK(x1.eval(Rational(1, 2)) == 1);
    CHECK(x1.eval(Rational(1)) == 2);
    auto ones = digit_ones(2);
    CHECK(ones.measure_where([](const Rational& v) { return v == 0; }) == Rational(4, 9));
    CHECK(ones.measure_where([](const Rational& v) { return v == 1; }) == Rational(4, 9));
    CHECK(ones.measure_where([](const Rational& v) { return v == 2; }) == Rational(1, 9));
  }

  TEST_CASE("phi family identities") {
    for (unsigned k = 1; k <= 3; ++k) {
      auto rep = phi_family_check(k);
      CHECK(rep.ok());
    }
    auto f1 = phi_family(1, OrthoVector::external(0));
    REQUIRE(f1.size() == 3);
    for (size_t n = 0; n < 3; ++n)
      for (size_t m = 0; m < 3; ++m) CHECK(inner(f1[n], f1[m]) == Surd(n == m ? 1 : 0));
    auto f2 = phi_family(2, OrthoVector::external(7));
    OrthoVector sum;
    for (const auto& v : f2) sum += v;
    CHECK(sum == OrthoVector::external(7, Surd::sqrt(Rational(3))));
    // pairwise Gram agrees with the fast integer path
    for (size_t n = 0; n < f2.size(); ++n)
      for (size_t m = n; m < f2.size(); ++m) CHECK(inner(f2[n], f2[m]) == Surd(n == m ? Rational(1, 3) : Rational(0)));
    CHECK_THROWS(phi_family(1, OrthoVector::external(0, Surd(2))));
    OrthoVector with_body = OrthoVector::external(0);
    with_body.body = SurdStepFunction::indicator(Rational(0), Rational(1, 2), Surd(1));
    CHECK_THROWS(phi_family(1, with_body));
  }

  TEST_CASE("maximal partial sums equal the digit count") {
    auto f = phi_family(2, OrthoVector::external(0));
    OrthoProcess p;
    OrthoVector acc;
    p.times.push_back(Rational(0));
    p.values.push_back(acc);
    for (size_t n = 0; n < f.size(); ++n) {
      acc += f[n];
      p.times.push_back(Rational(static_cast<long>(n + 1), 9));
      p.values.push_back(acc);
    }
    CHECK(maximal_body(p) == surd_of(digit_ones(2), Surd(1)));
  }

  TEST_CASE("binomial tail against an independent oracle") {
    CHECK(bernstein_check(1).tail == Rational(2, 3));
    CHECK(bernstein_check(6).tail == Rational(64, 729));
    for (unsigned k : {1u, 6u, 7u, 13u, 50u, 144u, 200u}) {
      auto r = bernstein_check(k);
      CHECK(r.tail == binomial_oracle(k));
      CHECK(r.ok);
      CHECK(r.bound == doctest::Approx(std::exp(-double(k) / 144)));
    }
    CHECK(bernstein_check(144).tail.get_d() <= std::exp(-1.0));
    CHECK(binomial_left_tail(4, Rational(1, 2), Rational(1)) == Rational(1, 16));
  }

  TEST_CASE("example process") {
    IdSource ids;
    auto chi = OrthoVector::external(ids.fresh());
    auto c = example_process(1, chi, Rational(0), Rational(1), Rational(0), Rational(1), nullptr, ids);
    CHECK(c.fail_measure == Rational(2, 3));
    CHECK(c.eps == doctest::Approx(2.0 / 3));
    CHECK(c.process.values.back() == chi.scaled(Surd::sqrt(Rational(3 * 576))));
    for (size_t m = 1; m < c.process.values.size(); ++m)
      CHECK(norm_sq(c.process.values[m] - c.process.values[m - 1]) == Surd(Rational(3 * 576, 3)));
    auto chk = verify_cert(c);
    CHECK(chk.gram_exact);
    CHECK(chk.final_ok);
    CHECK(chk.origin_zero);
    PointSet coarse;  // {0,1} misses the grid
    CHECK_THROWS(example_process(1, chi, Rational(0), Rational(1), Rational(0), Rational(1), &coarse, ids));
  }

  TEST_CASE("merge plans") {
    auto one = plan_merge({plan_example(1, Rational(0), Rational(1))});
    CHECK(one.kind == PlanNode::Kind::Example);
    auto two = plan_merge({plan_example(1, Rational(0), Rational(1, 2)), plan_example(1, Rational(1, 2), Rational(1))});
    REQUIRE(two.shares.size() == 2);
    CHECK(two.shares[0] == Rational(1, 2));
    CHECK(two.y == plan_example(1, Rational(0), Rational(1, 2)).y * Surd::sqrt(Rational(2)));
    CHECK_THROWS(plan_merge({plan_leaf(Rational(0), Rational(2, 3)), plan_leaf(Rational(1, 3), Rational(1))}));
    CHECK_THROWS(plan_merge({}));

    auto three = plan_merge({plan_example(1, Rational(0), Rational(1, 3)), plan_example(1, Rational(1, 3), Rational(2, 3)),
                             plan_example(1, Rational(2, 3), Rational(1))});
    IdSource ids;
    auto chi = OrthoVector::external(ids.fresh());
    auto cert = realize(three, chi, Rational(0), Rational(1), nullptr, ids);
    auto chk = verify_cert(cert);
    CHECK(chk.gram_exact);
    CHECK(chk.final_ok);
    CHECK(chk.support_ok);
    CHECK(gram_check(cert.process.rescaled(Surd::sqrt(Rational(3)) * Surd(Rational(1, 72)), ProcessScale::Unit)).exact_zero);
  }

  TEST_CASE("nest plans") {
    auto leaf = plan_leaf(Rational(0), Rational(1));
    CHECK(plan_nest(0, {leaf}).kind == PlanNode::Kind::Leaf);
    std::vector<PlanNode> kids;
    for (long n = 0; n < 3; ++n) kids.push_back(plan_example(1, Rational(n, 3), Rational(n + 1, 3)));
    auto nest = plan_nest(1, kids);
    CHECK(nest.kind == PlanNode::Kind::Nest);
    CHECK(nest.y == Surd::sqrt(Rational(3)) * kids[0].y + Surd(4));
    CHECK_THROWS(plan_nest(1, {leaf}));
    IdSource ids;
    auto chi = OrthoVector::external(ids.fresh());
    auto cert = realize(nest, chi, Rational(0), Rational(1), nullptr, ids);
    CHECK(verify_cert(cert).ok());
    CHECK(nested_level(1.0, 1, plan_domain(nest)) == doctest::Approx(5.0));
  }

  TEST_CASE("divergent builds") {
    auto trivial = build_divergent(PointSet());
    CHECK(trivial.plan.kind == PlanNode::Kind::Leaf);
    CHECK(maximal_body(trivial.unit).max_value() == Surd(0));

    auto base = build_divergent(PointSet({Rational(0), Rational(1, 3), Rational(2, 3), Rational(1)}));
    CHECK(base.plan.kind == PlanNode::Kind::Example);
    CHECK(base.plan.k == 1);
    CHECK(base.check.ok());

    std::vector<Rational> g;
    for (long n = 0; n <= 9; ++n) g.emplace_back(n, 9);
    auto grid = build_divergent(PointSet(g), 0.5);
    CHECK(grid.plan.kind == PlanNode::Kind::Nest);
    CHECK(grid.check.ok());
    CHECK(gram_check(grid.unit).exact_zero);
    // outer digit plus inner digit, each worth 1/sqrt 3 at unit scale
    CHECK(maximal_body(grid.unit) == surd_of(digit_ones(2), Surd::sqrt(Rational(1, 3))));
    CHECK(grid.target_exceedance == Rational(5, 9));
    CHECK(grid.cert.eps == doctest::Approx(4.0 / 9));

    CHECK_THROWS(build_divergent(PointSet({Rational(0), Rational(1, 2), Rational(1)})));
    CHECK_THROWS(build_divergent(PointSet({Rational(0), Rational(1, 3), Rational(2, 3), Rational(1, 729), Rational(1)})));
  }

  TEST_CASE("finite divergent prefix") {
    PointSet base({Rational(0), Rational(1, 3), Rational(2, 3), Rational(1)});
    auto r = divergent_prefix({base, base}, {Rational(1), Rational(1, 2), Rational(0)});
    REQUIRE(r.placed.size() == 2);
    for (const auto& p : r.placed) CHECK(gram_check(p).exact_zero);
    CHECK(r.product.independent);
    CHECK(r.product.factor_exceedance(0, 0.3, true, false) == Rational(1, 3));
    CHECK(r.product.union_exceedance(0.3, true, false) == Rational(5, 9));
    CHECK_THROWS(divergent_prefix({}, {Rational(1)}));
    CHECK_THROWS(divergent_prefix({base}, {Rational(0), Rational(1)}));
  }
}
