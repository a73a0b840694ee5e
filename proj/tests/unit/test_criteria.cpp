#include "oseries/criteria.hpp"
#include "oseries/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace oseries;

namespace {
CoefficientSeq sq(std::vector<Rational> v) { return CoefficientSeq::from_squares(std::move(v)); }
CoefficientSeq thirds() { return sq({Rational(1, 3), Rational(1, 3), Rational(1, 3)}); }
} // namespace

TEST_SUITE("criteria") {
  TEST_CASE("exact logarithm bounds") {
    CHECK(floor_log2(Rational(1, 3)) == -2);
    CHECK(ceil_log2(Rational(1, 3)) == -1);
    CHECK(floor_log2(Rational(8)) == 3);
    CHECK(ceil_log2(Rational(8)) == 3);
  }

  TEST_CASE("Rademacher-Menshov weights") {
    auto seq = CoefficientSeq::from_doubles({0.6, 0.48, 0.36, 0.48, 0.2});
    auto w = rm_weyl(seq, rm_weights(seq.size()));
    for (double r : w.ratios) CHECK(r == doctest::Approx(1.0));
    CHECK(rm_weyl(seq, std::vector<double>(seq.size(), 0.0)).weighted_sum == 0.0);
    std::vector<double> a;
    for (int n = 1; n <= 50; ++n) a.push_back(1.0 / n);
    auto h = CoefficientSeq::from_doubles(a);
    auto r = rm_weyl(h, rm_weights(50));
    double direct = 0;
    for (int n = 1; n <= 50; ++n) direct += std::pow(std::log2(n), 2) / (double(n) * n);
    CHECK(r.weighted_sum == doctest::Approx(direct).epsilon(1e-12));
    CHECK(std::is_sorted(r.partial_sums.begin(), r.partial_sums.end()));
    CHECK_THROWS(rm_weyl(h, rm_weights(3)));
  }

  TEST_CASE("alpha condition") {
    CHECK(alpha_condition(sq({Rational(1)})) == 0.0);
    CHECK(alpha_condition(sq({Rational(1, 2), Rational(1, 4), Rational(1, 4)})) == doctest::Approx(0.625));
    CHECK(alpha_condition(sq({Rational(1, 2), Rational(1, 2), Rational(0)})) == doctest::Approx(0.25));
    CHECK_THROWS(alpha_condition(sq({Rational(1, 4), Rational(3, 4)})));
  }

  TEST_CASE("beta and gamma conditions") {
    auto one = CoefficientSeq::from_doubles({0.125});
    CHECK(beta_condition(one).value == doctest::Approx(0.375));
    CHECK(gamma_condition(one).value == doctest::Approx(0.125));
    auto unit = sq({Rational(1)});
    auto b = beta_condition(unit);
    CHECK(b.value == 0.0);
    CHECK(b.residual_count == 1);
    CHECK(gamma_condition(unit).value == 0.0);
    CHECK_THROWS(gamma_condition(CoefficientSeq::from_doubles({-0.5})));
    // 2^{-4} lies in block 1 (lower-closed), 2^{-2} does not
    CHECK(beta_condition(CoefficientSeq::from_doubles({0.0625})).blocks.at(0).i == 1);
    CHECK(beta_condition(CoefficientSeq::from_doubles({0.25})).residual_count == 1);
  }

  TEST_CASE("sandwich bounds") {
    auto single = CoefficientSeq::from_doubles({0.125});  // z = 3: block u_1 only
    auto s = sandwich_check(single);
    CHECK(s.a_plus == doctest::Approx(2 * s.u_norms.at(0)));
    CHECK(s.a_plus == doctest::Approx(s.b_minus));
    CHECK(s.ok());
    auto z = sandwich_check(CoefficientSeq::from_doubles({0.0}));
    CHECK(z.a_minus == 0.0);
    CHECK(z.a_plus == 0.0);
    CHECK(z.b_minus == 0.0);
    CHECK(z.b_plus == 0.0);
    Rng rng(17);
    for (int it = 0; it < 50; ++it) {
      auto seq = random_coefficients(rng, 20);
      auto r = sandwich_check(seq);
      CHECK(r.ok());
      CHECK(r.a_minus <= r.gamma + 1e-12);
      CHECK(r.gamma <= r.a_plus + 1e-12);
      CHECK(r.b_minus <= r.a_plus + 1e-12);
      CHECK(r.a_plus <= r.b_plus + 1e-12);
    }
  }

  TEST_CASE("Tandori sum") {
    std::vector<double> a(15, 0.0);
    for (int n = 4; n <= 15; ++n) a[n - 1] = 0.1;
    auto t = tandori_sum(CoefficientSeq::from_doubles(a));
    size_t nonzero = 0;
    for (const auto& b : t.blocks)
      if (b.value > 0) {
        ++nonzero;
        CHECK(b.i == 1);
      }
    CHECK(nonzero == 1);
    CHECK(tandori_sum(sq({Rational(1), Rational(0), Rational(0)})).value == 0.0);
    std::vector<double> h;
    for (int n = 1; n <= 64; ++n) h.push_back(1.0 / n);
    double direct = 0;
    for (int i = 0; i < 3; ++i) {
      double s = 0;
      for (long n = 1L << (1L << i); n < std::min(65L, 1L << (1L << (i + 1))); ++n)
        s += std::pow(1.0 / n, 2) * std::pow(std::log2(double(n)), 2);
      direct += std::sqrt(s);
    }
    CHECK(tandori_sum(CoefficientSeq::from_doubles(h)).value == doctest::Approx(direct).epsilon(1e-12));
  }

  TEST_CASE("permutation behaviour") {
    Rng rng(23);
    bool tandori_changed = false;
    for (int it = 0; it < 30; ++it) {
      auto seq = random_coefficients(rng, 25);
      auto v = seq.squares();
      std::shuffle(v.begin(), v.end(), rng.engine());
      auto p = CoefficientSeq::from_squares(v);
      CHECK(beta_condition(p).value == doctest::Approx(beta_condition(seq).value).epsilon(1e-12));
      CHECK(gamma_condition(p).value == doctest::Approx(gamma_condition(seq).value).epsilon(1e-12));
      if (std::fabs(tandori_sum(p).value - tandori_sum(seq).value) > 1e-9) tandori_changed = true;
    }
    CHECK(tandori_changed);
  }

  TEST_CASE("indicator-variable conditions") {
    auto r = theorem17_conditions(thirds());
    CHECK(r.alpha1 == doctest::Approx(std::log2(3.0)));
    CHECK(r.gamma1 == doctest::Approx(0.0));
    CHECK(r.gamma1_with_slice0 == doctest::Approx(std::log2(3.0)));
    auto u = theorem17_conditions(sq({Rational(1)}));
    CHECK(u.alpha1 == 0.0);
    CHECK(u.beta1 == 0.0);
    CHECK(u.gamma1 == 0.0);
    auto c = theorem17_conditions(thirds(), IndicatorVariable::InfoClosed);
    CHECK(c.indicator == IndicatorVariable::InfoClosed);
  }

  TEST_CASE("orthogonal measure criterion") {
    CHECK(measure_criterion(std::vector<Rational>{Rational(1, 3), Rational(1, 3), Rational(1, 3)}) == doctest::Approx(1.0));
    CHECK(measure_criterion(std::vector<Rational>{Rational(1)}) == 0.0);
    CHECK(measure_criterion(std::vector<Rational>(9, Rational(1, 9))) == doctest::Approx(2.0));
    std::vector<Rational> p{Rational(1, 2), Rational(1, 81), Rational(79, 162)};
    std::vector<Rational> q{p[2], p[0], p[1]};
    CHECK(measure_criterion(p) == doctest::Approx(measure_criterion(q)));
    CHECK_THROWS(measure_criterion(std::vector<Rational>{Rational(1, 2)}));
  }
}
