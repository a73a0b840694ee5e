#include "oseries/info.hpp"
#include "oseries/random.hpp"
#include "oseries/sets.hpp"

#include <doctest.h>

#include <cmath>

using namespace oseries;

namespace {
PointSet pts(std::vector<Rational> v) { return PointSet(std::move(v)); }
} // namespace

TEST_SUITE("info") {
  TEST_CASE("coefficient parsing") {
    auto s = parse_coefficients("[\"3/5\", \"-4/5\"]");
    CHECK(s.size() == 2);
    CHECK(s.has_negative());
    CHECK(s.is_normalized());
    auto q = parse_coefficients("{\"squares\": [\"1/2\", \"1/4\", \"1/4\"]}");
    CHECK(q.squares()[0] == Rational(1, 2));
    auto csv = parse_coefficients("0.5\n0.5\n");
    CHECK(csv.total() == Rational(1, 2));
    CHECK_THROWS_AS(parse_coefficients(""), std::invalid_argument);
    try {
      parse_coefficients("0.5\nabc\n");
      FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }

  TEST_CASE("tail sets") {
    CHECK(tail_set(CoefficientSeq::from_squares({Rational(1, 3), Rational(1, 3), Rational(1, 3)})) ==
          pts({Rational(0), Rational(1, 3), Rational(2, 3), Rational(1)}));
    CHECK(tail_set(CoefficientSeq::from_squares({Rational(1)})) == pts({Rational(0), Rational(1)}));
    CHECK(tail_set(CoefficientSeq::from_squares({Rational(1, 2), Rational(1, 4), Rational(1, 4)})) ==
          pts({Rational(0), Rational(1, 4), Rational(1, 2), Rational(1)}));
    CHECK(tail_set(CoefficientSeq::from_squares({Rational(1, 2), Rational(0), Rational(1, 2)})).size() == 3);
    CHECK_THROWS(tail_set(CoefficientSeq()));
    CHECK_THROWS(tail_set(CoefficientSeq::from_squares({Rational(1, 2)})));
  }

  TEST_CASE("information function") {
    auto base = pts({Rational(0), Rational(1, 3), Rational(2, 3), Rational(1)});
    CHECK(info_fn(base, 3) == StepFunction::constant(1.0));
    CHECK(info_fn(PointSet(), 3) == StepFunction::constant(0.0));
    auto h = info_fn(pts({Rational(0), Rational(1, 9), Rational(1)}), 3);
    CHECK(h.eval(Rational(1, 9)) == doctest::Approx(2.0));
    CHECK(h.eval(Rational(1, 2)) == doctest::Approx(-std::log(8.0 / 9) / std::log(3.0)));
    CHECK(h.eval(Rational(1, 2)) == doctest::Approx(0.1072).epsilon(1e-3));
    CHECK(info_fn(base, 2).eval(Rational(1, 2)) == doctest::Approx(std::log2(3.0)));
    auto e = info_fn_exact(pts({Rational(0), Rational(1, 9), Rational(2, 9), Rational(1, 3), Rational(2, 3), Rational(1)}));
    REQUIRE(e.has_value());
    CHECK(e->eval(Rational(1, 9)) == Rational(2));
    CHECK_FALSE(info_fn_exact(pts({Rational(0), Rational(1, 2), Rational(1)})).has_value());
  }

  TEST_CASE("closed-set information function") {
    auto c = info_fn_closed(ClosedSet::cantor(3), 10.0, 3);
    CHECK(c.eval(Rational(1, 2)) == 1.0);
    CHECK(c.eval(Rational(2, 9) - Rational(1, 100)) == 2.0);
    CHECK(c.eval(Rational(8, 27) - Rational(1, 1000)) == 3.0);
    CHECK(c.eval(Rational(1, 100)) == 10.0);
    auto levels = cantor_level_measures(3);
    CHECK(levels[0] == Rational(1, 3));
    CHECK(levels[1] == Rational(2, 9));
    CHECK(levels[2] == Rational(4, 27));
    CHECK(cantor_contains(Rational(1, 4)));
    CHECK_FALSE(cantor_contains(Rational(1, 2)));

    auto b = pts({Rational(0), Rational(1, 9), Rational(1, 3), Rational(1)});
    CHECK(info_fn_closed(ClosedSet::from_finite(b), 100.0) == info_fn(b, 3));
    CHECK(info_fn_closed(ClosedSet::from_finite(PointSet()), 100.0) == StepFunction::constant(0.0));
  }

  TEST_CASE("dyadic floors") {
    CHECK(dyadic_floor(5.0) == 4.0);
    CHECK(dyadic_halffloor(5.0) == 2.0);
    CHECK(dyadic_floor(8.0) == 8.0);
    CHECK(dyadic_halffloor(8.0) == 4.0);
    CHECK(dyadic_floor(1.0) == 1.0);
    CHECK(dyadic_halffloor(1.0) == 0.5);
    CHECK_THROWS(dyadic_floor(StepFunction::constant(0.5)));
    CHECK(dyadic_floor(StepFunction::constant(0.5), true) == StepFunction::constant(1.0));
    Rng rng(11);
    for (int it = 0; it < 30; ++it) {
      auto f = random_grid_step(rng, 729, 8, 30).map([](double x) { return x + 1; });
      auto u = dyadic_floor(f);
      CHECK((u - f).max_value() <= 0);
      CHECK((f - u.scaled(2)).max_value() < 0);
      CHECK(dyadic_halffloor(f) == u.scaled(0.5));
    }
  }

  TEST_CASE("triadic functions") {
    CHECK(is_triadic_fn(StepFunction::constant(1.0)).ok);
    auto h = StepFunction::indicator(Rational(0), Rational(1, 6), 2.0).map([](double x) { return x + 1; });
    auto w = is_triadic_fn(h);
    CHECK_FALSE(w.ok);
    CHECK(w.level == 1);
    CHECK(w.index == 1);
    Rng rng(5);
    for (int it = 0; it < 30; ++it) {
      auto b = random_triadic_set(rng);
      CHECK(is_triadic_fn(info_fn(b, 3).clip_max(1.0)).ok);
    }
  }

  TEST_CASE("type-j functions") {
    auto c = is_type_j(StepFunction::constant(4.0), 2);
    CHECK(c.ok);
    CHECK(c.representation.empty());
    CHECK_FALSE(is_type_j(StepFunction::constant(3.0), 2).ok);
    Rng rng(9);
    for (int it = 0; it < 50; ++it) {
      auto b = random_triadic_set(rng);
      auto h = info_fn(b, 3).clip_max(1.0);
      unsigned i = static_cast<unsigned>(std::ceil(h.max_value())) - 1;
      if (i == 0) i = 1;
      CHECK(is_type_j(dyadic_floor(h), i).ok);
    }
  }

  TEST_CASE("exact information values on power-of-three gaps") {
    Rng rng(13);
    for (int it = 0; it < 20; ++it) {
      auto b = random_triadic_set(rng);
      auto h = info_fn(b, 3);
      const auto& p = b.points();
      for (size_t k = 1; k < p.size(); ++k) {
        double len = Rational(p[k] - p[k - 1]).get_d();
        CHECK(std::exp(-h.eval(p[k]) * std::log(3.0)) / len == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}
