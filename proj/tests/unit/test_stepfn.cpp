#include "oseries/random.hpp"
#include "oseries/stepfn.hpp"

#include <doctest.h>

using namespace oseries;

namespace {
StepFunction two_piece() { return StepFunction({Rational(1, 3), Rational(1)}, {1.0, 2.0}); }
} // namespace

TEST_SUITE("stepfn") {
  TEST_CASE("eval uses left-open right-closed pieces") {
    CHECK(StepFunction::constant(1.0).eval(Rational(1, 2)) == 1.0);
    CHECK(two_piece().eval(Rational(1, 3)) == 1.0);
    CHECK(two_piece().eval(Rational(34, 100)) == 2.0);
    CHECK_THROWS_AS(two_piece().eval(Rational(0)), std::out_of_range);
    CHECK_THROWS_AS(two_piece().eval(Rational(3, 2)), std::out_of_range);
  }

  TEST_CASE("construction validates and canonicalizes") {
    CHECK_THROWS(StepFunction({Rational(1, 2)}, {1.0}));
    CHECK_THROWS(StepFunction({Rational(1, 2), Rational(1, 3), Rational(1)}, {1.0, 2.0, 3.0}));
    StepFunction f({Rational(1, 3), Rational(2, 3), Rational(1)}, {1.0, 1.0, 2.0});
    CHECK(f.size() == 2);
    CHECK(f.right(0) == Rational(2, 3));
    StepFunction g({Rational(2, 6), Rational(1)}, {1.0, 2.0});
    CHECK(g == two_piece());
  }

  TEST_CASE("clipping and slices") {
    auto f = StepFunction::constant(5.0);
    CHECK(f.clip_min(2.0) == StepFunction::constant(2.0));
    CHECK(slice(f, 1) == StepFunction::constant(2.0));
    CHECK(slice(f, 0) == StepFunction::constant(2.0));
    CHECK(slice_up(f, 1) == StepFunction::constant(3.0));
    CHECK(slice_down(f, 1) + slice_mid(f, 1) + slice_up(f, 2) == f);
    CHECK(f.pos_part(4.0) == StepFunction::constant(1.0));
  }

  TEST_CASE("pointwise operations merge breakpoints") {
    auto f = two_piece();
    auto g = StepFunction::indicator(Rational(1, 2), Rational(1), 3.0);
    auto s = f + g;
    CHECK(s.size() == 3);
    CHECK(s.eval(Rational(1, 4)) == 1.0);
    CHECK(s.eval(Rational(2, 5)) == 2.0);
    CHECK(s.eval(Rational(3, 4)) == 5.0);
    CHECK(f.min_with(g).eval(Rational(3, 4)) == 2.0);
    CHECK(f.max_with(g).eval(Rational(3, 4)) == 3.0);
    CHECK((f * g).eval(Rational(3, 4)) == 6.0);
    CHECK((f - f) == StepFunction::constant(0.0));
  }

  TEST_CASE("l2 norm") {
    CHECK(StepFunction::constant(-3.0).l2_norm() == doctest::Approx(3.0));
    CHECK(two_piece().l2_norm() == doctest::Approx(std::sqrt(3.0)));
    CHECK(StepFunction::indicator(Rational(0), Rational(1, 9)).l2_norm() == doctest::Approx(1.0 / 3));
  }

  TEST_CASE("exact step functions integrate exactly") {
    ExactStepFunction f({Rational(1, 3), Rational(1)}, {Rational(1), Rational(2)});
    CHECK(f.norm_sq() == Rational(3));
    CHECK(f.integral() == Rational(5, 3));
    CHECK(f.measure_where([](const Rational& v) { return v >= 2; }) == Rational(2, 3));
  }

  TEST_CASE("conditional norm examples") {
    CHECK(cond_norm(two_piece(), 0) == two_piece());
    auto f = StepFunction::indicator(Rational(0), Rational(1, 6));
    auto c = cond_norm(f, 0);
    CHECK(c.eval(Rational(1, 3)) == doctest::Approx(std::sqrt(0.5)));
    CHECK(c.eval(Rational(1, 2)) == 0.0);
    CHECK(c.breakpoints().front() == Rational(1, 3));
    CHECK_THROWS_AS(cond_norm(StepFunction::constant(-1.0), 0), std::invalid_argument);
  }

  TEST_CASE("conditional norm at a deep level touches only atoms meeting breakpoints") {
    // level 5 has 3^32 atoms
    auto f = StepFunction::indicator(Rational(1, 5), Rational(2, 7), 2.0);
    auto c = cond_norm(f, 5);
    CHECK(c.size() <= 5);
    CHECK(c.l2_norm() == doctest::Approx(f.l2_norm()).epsilon(1e-12));
  }

  TEST_CASE("conditional norm properties on random functions") {
    Rng rng(7);
    for (int it = 0; it < 50; ++it) {
      auto f = random_grid_step(rng, 729, 10, 5);
      auto g = f + random_grid_step(rng, 729, 10, 5);
      for (unsigned i = 0; i <= 2; ++i) {
        auto cf = cond_norm(f, i), cg = cond_norm(g, i);
        CHECK((cf - cg).max_value() <= 1e-12);
        CHECK(cf.l2_norm() == doctest::Approx(f.l2_norm()).epsilon(1e-12));
        const Rational u = grid_unit(i);
        for (const auto& b : cf.breakpoints()) CHECK(is_integer(b / u));
        auto h = random_grid_step(rng, 729, 10, 5);
        CHECK((cond_norm(f + h, i) - cond_norm(f, i) - cond_norm(h, i)).max_value() <= 1e-12);
      }
    }
  }

  TEST_CASE("triadic atoms") {
    auto a = atom_containing(Rational(1, 9), 1);
    CHECK(a.index == 0);
    CHECK(a.right() == Rational(1, 9));
    CHECK(atom_containing(Rational(1, 8), 1).index == 1);
    CHECK(is_grid_point(Rational(2, 81), 2));
    CHECK_FALSE(is_grid_point(Rational(2, 81), 1));
    CHECK(a.count() == 9);
  }

  TEST_CASE("json round trip") {
    Rng rng(3);
    for (int it = 0; it < 20; ++it) {
      auto f = random_grid_step(rng, 729, 8, 4);
      CHECK(step_function_from_json(to_json(f)) == f);
    }
    ExactStepFunction e({Rational(1, 3), Rational(1)}, {Rational(1, 7), Rational(2)});
    CHECK(exact_step_function_from_json(to_json(e)) == e);
  }
}
