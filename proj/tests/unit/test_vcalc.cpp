#include "../common/oracles.hpp"
#include "oseries/random.hpp"
#include "oseries/vcalc.hpp"

#include <doctest.h>

using namespace oseries;

TEST_SUITE("vcalc") {
  TEST_CASE("single operator examples") {
    CHECK(v_step(StepFunction::constant(3.0), 2) == StepFunction::constant(3.0));
    CHECK(v_step(StepFunction::constant(7.0), 1) == StepFunction::constant(7.0));
    auto h = StepFunction::indicator(Rational(0), Rational(1, 3), 2.0);
    CHECK(v_step(h, 0) == h);
    auto g = StepFunction::indicator(Rational(0), Rational(1, 6), 3.0);
    auto v = v_step(g, 0);
    CHECK(v.eval(Rational(1, 12)) == doctest::Approx(1 + std::sqrt(4.0 / 2)));
    CHECK(v.eval(Rational(1, 4)) == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("barred operator examples") {
    CHECK(v_bar_step(StepFunction::constant(4.0), 2) == StepFunction::constant(8.0));
    auto h = StepFunction::indicator(Rational(0), Rational(1, 2), 3.0);
    CHECK(v_bar_step(h, 2) == h);
    CHECK(v_bar_step(StepFunction::constant(9.0), 2) == StepFunction::constant(9.0));
  }

  TEST_CASE("composites and the functional") {
    auto t = v_composite(StepFunction::constant(1.0), 0, 3);
    CHECK(t.levels.size() == 4);
    for (const auto& l : t.levels) CHECK(l.f == StepFunction::constant(1.0));
    CHECK(t.value == 1.0);
    auto h = StepFunction::indicator(Rational(0), Rational(1, 2), 0.5);
    CHECK(v_apply(h, 1, 3) == h);
    CHECK(v_functional(StepFunction::constant(0.0)) == 0.0);
    CHECK(v_functional(StepFunction::constant(1.0)) == 1.0);
    CHECK(stabilization_level(StepFunction::constant(5.0)) == 3);
    CHECK(stabilization_level(StepFunction::constant(4.0)) == 2);
    CHECK(stabilization_level(StepFunction::constant(0.5)) == 0);
  }

  TEST_CASE("functional on information functions matches the dense oracle") {
    PointSet b({Rational(0), Rational(1, 9), Rational(1)});
    auto h = info_fn(b, 3).clip_max(1.0);
    double want = oracle::l2(oracle::v_apply(oracle::dense(h), 0, 2));
    CHECK(v_functional(h) == doctest::Approx(want).epsilon(1e-12));
    PointSet base({Rational(0), Rational(1, 3), Rational(2, 3), Rational(1)});
    CHECK(v_functional(info_fn(base, 3).clip_max(1.0)) == doctest::Approx(1.0));
  }

  TEST_CASE("bar dominance and monotonicity on random triadic functions") {
    Rng rng(21);
    for (int it = 0; it < 40; ++it) {
      unsigned i = static_cast<unsigned>(rng.uniform_int(1, 3));
      auto h = random_triadic_fn(rng, i);
      CHECK(is_triadic_fn(h).ok);
      for (unsigned j = 0; j <= i; ++j) {
        CHECK((v_step(h, j) - v_bar_step(h, j)).max_value() <= 1e-12);
        CHECK(v_step(h, j).clip_min(pow2(static_cast<int>(j))) == h.clip_min(pow2(static_cast<int>(j))));
        CHECK(is_triadic_fn(v_bar_step(h, j)).ok);
      }
    }
  }

  TEST_CASE("block selection examples") {
    auto e = select_blocks({}, 1);
    CHECK(e.b.empty());
    CHECK(e.ok());
    auto z = select_blocks({0, 0, 0}, 1);
    REQUIRE(z.blocks.size() == 1);
    CHECK(z.selected[0]);
    CHECK(z.b == std::vector<double>{2, 2, 2});
    CHECK(z.c == std::vector<double>{0, 0, 0});
    CHECK(z.d == std::vector<double>{0, 0, 0});
    CHECK(z.ok());
    auto p = select_blocks({0, 5}, 1);
    CHECK(p.L == 1);
    CHECK(p.t == 0);
    CHECK(p.c == std::vector<double>{2, 2});
    CHECK(p.d == std::vector<double>{0, 0});
    CHECK(p.ok());
  }

  TEST_CASE("block selection postconditions on random inputs") {
    Rng rng(31);
    for (int it = 0; it < 100; ++it) {
      unsigned i = static_cast<unsigned>(rng.uniform_int(1, 3));
      std::vector<double> a(static_cast<size_t>(rng.uniform_int(0, 60)));
      for (auto& x : a) x = std::floor(rng.uniform01() * pow2(2 * static_cast<int>(i) + 1) * 4) / 4;
      auto s = select_blocks(a, i);
      CHECK(s.ok());
      CHECK(s.sum_c_sq <= s.c_bound);
      for (size_t k = 0; k < a.size(); ++k) CHECK(s.d[k] <= (a[k] + pow2(static_cast<int>(i))) / pow2(static_cast<int>(i)) + 1e-12);
    }
  }

  TEST_CASE("run-length selection handles huge multiplicities") {
    std::vector<std::pair<double, BigInt>> runs{{0.0, BigInt("1000000000000")}, {3.0, BigInt(5)}, {100.0, BigInt(2)}};
    auto s = select_blocks_runs(runs, 2);
    CHECK(s.ok());
    CHECK(s.K == BigInt("1000000000007"));
  }

  TEST_CASE("type-j operator") {
    auto c = apply_type_j(StepFunction::constant(32.0), 5);
    CHECK(c.uh == StepFunction::constant(32.0));
    CHECK(c.ok());
    CHECK_THROWS(apply_type_j(StepFunction::constant(4.0), 2));
    Rng rng(41);
    for (int it = 0; it < 10; ++it) {
      auto h = random_type_j(rng, 5);
      REQUIRE(is_type_j(h, 5).ok);
      auto r = apply_type_j(h, 5);
      CHECK(r.ok());
      CHECK(is_type_j(r.w, 4).ok);
      CHECK(r.uh.clip_min(32.0) == h.clip_min(32.0));
    }
  }

  TEST_CASE("type descent at small levels") {
    Rng rng(43);
    for (int it = 0; it < 30; ++it) {
      unsigned j = static_cast<unsigned>(rng.uniform_int(1, 2));
      auto h = random_type_j(rng, j);
      REQUIRE(is_type_j(h, j).ok);
      CHECK(is_type_j(v_step(h, j), j - 1).ok);
    }
  }

  TEST_CASE("trace json") {
    auto j = to_json(v_functional_trace(StepFunction::constant(3.0)));
    CHECK(j["value"].get<double>() == doctest::Approx(3.0));
    CHECK(j["stabilization_level"].get<unsigned>() == 2);
  }
}
