#include "oseries/random.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace oseries {

long Rng::uniform_int(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }

double Rng::uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_); }

bool Rng::bernoulli(double p) { return uniform01() < p; }

BigInt Rng::below(const BigInt& n) {
  BigInt acc = 0;
  const size_t words = mpz_sizeinbase(n.get_mpz_t(), 2) / 64 + 2;
  for (size_t w = 0; w < words; ++w) {
    acc <<= 64;
    std::uint64_t x = gen_();
    acc += BigInt(static_cast<unsigned long>(x >> 32)) * BigInt(4294967296UL) + BigInt(static_cast<unsigned long>(x & 0xffffffffUL));
  }
  return BigInt(acc % n);
}

namespace {

// Pieces (lo, hi, value) with disjoint interiors; uncovered parts get `fill`.
class Painter {
public:
  void paint(const Rational& lo, const Rational& hi, double v) { pieces_.emplace_back(lo, hi, v); }
  StepFunction build(double fill) {
    std::sort(pieces_.begin(), pieces_.end(), [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
    std::vector<Rational> bp;
    std::vector<double> vs;
    Rational at(0);
    for (const auto& [lo, hi, v] : pieces_) {
      if (lo > at) {
        bp.push_back(lo);
        vs.push_back(fill);
      }
      bp.push_back(hi);
      vs.push_back(v);
      at = hi;
    }
    if (at < 1) {
      bp.emplace_back(1);
      vs.push_back(fill);
    }
    return StepFunction(std::move(bp), std::move(vs));
  }

private:
  std::vector<std::tuple<Rational, Rational, double>> pieces_;
};

double eighths(Rng& rng, double lo, double hi) {
  const long n = static_cast<long>((hi - lo) * 8);
  return lo + static_cast<double>(rng.uniform_int(0, n - 1)) / 8.0;
}

// Atom (lo, lo+u] of level l lies in (h >= 2^l).
void triadic_fill(Rng& rng, Painter& p, const Rational& lo, unsigned l, unsigned i) {
  const Rational u = grid_unit(l);
  const double base = pow2(static_cast<int>(l)), top = pow2(static_cast<int>(l) + 1);
  if (l == i) {
    if (rng.bernoulli(0.5)) {
      p.paint(lo, lo + u, eighths(rng, base, top));
    } else {
      const Rational cut = lo + u * Rational(rng.uniform_int(1, 6), 7);
      p.paint(lo, cut, eighths(rng, base, top));
      p.paint(cut, lo + u, eighths(rng, base, top));
    }
    return;
  }
  const Rational su = grid_unit(l + 1);
  const long subs = pow3(1UL << l).get_si();
  static const double deeper[] = {0.4, 0.3, 0.05, 0.02};
  for (long s = 0; s < subs; ++s) {
    const Rational slo = lo + su * s;
    if (rng.bernoulli(deeper[std::min<unsigned>(l, 3)])) triadic_fill(rng, p, slo, l + 1, i);
    else p.paint(slo, slo + su, eighths(rng, base, top));
  }
}

} // namespace

StepFunction random_triadic_fn(Rng& rng, unsigned i) {
  Painter p;
  for (long n = 0; n < 3; ++n) triadic_fill(rng, p, Rational(n, 3), 0, i);
  return p.build(1.0);
}

StepFunction random_type_j(Rng& rng, unsigned j) {
  Painter p;
  const double top = pow2(static_cast<int>(j) + 1);
  // Nested atoms: one chain of 1..2 atoms per level, values 2^l off the next level.
  std::vector<std::pair<Rational, unsigned>> frontier;
  for (long n = 0; n < 3; ++n) frontier.emplace_back(Rational(n, 3), 0);
  std::vector<std::pair<Rational, unsigned>> deep;
  while (!frontier.empty()) {
    auto [lo, l] = frontier.back();
    frontier.pop_back();
    const Rational u = grid_unit(l);
    const double val = pow2(static_cast<int>(l));
    if (l == j) {
      deep.emplace_back(lo, l);
      continue;
    }
    if (!rng.bernoulli(l == 0 ? 0.7 : 0.8)) {
      p.paint(lo, lo + u, val);
      continue;
    }
    const Rational su = grid_unit(l + 1);
    const BigInt subs = pow3(1UL << l);
    std::vector<BigInt> picks;
    const long want = rng.uniform_int(1, 2);
    for (long k = 0; k < want; ++k) picks.push_back(rng.below(subs));
    std::sort(picks.begin(), picks.end());
    picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
    BigInt at = 0;
    for (const auto& s : picks) {
      if (s > at) p.paint(lo + su * Rational(at), lo + su * Rational(s), val);
      frontier.emplace_back(lo + su * Rational(s), l + 1);
      at = s + 1;
    }
    if (at < subs) p.paint(lo + su * Rational(at), lo + u, val);
  }
  for (const auto& [lo, l] : deep) {
    const Rational su = grid_unit(j + 1);
    const BigInt subs = pow3(1UL << j);
    const long runs = rng.uniform_int(1, 3);
    std::vector<BigInt> cuts;
    for (long k = 0; k < 2 * runs; ++k) cuts.push_back(rng.below(subs + 1));
    std::sort(cuts.begin(), cuts.end());
    BigInt at = 0;
    const double base = pow2(static_cast<int>(j));
    for (size_t k = 0; k + 1 < cuts.size(); k += 2) {
      if (cuts[k] == cuts[k + 1]) continue;
      if (cuts[k] > at) p.paint(lo + su * Rational(at), lo + su * Rational(cuts[k]), base);
      double a;
      switch (rng.uniform_int(0, 2)) {
        case 0: a = 0.0; break;
        case 1: a = static_cast<double>(rng.uniform_int(1, 64)); break;
        default: a = static_cast<double>(rng.uniform_int(1000, 100000)); break;
      }
      p.paint(lo + su * Rational(cuts[k]), lo + su * Rational(cuts[k + 1]), top + a);
      at = cuts[k + 1];
    }
    if (at < subs) p.paint(lo + su * Rational(at), lo + grid_unit(j), base);
  }
  return p.build(1.0);
}

StepFunction random_grid_step(Rng& rng, long cells, size_t pieces, double vmax) {
  std::vector<long> cuts;
  for (size_t k = 0; k + 1 < pieces; ++k) cuts.push_back(rng.uniform_int(1, cells - 1));
  cuts.push_back(cells);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Rational> bp;
  std::vector<double> vs;
  for (long c : cuts) {
    bp.emplace_back(c, cells);
    vs.push_back(static_cast<double>(rng.uniform_int(0, static_cast<long>(vmax * 8))) / 8.0);
  }
  return StepFunction(std::move(bp), std::move(vs));
}

PointSet random_triadic_set(Rng& rng, double p1, double p2) {
  std::vector<Rational> pts = {Rational(0), Rational(1, 3), Rational(2, 3), Rational(1)};
  for (long n = 0; n < 9; ++n)
    if (rng.bernoulli(p1)) {
      pts.emplace_back(n, 9);
      pts.emplace_back(n + 1, 9);
    }
  for (long n = 0; n < 81; ++n)
    if (rng.bernoulli(p2)) {
      pts.emplace_back(n, 81);
      pts.emplace_back(n + 1, 81);
      pts.emplace_back(n / 9, 9);
      pts.emplace_back(n / 9 + 1, 9);
    }
  return PointSet(std::move(pts));
}

PointSet random_point_set(Rng& rng, size_t n, long max_den) {
  std::vector<Rational> pts = {Rational(0), Rational(1)};
  for (size_t k = 0; k < n; ++k) {
    long q = rng.uniform_int(2, max_den);
    pts.emplace_back(rng.uniform_int(1, q - 1), q);
  }
  return PointSet(std::move(pts));
}

CoefficientSeq random_coefficients(Rng& rng, size_t n) {
  std::vector<Rational> w;
  for (size_t k = 0; k < n; ++k) {
    const long scale = rng.uniform_int(0, 60);
    BigInt num = BigInt(rng.uniform_int(1, 1000));
    w.emplace_back(num, BigInt(1) << static_cast<unsigned long>(scale));
    w.back().canonicalize();
  }
  Rational total(0);
  for (const auto& x : w) total += x;
  for (auto& x : w) x /= total;
  return CoefficientSeq::from_squares(w);
}

} // namespace oseries
