#pragma once

#include "oseries/info.hpp"
#include "oseries/stepfn.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace oseries {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  long uniform_int(long lo, long hi);  // inclusive
  double uniform01();
  bool bernoulli(double p);
  BigInt below(const BigInt& n);       // uniform on [0, n)
  std::mt19937_64& engine() { return gen_; }

private:
  std::mt19937_64 gen_;
};

// Triadic h with 1 <= h < 2^{i+1}; the sets (h >= 2^l) use atoms of level l <= i.
StepFunction random_triadic_fn(Rng& rng, unsigned i);
// Type-j function (constant on level-(j+1) atoms, small values powers of 2).
StepFunction random_type_j(Rng& rng, unsigned j);
// Step function with breakpoints on the grid k/cells and values in [0, vmax].
StepFunction random_grid_step(Rng& rng, long cells, size_t pieces, double vmax);
// Triadic set inside the level-2 grid (base points always present).
PointSet random_triadic_set(Rng& rng, double p1 = 0.4, double p2 = 0.15);
// {0,1} plus n random rationals with denominators up to max_den.
PointSet random_point_set(Rng& rng, size_t n, long max_den);
// Normalized coefficients whose squares spread over many dyadic scales.
CoefficientSeq random_coefficients(Rng& rng, size_t n);

} // namespace oseries
