#pragma once

#include "oseries/info.hpp"
#include "oseries/stepfn.hpp"

#include <json.hpp>

#include <vector>

namespace oseries {

// V_j h = (h ∧ 2^j) + ||(h - 2^j)^+||_j
StepFunction v_step(const StepFunction& h, unsigned j);
// Vbar_j h = (h ∧ 2^j) + 2^j 1_{h >= 2^j} + ||(h - 2^{j+1})^+||_j
StepFunction v_bar_step(const StepFunction& h, unsigned j);

struct VTraceLevel {
  unsigned j = 0;
  StepFunction f;
  double norm = 0.0;
};

struct VTrace {
  std::vector<VTraceLevel> levels;  // in application order: j_hi first
  StepFunction result;
  double value = 0.0;               // ||result||
  unsigned stabilization_level = 0; // first i with 2^i >= max h
};

// V_{lo}(V_{lo+1}(... V_{hi} h)); with bar = true the Vbar operators are used.
VTrace v_composite(const StepFunction& h, unsigned j_lo, unsigned j_hi, bool bar = false);
StepFunction v_apply(const StepFunction& h, unsigned j_lo, unsigned j_hi, bool bar = false);

// ceil(log2 max(max h, 1)).
unsigned stabilization_level(const StepFunction& h);
// V h = ||V_0 ... V_i h|| at the stabilization level.
double v_functional(const StepFunction& h);
VTrace v_functional_trace(const StepFunction& h);

nlohmann::json to_json(const VTrace& t, bool with_functions = false);

// Result of the block-selection algorithm on a sequence a_1..a_K (i >= 1).
struct BlockSelection {
  std::vector<double> b, c, d;                 // indexed like the input
  std::vector<std::vector<size_t>> blocks;     // I_s as input indices, s = 1..t
  std::vector<bool> selected;                  // s in S
  size_t L = 0, t = 0;
  BigInt nu;
  double sum_c_sq = 0.0;
  double c_bound = 0.0;                        // 3^{2^{i-1}} 2^{2i} (2^i + 1)
  bool precedes = false;                       // (b) ≺_i (a)
  bool c_ok = false, d_ok = false, decomposition_ok = false;
  bool ok() const { return precedes && c_ok && d_ok && decomposition_ok; }
};

BlockSelection select_blocks(const std::vector<double>& a, unsigned i);

// Run-length form: runs of equal values with multiplicities (sorted internally).
struct RunSegment {
  size_t run = 0;      // index into the input runs
  BigInt count;        // consecutive members of the run, in order
  double b = 0, c = 0, d = 0;
  bool in_selected_block = false;
  double block_min = 0;  // m_s of the enclosing selected block
};
struct RunSelection {
  std::vector<RunSegment> segments;  // each input run is covered in order
  BigInt L, t, nu, K;
  double sum_c_sq = 0.0;
  double c_bound = 0.0;
  bool precedes = false, c_ok = false, d_ok = false, decomposition_ok = false;
  bool ok() const { return precedes && c_ok && d_ok && decomposition_ok; }
};
RunSelection select_blocks_runs(const std::vector<std::pair<double, BigInt>>& runs, unsigned i);

struct TypeJResult {
  StepFunction uh;            // U h
  StepFunction w;             // W_j h = V_j U h
  StepFunction correction;    // f_j + g_j = h - U h
  StepFunction f_norm;        // ||f_j||_j
  StepFunction g_norm;        // ||g_j||_j
  StepFunction p, q;          // V_j h - W_j h = p + q
  bool f_ok = false;          // ||f_j||_j <= 2^{-j}
  bool g_ok = false;          // g_j <= 2^{-j} (h - 2^j)^+
  bool pq_ok = false;         // the j-triadic certificate
  bool selection_ok = false;  // every block selection satisfies its postconditions
  bool ok() const { return f_ok && g_ok && pq_ok && selection_ok; }
};

// The type-j operator U with W_j = V_j U j-triadic; requires j >= 5 and h of type j.
TypeJResult apply_type_j(const StepFunction& h, unsigned j);

} // namespace oseries
