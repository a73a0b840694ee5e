#pragma once

#include "oseries/info.hpp"
#include "oseries/ortho.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace oseries {

// Residue of m in {-1, 0, 1}.
int hat(long m);
// x_l(t): l-th ternary digit, constant on pieces of length 3^{-l}.
ExactStepFunction digit_function(unsigned l);
// Σ_{l<=k} 1_{(x_l = 1)}
ExactStepFunction digit_ones(unsigned k);
// Base-3 digits of n, most significant first, padded to k digits.
std::vector<int> ternary_digits(long n, unsigned k);

// Deterministic source of fresh external basis ids.
class IdSource {
public:
  explicit IdSource(long first = 1) : next_(first) {}
  long fresh() { return next_++; }
  long peek() const { return next_; }

private:
  long next_;
};

constexpr unsigned kMaxPhiDepth = 7;

// φ_0..φ_{3^k-1} with ||χ|| = 1 and χ without body.
std::vector<OrthoVector> phi_family(unsigned k, const OrthoVector& chi);
// Same family with bodies φ_n((t-a)/(b-a))/√(b-a) on (a,b]; χ's body must vanish there.
std::vector<OrthoVector> phi_family_window(unsigned k, const OrthoVector& chi, const Rational& a, const Rational& b);

struct PhiFamilyReport {
  unsigned k = 0;
  bool orthogonal = false;     // Gram = (3/3^k) I
  bool mean_zero = false;      // <φ_n, 1_[0,1)> = 0 and Σ body φ_n = 0
  bool ext_part = false;       // off-[0,1) part = (√3/3^k) χ, Σ φ_n = √3 χ
  bool max_partial = false;    // max_n (φ_0+...+φ_n) = Σ_l 1_(x_l=1)
  bool prefix_identity = false;  // (φ_0+...+φ_{n-1}) = Σ_l 1_(x_l=1) on the n-th cell
  bool vanishing = false;      // φ_n = 0 on the n-th cell
  bool proof_products = false; // ||hat(x_1-n)||^2 = 2/3, cross -1/3, level-l norms 2/3^l
  bool ok() const {
    return orthogonal && mean_zero && ext_part && max_partial && prefix_identity && vanishing && proof_products;
  }
};
PhiFamilyReport phi_family_check(unsigned k);
nlohmann::json to_json(const PhiFamilyReport& r);

struct BernsteinReport {
  unsigned k = 0;
  Rational tail;   // P(Bin(k,1/3) < k/6)
  double bound = 0.0;  // e^{-k/144}
  bool ok = false;
};
BernsteinReport bernstein_check(unsigned k);
Rational binomial_left_tail(unsigned k, const Rational& p, const Rational& threshold);  // P(Bin(k,p) < threshold)

// Nominal complexity levels of the merged and nested forms.
double merged_level(const StepFunction& h, const SimpleSet& d);  // ||h 1_D||
double nested_level(double a, unsigned k, const SimpleSet& d);   // ||(a + 4k) 1_D||

struct CertSummary {
  std::string kind;
  unsigned k = 0;
  Rational lo, hi;
  double y = 0.0;
  double eps = 0.0;
};

// Witness of (ε, y)-complexity of D for one challenge (window [a,b), χ).
struct ComplexityCert {
  std::string kind;    // leaf, example, nest, merge
  unsigned k = 0;
  SimpleSet domain;
  Rational a, b;       // window
  OrthoVector chi;
  Surd y;              // nominal level
  OrthoProcess process;  // simple scale on domain
  Rational fail_measure;  // λ([a,b) \ (max X >= y/√(b-a)))
  double eps = 0.0;       // fail_measure / (b-a), 0 for an empty window
  double eps_bound = 0.0;  // max child ε + binomial tail (nest), max child ε (merge)
  std::vector<CertSummary> children;
};
nlohmann::json to_json(const ComplexityCert& c, bool with_process = false);

struct CertCheck {
  double gram_deviation = 0.0;
  bool gram_exact = false;
  bool origin_zero = false;
  bool final_ok = false;    // X(max D) = 24√(3λ(D)) χ
  bool support_ok = false;  // bodies vanish off (a,b] ∪ supp body χ
  Rational fail_measure;
  double eps = 0.0;
  bool eps_within_bound = false;
  bool ok() const { return gram_exact && origin_zero && final_ok && support_ok && eps_within_bound; }
};
CertCheck verify_cert(const ComplexityCert& c);
nlohmann::json to_json(const CertCheck& c);

// Example on D = [lo,hi] from the grid lo + m(hi-lo)3^{-k}; extra points of B inside D are bridged.
ComplexityCert example_process(unsigned k, const OrthoVector& chi, const Rational& a, const Rational& b,
                               const Rational& lo, const Rational& hi, const PointSet* b_set, IdSource& ids);
ComplexityCert leaf_process(const OrthoVector& chi, const Rational& a, const Rational& b, const Rational& lo,
                            const Rational& hi, const PointSet* b_set, IdSource& ids);

// Structure of the recursion: leaves/examples on intervals, nests of 3^k equal intervals, merges.
struct PlanNode {
  enum class Kind { Leaf, Example, Nest, Merge };
  Kind kind = Kind::Leaf;
  unsigned k = 0;
  Rational lo, hi;
  std::vector<PlanNode> children;
  std::vector<Rational> shares;  // merge window fractions
  Surd y;
};
std::string kind_name(PlanNode::Kind k);
nlohmann::json to_json(const PlanNode& p);
PlanNode plan_leaf(const Rational& lo, const Rational& hi);
PlanNode plan_example(unsigned k, const Rational& lo, const Rational& hi);
PlanNode plan_nest(unsigned k, std::vector<PlanNode> children);
PlanNode plan_merge(std::vector<PlanNode> children);
SimpleSet plan_domain(const PlanNode& p);

ComplexityCert realize(const PlanNode& plan, const OrthoVector& chi, const Rational& a, const Rational& b,
                       const PointSet* b_set, IdSource& ids);

constexpr unsigned kMaxBuildLevel = 2;

struct DivergentResult {
  PlanNode plan;
  ComplexityCert cert;      // challenge [0,1), fresh χ
  OrthoProcess unit;        // cert.process / (24√3), ||X(t)-X(s)||^2 = t-s
  CertCheck check;
  std::optional<double> target;
  Rational target_exceedance;  // λ(max_t X(t) > target) for the unit process
  long next_id = 1;            // first external id not used by this build
};
// B finite, triadic, contained in the level-2 grid.
DivergentResult build_divergent(const PointSet& b, std::optional<double> target = std::nullopt,
                                long first_id = 1);
nlohmann::json to_json(const DivergentResult& r, bool with_process = false);

struct PrefixResult {
  std::vector<DivergentResult> blocks;
  ProductProcess product;
  std::vector<OrthoProcess> placed;  // unit processes on (α_{s+1}, α_s]
};
// Block s carries build_divergent(sets[s]) compressed into (α_{s+1}, α_s].
PrefixResult divergent_prefix(const std::vector<PointSet>& sets, const std::vector<Rational>& alphas);

} // namespace oseries
