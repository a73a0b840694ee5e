#include "oseries/info.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oseries {

CoefficientSeq CoefficientSeq::from_values(const std::vector<Rational>& a) {
  CoefficientSeq s;
  for (const auto& x : a) {
    if (x < 0) s.negative_ = true;
    s.squares_.push_back(x * x);
    s.moduli_.push_back(std::fabs(x.get_d()));
  }
  return s;
}

CoefficientSeq CoefficientSeq::from_doubles(const std::vector<double>& a) {
  CoefficientSeq s;
  for (double x : a) {
    Rational q = from_double(x);
    if (x < 0) s.negative_ = true;
    s.squares_.push_back(q * q);
    s.moduli_.push_back(std::fabs(x));
  }
  return s;
}

CoefficientSeq CoefficientSeq::from_squares(const std::vector<Rational>& squares) {
  CoefficientSeq s;
  for (const auto& q : squares) {
    if (q < 0) throw std::invalid_argument("negative square in coefficient input");
    s.squares_.push_back(q);
    s.moduli_.push_back(std::sqrt(q.get_d()));
  }
  return s;
}

Rational CoefficientSeq::total() const {
  Rational t(0);
  for (const auto& q : squares_) t += q;
  return t;
}

CoefficientSeq CoefficientSeq::normalized() const {
  Rational t = total();
  if (t == 0) throw std::invalid_argument("cannot normalize a zero sequence");
  CoefficientSeq s;
  double scale = 1.0 / std::sqrt(t.get_d());
  s.negative_ = negative_;
  for (size_t n = 0; n < size(); ++n) {
    s.squares_.push_back(squares_[n] / t);
    s.moduli_.push_back(moduli_[n] * scale);
  }
  return s;
}

bool CoefficientSeq::is_decreasing() const {
  for (size_t n = 1; n < size(); ++n)
    if (squares_[n] > squares_[n - 1]) return false;
  return true;
}

namespace {

Rational json_scalar_to_rational(const nlohmann::json& x) {
  if (x.is_string()) return parse_rational(x.get<std::string>());
  if (x.is_number()) return parse_rational(x.dump());
  throw std::invalid_argument("expected a number or a rational string");
}

} // namespace

CoefficientSeq parse_coefficients(const std::string& text) {
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw std::invalid_argument("empty coefficient input");
  if (text[first] == '[' || text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument(std::string("JSON parse error: ") + e.what());
    }
    bool squares = false;
    if (j.is_object()) {
      if (!j.contains("squares")) throw std::invalid_argument("JSON object input needs a 'squares' list");
      j = j.at("squares");
      squares = true;
    }
    if (!j.is_array() || j.empty()) throw std::invalid_argument("empty coefficient list");
    std::vector<Rational> vals;
    for (size_t k = 0; k < j.size(); ++k) {
      try {
        vals.push_back(json_scalar_to_rational(j[k]));
      } catch (const std::exception& e) {
        throw std::invalid_argument("entry " + std::to_string(k + 1) + ": " + e.what());
      }
    }
    return squares ? CoefficientSeq::from_squares(vals) : CoefficientSeq::from_values(vals);
  }
  std::istringstream in(text);
  std::string line;
  std::vector<Rational> vals;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto pos = line.find('#');
    if (pos != std::string::npos) line.erase(pos);
    if (!line.empty() && line.back() == ',') line.pop_back();
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      vals.push_back(parse_rational(line));
    } catch (const std::exception& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (vals.empty()) throw std::invalid_argument("empty coefficient input");
  return CoefficientSeq::from_values(vals);
}

PointSet::PointSet(std::vector<Rational> pts, bool closed) : pts_(std::move(pts)), closed_(closed) {
  for (auto& p : pts_) p.canonicalize();
  std::sort(pts_.begin(), pts_.end());
  pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
  if (pts_.empty() || pts_.front() != 0 || pts_.back() != 1)
    throw std::invalid_argument("point set must contain 0 and 1 and lie in [0,1]");
}

PointSet PointSet::with_endpoints(std::vector<Rational> pts) {
  pts.emplace_back(0);
  pts.emplace_back(1);
  return PointSet(std::move(pts));
}

bool PointSet::contains(const Rational& t) const { return std::binary_search(pts_.begin(), pts_.end(), t); }

PointSet PointSet::intersect(const Rational& a, const Rational& b) const {
  std::vector<Rational> out;
  for (const auto& p : pts_)
    if (a <= p && p <= b) out.push_back(p);
  return with_endpoints(std::move(out));
}

Rational PointSet::min_gap() const {
  Rational g(1);
  for (size_t k = 1; k < pts_.size(); ++k) g = std::min<Rational>(g, pts_[k] - pts_[k - 1]);
  return g;
}

nlohmann::json to_json(const PointSet& b) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& p : b.points()) j.push_back(to_string(p));
  return j;
}

PointSet point_set_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("point set JSON must be a list");
  std::vector<Rational> pts;
  for (const auto& x : j) pts.push_back(json_scalar_to_rational(x));
  return PointSet(std::move(pts));
}

PointSet tail_set(const CoefficientSeq& seq) {
  if (seq.empty()) throw std::invalid_argument("tail_set: empty sequence");
  if (!seq.is_normalized()) throw std::invalid_argument("tail_set: sequence must satisfy sum a_n^2 = 1");
  std::vector<Rational> pts{Rational(0)};
  Rational tail(0);
  for (size_t n = seq.size(); n-- > 0;) {
    tail += seq.squares()[n];
    pts.push_back(tail);
  }
  return PointSet(std::move(pts));
}

namespace {

long inverse_power_of(const Rational& q, unsigned long base) {
  if (base == 3) return inverse_power_of_three(q);
  if (q.get_num() != 1) return -1;
  const BigInt& d = q.get_den();
  if (base == 2 && mpz_popcount(d.get_mpz_t()) == 1) return static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2)) - 1;
  return -1;
}

double info_value(const Rational& gap, int base) {
  long e = inverse_power_of(gap, static_cast<unsigned long>(base));
  if (e >= 0) return static_cast<double>(e);
  return -log_rational(gap) / std::log(static_cast<double>(base));
}

} // namespace

StepFunction info_fn(const PointSet& b, int base) {
  if (base != 2 && base != 3) throw std::invalid_argument("info_fn: base must be 2 or 3");
  const auto& p = b.points();
  std::vector<Rational> bp(p.begin() + 1, p.end());
  std::vector<double> vals;
  vals.reserve(bp.size());
  for (size_t k = 1; k < p.size(); ++k) vals.push_back(info_value(p[k] - p[k - 1], base));
  return StepFunction(std::move(bp), std::move(vals));
}

std::optional<ExactStepFunction> info_fn_exact(const PointSet& b) {
  const auto& p = b.points();
  std::vector<Rational> bp(p.begin() + 1, p.end());
  std::vector<Rational> vals;
  for (size_t k = 1; k < p.size(); ++k) {
    long e = inverse_power_of_three(p[k] - p[k - 1]);
    if (e < 0) return std::nullopt;
    vals.emplace_back(e);
  }
  return ExactStepFunction(std::move(bp), std::move(vals));
}

bool cantor_contains(const Rational& t) {
  if (t < 0 || t > 1) return false;
  const Rational third(1, 3), two_thirds(2, 3);
  std::set<Rational> seen;
  Rational x = t;
  while (true) {
    if (x == 0 || x == 1) return true;
    if (x > third && x < two_thirds) return false;
    if (!seen.insert(x).second) return true;
    if (x <= third) x = 3 * x;
    else x = 3 * x - 2;
  }
}

bool ClosedSet::contains(const Rational& t) const {
  return kind == Kind::Cantor ? cantor_contains(t) : finite.contains(t);
}

nlohmann::json to_json(const ClosedSet& c) {
  if (c.kind == ClosedSet::Kind::Cantor) return {{"type", "cantor"}, {"depth", c.depth}};
  return to_json(c.finite);
}

ClosedSet closed_set_from_json(const nlohmann::json& j) {
  if (j.is_object()) {
    if (j.value("type", "") != "cantor") throw std::invalid_argument("unknown closed-set generator");
    return ClosedSet::cantor(j.value("depth", 0U));
  }
  return ClosedSet::from_finite(point_set_from_json(j));
}

namespace {

void cantor_pieces(const Rational& a, const Rational& len, unsigned level, unsigned depth, double clip,
                   std::vector<Rational>& bp, std::vector<double>& vals) {
  if (level == depth) {
    bp.push_back(a + len);
    vals.push_back(clip);
    return;
  }
  Rational third = len / 3;
  cantor_pieces(a, third, level + 1, depth, clip, bp, vals);
  bp.push_back(a + 2 * third);
  vals.push_back(std::min(static_cast<double>(level + 1), clip));
  cantor_pieces(a + 2 * third, third, level + 1, depth, clip, bp, vals);
}

} // namespace

StepFunction info_fn_closed(const ClosedSet& c, double clip, int depth) {
  if (c.kind == ClosedSet::Kind::Finite) return info_fn(c.finite, 3).clip_min(clip);
  unsigned d;
  if (depth >= 0) {
    d = static_cast<unsigned>(depth);
  } else {
    double need = std::ceil(clip) - 1.0;
    d = need > 0 ? static_cast<unsigned>(need) : 0U;
  }
  if (d > 22) throw std::length_error("info_fn_closed: Cantor depth above 22 exceeds the piece budget");
  std::vector<Rational> bp;
  std::vector<double> vals;
  cantor_pieces(Rational(0), Rational(1), 0, d, clip, bp, vals);
  return StepFunction(std::move(bp), std::move(vals));
}

std::vector<Rational> cantor_level_measures(unsigned levels) {
  std::vector<Rational> out;
  for (unsigned m = 1; m <= levels; ++m) {
    Rational q(pow_int(2, m - 1), pow3(m));
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

double dyadic_floor(double a) {
  if (!(a >= 1.0)) throw std::domain_error("dyadic_floor: value below 1");
  int e = 0;
  std::frexp(a, &e);
  return std::ldexp(1.0, e - 1);
}

double dyadic_halffloor(double a) { return dyadic_floor(a) / 2.0; }

StepFunction dyadic_floor(const StepFunction& f, bool clip_below) {
  const StepFunction g = clip_below ? f.clip_max(1.0) : f;
  return g.map([](double x) { return dyadic_floor(x); });
}

StepFunction dyadic_halffloor(const StepFunction& f, bool clip_below) {
  const StepFunction g = clip_below ? f.clip_max(1.0) : f;
  return g.map([](double x) { return dyadic_halffloor(x); });
}

TriadicWitness is_triadic_fn(const StepFunction& h) {
  if (h.min_value() < 1.0) throw std::invalid_argument("is_triadic_fn: requires h >= 1");
  const double top = h.max_value();
  const auto& v = h.values();
  for (unsigned j = 1; pow2(static_cast<int>(j)) <= top; ++j) {
    const double c = pow2(static_cast<int>(j));
    const Rational u = grid_unit(j);
    for (size_t k = 0; k + 1 < h.size(); ++k) {
      if ((v[k] >= c) == (v[k + 1] >= c)) continue;
      Rational q = h.right(k) / u;
      if (!is_integer(q)) return TriadicWitness{false, j, floor_div(q)};
    }
  }
  return TriadicWitness{};
}

TypeJCheck is_type_j(const StepFunction& h, unsigned j) {
  TypeJCheck out;
  TriadicWitness tw = is_triadic_fn(h);
  if (!tw.ok) {
    out.ok = false;
    out.reason = "not triadic at level " + std::to_string(tw.level) + ", atom " + tw.index.get_str();
    return out;
  }
  for (size_t k = 0; k + 1 < h.size(); ++k) {
    if (!is_grid_point(h.right(k), j + 1)) {
      out.ok = false;
      out.reason = "not constant on level-" + std::to_string(j + 1) + " atoms (breakpoint " + to_string(h.right(k)) + ")";
      return out;
    }
  }
  const double top = pow2(static_cast<int>(j) + 1);
  for (double x : h.values()) {
    if (x >= top) continue;
    if (dyadic_floor(x) != x) {
      out.ok = false;
      out.reason = "value " + std::to_string(x) + " below 2^{j+1} is not a power of 2";
      return out;
    }
  }

  const Rational ul = grid_unit(j), us = grid_unit(j + 1);
  const BigInt per = pow3(1UL << j);
  struct Segment {
    BigInt m, m_count, rel, count;
    double a;
  };
  std::vector<Segment> segs;
  for (size_t k = 0; k < h.size(); ++k) {
    const double x = h.values()[k];
    if (x < top) continue;
    const double a = x - top;
    const Rational l = h.left(k), r = h.right(k);
    BigInt m_lo = floor_div(l / ul), m_hi = ceil_div(r / ul) - 1;
    auto rel_of = [&](const Rational& p, const BigInt& m) { return BigInt(floor_div((p - Rational(m) * ul) / us)); };
    if (m_lo == m_hi) {
      segs.push_back({m_lo, 1, rel_of(l, m_lo), floor_div((r - l) / us), a});
      continue;
    }
    segs.push_back({m_lo, 1, rel_of(l, m_lo), per - rel_of(l, m_lo), a});
    if (m_hi - m_lo > 1) segs.push_back({m_lo + 1, m_hi - m_lo - 1, 0, per, a});
    segs.push_back({m_hi, 1, 0, rel_of(r, m_hi), a});
  }
  for (const auto& s : segs) {
    if (s.count == 0) continue;
    if (!out.representation.empty()) {
      auto& last = out.representation.back();
      if (last.m_count == 1 && s.m_count == 1 && last.m_first == s.m) {
        last.runs.push_back({s.rel, s.count, s.a});
        continue;
      }
    }
    out.representation.push_back({s.m, s.m_count, {{s.rel, s.count, s.a}}});
  }
  return out;
}

} // namespace oseries
