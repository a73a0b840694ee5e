#include "oseries/cli.hpp"

#include "oseries/construct.hpp"
#include "oseries/criteria.hpp"
#include "oseries/info.hpp"
#include "oseries/ortho.hpp"
#include "oseries/sets.hpp"
#include "oseries/vcalc.hpp"
#include "oseries/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

namespace oseries::cli {

using nlohmann::json;

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto a = item.find_first_not_of(" \t\n");
    if (a == std::string::npos) continue;
    auto b = item.find_last_not_of(" \t\n");
    out.push_back(parse_rational(std::string_view(item).substr(a, b - a + 1)));
  }
  return out;
}

// Inline comma list, or a file holding a JSON list / one value per line.
std::vector<Rational> list_or_file(const std::string& arg) {
  if (arg != "-" && !std::ifstream(arg)) return parse_list(arg);
  std::string text = read_input(arg);
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    std::vector<Rational> out;
    for (const auto& x : json::parse(text)) {
      if (x.is_string()) out.push_back(parse_rational(x.get<std::string>()));
      else if (x.is_number_integer()) out.push_back(Rational(x.get<long>()));
      else out.push_back(from_double(x.get<double>()));
    }
    return out;
  }
  for (char& c : text)
    if (c == '\n') c = ',';
  return parse_list(text);
}

PointSet grid_set(long cells) {
  std::vector<Rational> pts;
  for (long n = 0; n <= cells; ++n) pts.push_back(Rational(n, cells));
  return PointSet(pts);
}

PointSet parse_b(const std::string& spec) {
  if (spec == "grid0") return grid_set(3);
  if (spec == "grid1") return grid_set(9);
  if (spec == "grid2") return grid_set(81);
  if (spec.find(',') != std::string::npos) return PointSet::with_endpoints(parse_list(spec));
  return point_set_from_json(json::parse(read_input(spec)));
}

json summarize(const StepFunction& f) {
  return {{"pieces", f.size()}, {"min", f.min_value()}, {"max", f.max_value()}, {"norm", f.l2_norm()}};
}

json trace_json(const VTrace& t) {
  json levels = json::array();
  for (const auto& l : t.levels) levels.push_back({{"j", l.j}, {"norm", l.norm}});
  return {{"levels", levels}, {"value", t.value}, {"stabilization_level", t.stabilization_level}};
}

} // namespace

bool exact_from_env() {
  const char* v = std::getenv("ORTHO_EXACT");
  return v && std::string(v) == "1";
}

json cmd_analyze(const AnalyzeConfig& c, int& code) {
  code = kOk;
  json out;
  out["command"] = "analyze";
  out["config"] = {{"input", c.input}, {"indicator", c.indicator}, {"exact", c.exact}};
  auto seq = parse_coefficients(read_input(c.input));
  json notices = json::array();
  if (!seq.is_normalized()) {
    notices.push_back("input normalized to sum a_n^2 = 1 (original total " + to_string(seq.total()) + ")");
    seq = seq.normalized();
  }
  out["size"] = seq.size();

  auto b = tail_set(seq);
  out["tail_set"] = to_json(b);
  auto h = info_fn(b, 3);
  out["h_B"] = summarize(h);
  bool clipped = h.min_value() < 1.0;
  if (clipped) notices.push_back("h_B below 1 on some gap; V evaluated on max(h_B, 1)");
  auto trace = v_functional_trace(h.clip_max(1.0));
  out["V"] = trace_json(trace);
  out["V"]["clipped_below_1"] = clipped;
  if (c.exact) {
    auto he = info_fn_exact(b);
    out["h_B_exact"] = he ? to_json(*he) : json(nullptr);
  }

  json crit;
  if (seq.is_decreasing()) crit["alpha"] = to_json(alpha_report(seq));
  else crit["alpha"] = {{"skipped", "|a_n| not non-increasing"}};
  crit["beta"] = to_json(beta_condition(seq));
  crit["gamma"] = to_json(gamma_condition(seq));
  crit["tandori"] = to_json(tandori_sum(seq));
  auto weyl = rm_weyl(seq, rm_weights(seq.size()));
  crit["rademacher_menshov"] = {{"weighted_sum", weyl.weighted_sum}};
  auto ind = c.indicator == "closed" ? IndicatorVariable::InfoClosed : IndicatorVariable::InfoBase2;
  crit["indicator"] = to_json(theorem17_conditions(seq, ind));
  out["criteria"] = crit;

  auto s = sandwich_check(seq);
  out["sandwich"] = {{"a_minus", s.a_minus}, {"a_plus", s.a_plus}, {"b_minus", s.b_minus}, {"b_plus", s.b_plus},
                     {"gamma", s.gamma},     {"beta_u", s.beta_u}, {"gamma_ok", s.gamma_ok},
                     {"beta_ok", s.beta_ok}, {"chain_ok", s.chain_ok}};
  if (!s.ok()) code = kAssertionFailure;
  out["notices"] = notices;
  return out;
}

json cmd_construct(const ConstructConfig& c, int& code) {
  code = kOk;
  json out;
  out["command"] = "construct";
  out["config"] = {{"k", c.k ? json(*c.k) : json(nullptr)},
                   {"b", c.b ? json(*c.b) : json(nullptr)},
                   {"target", c.target ? json(*c.target) : json(nullptr)},
                   {"with_process", c.with_process},
                   {"exact", c.exact}};
  if (c.k.has_value() == c.b.has_value()) throw DataError("construct needs exactly one of --k and --b");

  if (c.k) {
    if (*c.k > kMaxPhiDepth)
      throw DataError("budget exceeded: k = " + std::to_string(*c.k) + " > " + std::to_string(kMaxPhiDepth));
    if (*c.k == 0) throw DataError("k must be at least 1");
    auto rep = phi_family_check(*c.k);
    out["family"] = to_json(rep);
    out["vectors_count"] = pow3(*c.k).get_ui();
    out["gram_scale"] = to_string(Rational(3) / Rational(pow3(*c.k)));
    if (c.with_process) {
      json vs = json::array();
      for (const auto& v : phi_family(*c.k, OrthoVector::external(0))) vs.push_back(to_json(v));
      out["vectors"] = vs;
    }
    if (!rep.ok()) code = kAssertionFailure;
    return out;
  }

  auto b = parse_b(*c.b);
  auto tri = is_triadic_set(b);
  if (!tri.ok && !(b.size() == 2)) throw DataError("B is not triadic: " + tri.reason);
  auto res = build_divergent(b, c.target);
  out["result"] = to_json(res, c.with_process);
  auto g = gram_check(res.unit, c.exact);
  out["unit_gram"] = {{"max_deviation", g.max_deviation}, {"exact_zero", g.exact_zero}, {"origin_norm", g.origin_norm}};

  auto mx = maximal_body(res.unit);
  const double top = mx.max_value().to_double();
  json table = json::array();
  for (long n = 1; n <= 2 * static_cast<long>(std::ceil(top)) && n <= 64; ++n) {
    Rational y(n, 2);
    y.canonicalize();
    Rational m = exceedance(mx, Surd(y), true);
    table.push_back({{"y", to_string(y)}, {"measure", to_string(m)}, {"value", m.get_d()}});
  }
  out["exceedance"] = table;
  if (!res.check.ok() || !g.ok()) code = kAssertionFailure;
  return out;
}

json cmd_verify(const VerifyConfig& c, int& code) {
  json out;
  out["command"] = "verify";
  out["config"] = {{"suites", c.suites}, {"seed", c.seed}, {"count", c.count}, {"corrupt", c.corrupt}, {"jobs", c.jobs}};
  std::vector<const SuiteInfo*> chosen;
  for (const auto& s : all_suites())
    if (c.suites.empty() || std::find(c.suites.begin(), c.suites.end(), s.name) != c.suites.end())
      chosen.push_back(&s);
  for (const auto& name : c.suites) {
    bool known = std::any_of(all_suites().begin(), all_suites().end(), [&](const SuiteInfo& s) { return s.name == name; });
    if (!known) throw UsageError("unknown suite '" + name + "'");
  }
  SuiteOptions opts{c.seed, c.count, c.corrupt};
  std::vector<SuiteResult> results(chosen.size());
  const size_t jobs = std::max(1u, c.jobs);
  for (size_t start = 0; start < chosen.size(); start += jobs) {
    std::vector<std::future<SuiteResult>> batch;
    for (size_t k = start; k < std::min(chosen.size(), start + jobs); ++k)
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                 [&, k] { return chosen[k]->run(opts); }));
    for (size_t k = 0; k < batch.size(); ++k) results[start + k] = batch[k].get();
  }
  json arr = json::array();
  bool all = true;
  json failed = json::array();
  for (const auto& r : results) {
    arr.push_back(to_json(r));
    if (!r.passed()) {
      all = false;
      failed.push_back(r.lemma);
    }
  }
  out["suites"] = arr;
  out["passed"] = all;
  out["failed_lemmas"] = failed;
  code = all ? kOk : kAssertionFailure;
  return out;
}

json cmd_cantor(const CantorConfig& c, int& code) {
  code = kOk;
  json out;
  out["command"] = "cantor";
  out["config"] = {{"set", c.set}, {"t", c.t}, {"widths", c.widths}, {"depth", c.depth}, {"k_max", c.k_max}};
  ClosedSet set = c.set == "cantor" ? ClosedSet::cantor(c.depth) : closed_set_from_json(json::parse(read_input(c.set)));
  Rational t = parse_rational(c.t);
  if (!set.contains(t)) throw DataError("t = " + to_string(t) + " is not in B");
  std::vector<Rational> widths;
  for (const auto& w : c.widths) widths.push_back(parse_rational(w));
  out["continuity"] = to_json(continuity_verdict(set, t, widths, c.depth));
  if (set.kind == ClosedSet::Kind::Cantor) {
    json tails = json::array();
    for (unsigned k = 0; k <= c.k_max; ++k) {
      auto ct = cantor_tail(k);
      tails.push_back({{"k", k},
                       {"l2", ct.l2},
                       {"l2_closed_form", std::sqrt(15.0) * std::pow(2.0 / 3.0, k / 2.0)},
                       {"l1", ct.l1_partial.get_d()},
                       {"bound", ct.bound},
                       {"l2_within_bound", ct.bound_ok},
                       {"l1_within_bound", ct.l1_partial.get_d() <= ct.bound * (1 + 1e-12)}});
    }
    out["tails"] = tails;
  }
  return out;
}

json cmd_measure(const MeasureConfig& c, int& code) {
  code = kOk;
  json out;
  out["command"] = "measure";
  out["config"] = {{"probs", c.probs}};
  auto p = list_or_file(c.probs);
  if (p.empty()) throw DataError("empty probability list");
  Rational total(0);
  for (const auto& x : p) {
    if (x <= 0) throw DataError("atom probabilities must be positive");
    total += x;
  }
  if (total != 1) throw DataError("atom probabilities sum to " + to_string(total) + ", not 1");
  out["atoms"] = p.size();
  out["value"] = measure_criterion(p);
  return out;
}

std::string render_table(const json& r) {
  std::ostringstream s;
  const std::string cmd = r.value("command", "");
  s << "command: " << cmd << "\n";
  if (cmd == "analyze") {
    s << "coefficients     " << r["size"] << "\n";
    s << "tail set points  " << r["tail_set"].size() << "\n";
    s << "h_B max          " << r["h_B"]["max"] << "\n";
    s << "V h_B            " << r["V"]["value"] << (r["V"]["clipped_below_1"].get<bool>() ? "  (clipped at 1)" : "")
      << "\n";
    s << "stabilization    " << r["V"]["stabilization_level"] << "\n";
    for (const char* k : {"beta", "gamma", "tandori"}) s << k << std::string(17 - std::string(k).size(), ' ')
                                                        << r["criteria"][k]["value"] << "\n";
    const auto& sw = r["sandwich"];
    s << "sandwich         B- " << sw["b_minus"] << "  A+ " << sw["a_plus"] << "  B+ " << sw["b_plus"] << "\n";
  } else if (cmd == "construct") {
    if (r.contains("family")) {
      s << "vectors          " << r["vectors_count"] << "\n";
      s << "gram scale       " << r["gram_scale"].get<std::string>() << "\n";
      for (auto& [k, v] : r["family"].items())
        if (v.is_boolean()) s << k << std::string(k.size() < 17 ? 17 - k.size() : 1, ' ') << v << "\n";
    } else {
      s << "plan             " << r["result"]["plan"]["kind"].get<std::string>() << "\n";
      s << "eps              " << r["result"]["achieved"]["eps"] << "\n";
      s << "gram deviation   " << r["unit_gram"]["max_deviation"] << "\n";
      s << "y        lambda(max X > y)\n";
      for (const auto& row : r["exceedance"])
        s << row["y"].get<std::string>() << std::string(9 - std::min<size_t>(8, row["y"].get<std::string>().size()), ' ')
          << row["measure"].get<std::string>() << "\n";
    }
  } else if (cmd == "verify") {
    for (const auto& x : r["suites"])
      s << (x["passed"].get<bool>() ? "PASS " : "FAIL ") << x["name"].get<std::string>() << "  instances "
        << x["instances"] << "  violations " << x["violations"] << "  worst ratio " << x["worst_ratio"] << "\n";
  } else if (cmd == "cantor") {
    if (r.contains("tails"))
      for (const auto& x : r["tails"])
        s << "k " << x["k"] << "  l2 " << x["l2"] << "  l1 " << x["l1"] << "  3(2/3)^k " << x["bound"] << "\n";
    s << "verdict: " << r["continuity"]["verdict"].get<std::string>() << "\n";
  } else if (cmd == "measure") {
    s << "atoms " << r["atoms"] << "  value " << r["value"] << "\n";
  }
  return s.str();
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orthogonal series convergence toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_path, format = "json";
  app.add_option("-o,--out", out_path, "write the report to a file");
  app.add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"}));

  AnalyzeConfig ac;
  auto* analyze = app.add_subcommand("analyze", "criteria and V-trace for a coefficient file");
  analyze->add_option("input", ac.input, "coefficient file (JSON or CSV, '-' for stdin)")->required();
  analyze->add_option("--indicator", ac.indicator, "info2 or closed")->check(CLI::IsMember({"info2", "closed"}));
  analyze->add_flag("--exact", ac.exact, "exact rational output where available");

  ConstructConfig cc;
  unsigned k = 0;
  std::string b;
  double target = 0;
  auto* construct = app.add_subcommand("construct", "build a phi family or a divergent process");
  auto* k_opt = construct->add_option("--k", k, "phi family depth");
  auto* b_opt = construct->add_option("--b", b, "grid0 | grid1 | grid2 | comma list | JSON file");
  auto* t_opt = construct->add_option("--target", target, "exceedance level for the unit process");
  construct->add_flag("--with-process", cc.with_process, "dump vectors / process values");
  construct->add_flag("--exact", cc.exact, "exact Gram check of the unit process");

  VerifyConfig vc;
  auto* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("--suite", vc.suites, "suite names (repeatable)");
  verify->add_option("--seed", vc.seed);
  verify->add_option("--count", vc.count)->check(CLI::PositiveNumber);
  verify->add_flag("--corrupt", vc.corrupt, "negative control");
  verify->add_option("--jobs", vc.jobs)->check(CLI::PositiveNumber);

  CantorConfig kc;
  auto* cantor = app.add_subcommand("cantor", "continuity trace around a point of a closed set");
  cantor->add_option("--set", kc.set, "'cantor' or a closed-set JSON file");
  cantor->add_option("--t", kc.t);
  cantor->add_option("--widths", kc.widths)->delimiter(',');
  cantor->add_option("--depth", kc.depth)->check(CLI::Range(1u, 22u));
  cantor->add_option("--k-max", kc.k_max)->check(CLI::Range(0u, 60u));

  MeasureConfig mc;
  auto* measure = app.add_subcommand("measure", "criterion for an orthogonal measure on finitely many atoms");
  measure->add_option("probs", mc.probs, "comma list or file of atom probabilities")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  const bool env_exact = exact_from_env();
  int code = kOk;
  json report;
  try {
    if (*analyze) {
      ac.exact = ac.exact || env_exact;
      report = cmd_analyze(ac, code);
    } else if (*construct) {
      if (*k_opt) cc.k = k;
      if (*b_opt) cc.b = b;
      if (*t_opt) cc.target = target;
      cc.exact = cc.exact || env_exact;
      report = cmd_construct(cc, code);
    } else if (*verify) {
      report = cmd_verify(vc, code);
    } else if (*cantor) {
      report = cmd_cantor(kc, code);
    } else if (*measure) {
      report = cmd_measure(mc, code);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  report["format"] = format;

  const std::string text = format == "table" ? render_table(report) : report.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      err << "error: cannot write '" << out_path << "'\n";
      return kDataError;
    }
    f << text;
  }
  return code;
}

} // namespace oseries::cli
