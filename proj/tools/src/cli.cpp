#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <nlx/error.hpp>
#include <nlx/kernel.hpp>
#include <nlx/special_fn.hpp>
#include <nlx/verify.hpp>

namespace nlx::cli {
namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); }

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) bad("cannot open '" + path + "' for writing");
  f << text;
}

json header(const char* kind, std::uint64_t seed) {
  return json{{"schema_version", kSchemaVersion}, {"kind", kind}, {"seed", seed}};
}

json opt_num(const std::optional<double>& x) { return x ? num(*x) : json(nullptr); }

std::string csv_cell(const json& j) {
  if (j.is_null()) return "";
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
    return buf;
  }
  return j.dump();
}

json report_json(const EstimateReport& r) {
  json q = json::object();
  for (const auto& [k, v] : r.quantities) q[k] = num(v);
  return json{{"name", r.name}, {"lhs", num(r.lhs)},  {"rhs", num(r.rhs)},   {"slack", num(r.slack)},
              {"pass", r.pass}, {"note", r.note},     {"quantities", q}};
}

// ---------------------------------------------------------------- thresholds

struct ThresholdArgs {
  std::vector<std::string> n{"1"}, s{"0.5"}, p{"2"}, q;
  std::string format = "json", out = "-";
};

int cmd_thresholds(const ThresholdArgs& a, std::ostream& out) {
  const auto ns = parse_values(a.n), ss = parse_values(a.s), ps = parse_values(a.p);
  const auto qs = a.q.empty() ? std::vector<double>{} : parse_values(a.q);
  if (a.format != "json" && a.format != "csv") bad("format must be json or csv");
  for (double n : ns)
    if (!(n > 0.0)) bad("n must be positive");
  for (double s : ss)
    if (!(s > 0.0 && s <= 1.0)) bad("s must lie in (0, 1]");
  for (double p : ps)
    if (!(p > 1.0 && std::isfinite(p))) bad("p must exceed 1");
  for (double q : qs)
    if (!(q > 1.0 && std::isfinite(q))) bad("q must exceed 1");

  const std::vector<std::string> cols{"n", "s", "p", "q", "gelfand", "lane_emden", "mems", "gradient",
                                      "gelfand_classical", "lane_emden_classical", "mems_classical",
                                      "gelfand_gamma", "lane_emden_gamma", "singular_lambda", "singular_A", "note"};
  json rows = json::array();
  for (double n : ns)
    for (double s : ss)
      for (double p : ps)
        for (double q : qs.empty() ? std::vector<double>{p} : qs) {
          const ThresholdReport r = threshold_report(n, s, p, q);
          json row{{"n", n}, {"s", s}, {"p", p}, {"q", q}};
          row["gelfand"] = num(r.gelfand_bound);
          row["lane_emden"] = opt_num(r.lane_emden_bound);
          row["mems"] = opt_num(r.mems_bound);
          row["gradient"] = opt_num(r.gradient_bound);
          row["gelfand_classical"] = num(threshold_gelfand(1.0));
          row["lane_emden_classical"] = num(threshold_lane_emden(1.0, p));
          row["mems_classical"] = num(threshold_mems(1.0, p));
          row["gelfand_gamma"] = r.gelfand_gamma ? json(std::string(to_string(*r.gelfand_gamma))) : json(nullptr);
          row["lane_emden_gamma"] =
              r.lane_emden_gamma ? json(std::string(to_string(*r.lane_emden_gamma))) : json(nullptr);
          row["singular_lambda"] = opt_num(r.singular_lambda);
          row["singular_A"] = opt_num(r.singular_A);
          std::string note;
          for (const char* k : {"lane_emden", "mems", "gradient", "gelfand_gamma", "lane_emden_gamma",
                                "singular_lambda", "singular_A"})
            if (row[k].is_null()) note += std::string(note.empty() ? "" : ";") + k + " undefined";
          row["note"] = note;
          rows.push_back(row);
        }

  if (a.format == "json") {
    json doc = header("thresholds", 0);
    doc["rows"] = rows;
    write_output(a.out, to_text(doc), out);
  } else {
    std::ostringstream os;
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
    for (const json& row : rows) {
      for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << csv_cell(row[cols[i]]);
      os << "\n";
    }
    write_output(a.out, os.str(), out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- criterion

struct CriterionArgs {
  std::string family = "gelfand";
  double n = 1.0, s = 0.5, p = 2.0, n_max = 200.0;
  bool crossover = false;
  std::string out = "-";
};

int cmd_criterion(const CriterionArgs& a, std::ostream& out) {
  if (a.family != "gelfand" && a.family != "lane_emden") bad("criterion family must be gelfand or lane_emden");
  if (!(a.s > 0.0 && a.s < 1.0)) bad("s must lie in (0, 1)");
  if (a.family == "lane_emden" && !(a.p > 1.0)) bad("p must exceed 1");
  json doc = header("criterion", 0);
  doc["family"] = a.family;
  doc["s"] = a.s;
  if (a.family == "lane_emden") doc["p"] = a.p;
  if (a.crossover) {
    if (!(a.n_max > 0.0)) bad("n_max must be positive");
    const auto c = a.family == "gelfand" ? gelfand_crossover(a.s, a.n_max) : lane_emden_crossover(a.s, a.p, a.n_max);
    doc["crossover"] = opt_num(c);
  } else {
    if (!(a.n > 0.0)) bad("n must be positive");
    const CriterionResult r =
        a.family == "gelfand" ? gelfand_gamma_criterion(a.n, a.s) : lane_emden_gamma_criterion(a.n, a.s, a.p);
    doc["n"] = a.n;
    doc["log_lhs"] = num(r.log_lhs);
    doc["log_rhs"] = num(r.log_rhs);
    doc["verdict"] = std::string(to_string(r.verdict));
  }
  write_output(a.out, to_text(doc), out);
  return kExitOk;
}

// ---------------------------------------------------------------- continue

struct ContinueArgs {
  BranchConfig cfg;
  std::string out = "-", csv;
};

int cmd_continue(const ContinueArgs& a, std::ostream& out, std::ostream& err) {
  a.cfg.validate();
  const DiscreteOperator op = a.cfg.op();
  Branch b;
  try {
    b = continue_branch(op, a.cfg.system(), a.cfg.sigma, a.cfg.step_policy(), a.cfg.solver_options());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InfeasibleStart) throw;
    err << "nlx continue: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
  write_output(a.out, to_text(branch_to_json(a.cfg, b)), out);
  if (!a.csv.empty()) write_output(a.csv, branch_csv(b), out);
  err << "nlx continue: " << to_string(b.status) << ", lambda* in [" << b.lambda_lo << ", " << b.lambda_hi
      << "], " << b.records.size() << " records\n";
  return exit_code_for(b.status);
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string branch, out = "-";
  std::vector<std::string> checks{kAllChecks};
  std::optional<double> t;
  std::size_t stride = 1;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  std::vector<std::string> checks;
  for (const std::string& c : a.checks) {
    if (c.empty() || c == "none") continue;
    if (c == "all") {
      checks.insert(checks.end(), kAllChecks.begin(), kAllChecks.end());
      continue;
    }
    if (std::find(kAllChecks.begin(), kAllChecks.end(), c) == kAllChecks.end()) bad("unknown check '" + c + "'");
    checks.push_back(c);
  }
  if (a.stride < 1) bad("stride must be positive");
  std::ifstream f(a.branch, std::ios::binary);
  if (!f) bad("cannot read branch file '" + a.branch + "'");
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::exception& e) {
    bad(std::string("branch file is not valid JSON: ") + e.what());
  }
  BranchConfig cfg;
  const Branch b = branch_from_json(doc, cfg);
  if (checks.empty()) {
    json r = header("verify", cfg.seed);
    r["checks"] = json::array();
    r["reports"] = json::array();
    r["pass"] = true;
    write_output(a.out, to_text(r), out);
    return kExitOk;
  }
  VerifyOutcome v = verify_branch(cfg, b, checks, a.t, a.stride);
  v.report["branch"] = a.branch;
  write_output(a.out, to_text(v.report), out);
  return v.pass ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------- singular-check

struct SingularArgs {
  std::string family = "gelfand";
  double n = 1.0, s = 0.3, p = 3.0, tol = 1e-4, truncation = 1e6, quad_tol = 1e-10;
  std::vector<std::string> points{"0.25", "0.5", "0.75"};
  std::string out = "-";
};

int cmd_singular(const SingularArgs& a, std::ostream& out) {
  if (a.family != "gelfand" && a.family != "lane_emden") bad("singular-check family must be gelfand or lane_emden");
  if (a.n != 1.0) bad("the principal-value quadrature is one-dimensional: n must be 1");
  if (!(a.s > 0.0 && a.s < 1.0)) bad("s must lie in (0, 1)");
  if (!(a.tol > 0.0) || !(a.truncation > 1.0) || !(a.quad_tol > 0.0)) bad("tolerances must be positive");
  const auto xs = parse_values(a.points);
  for (double x : xs)
    if (!(x > 0.0 && x < 1.0)) bad("points must lie in (0, 1)");

  const SpectralKernel k = SpectralKernel::fractional_laplacian(a.s);
  std::function<double(double)> profile;
  std::function<double(double)> expected;
  json doc = header("singular_check", 0);
  if (a.family == "gelfand") {
    const double lam = gelfand_singular_lambda(a.n, a.s);
    const double s = a.s;
    profile = [s](double y) { return -2.0 * s * std::log(std::abs(y)); };
    expected = [lam, s](double x) { return lam * std::pow(x, -2.0 * s); };
    doc["lambda"] = lam;
  } else {
    if (!(a.p > 1.0)) bad("p must exceed 1");
    const LaneEmdenSingular c = lane_emden_singular(a.n, a.s, a.p);
    const double p = a.p;
    profile = [c](double y) { return c.A * std::pow(std::abs(y), -c.beta); };
    expected = [c, p](double x) { return c.lambda * std::pow(c.A * std::pow(x, -c.beta), p); };
    doc["lambda"] = c.lambda;
    doc["A"] = c.A;
    doc["p"] = a.p;
  }
  doc["family"] = a.family;
  doc["n"] = a.n;
  doc["s"] = a.s;
  doc["tolerance"] = a.tol;
  bool pass = true;
  json pts = json::array();
  for (double x : xs) {
    json row{{"x", x}, {"expected", expected(x)}};
    try {
      const PvResult r = pv_apply(k, profile, x, a.truncation, a.quad_tol);
      const double rel = std::abs(r.value - expected(x)) / std::abs(expected(x));
      row["computed"] = r.value;
      row["quadrature_error"] = r.error;
      row["relative_error"] = rel;
      row["pass"] = rel <= a.tol;
      row["note"] = "";
      pass = pass && rel <= a.tol;
    } catch (const Error& e) {
      row["computed"] = nullptr;
      row["quadrature_error"] = nullptr;
      row["relative_error"] = nullptr;
      row["pass"] = false;
      row["note"] = e.what();
      pass = false;
    }
    pts.push_back(row);
  }
  doc["points"] = pts;
  doc["pass"] = pass;
  write_output(a.out, to_text(doc), out);
  return pass ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------- bootstrap

struct BootstrapArgs {
  double n = 1.0, s = 0.5;
  std::optional<double> p0;
  std::size_t max_steps = 10000;
  bool replay = false;
  std::string out = "-";
};

int cmd_bootstrap(const BootstrapArgs& a, std::ostream& out) {
  if (!(a.n > 0.0) || !(a.s > 0.0 && a.s < 1.0)) bad("need n > 0 and 0 < s < 1");
  if (a.max_steps < 1) bad("max_steps must be positive");
  const double p0 = a.p0 ? *a.p0 : bootstrap_seed(a.n, a.s);
  const BootstrapTrace tr = nedev_bootstrap(a.n, a.s, p0, a.max_steps, a.replay);
  json doc = header("bootstrap", 0);
  doc["n"] = a.n;
  doc["s"] = a.s;
  doc["p0"] = p0;
  doc["replay_stages"] = a.replay;
  doc["verdict"] = std::string(to_string(tr.verdict));
  doc["steps"] = tr.steps;
  json ex = json::array();
  for (double e : tr.exponents) ex.push_back(num(e));
  doc["exponents"] = ex;
  write_output(a.out, to_text(doc), out);
  return kExitOk;
}

// ---------------------------------------------------------------- inequalities

struct InequalityArgs {
  std::size_t samples = 100000;
  std::uint64_t seed = 42;
  std::string out = "-";
};

int cmd_inequalities(const InequalityArgs& a, std::ostream& out) {
  if (a.samples < 1) bad("samples must be positive");
  json doc = header("inequalities", a.seed);
  doc["samples"] = a.samples;
  json reps = json::array();
  bool pass = true;
  for (const InequalityReport& r : elementary_inequalities(a.samples, a.seed)) {
    json w = json::array();
    for (double x : r.witness) w.push_back(num(x));
    reps.push_back(json{{"name", r.name},
                        {"samples", r.samples},
                        {"violations", r.violations},
                        {"worst_margin", num(r.worst_margin)},
                        {"witness", w}});
    pass = pass && r.violations == 0;
  }
  doc["reports"] = reps;
  doc["pass"] = pass;
  write_output(a.out, to_text(doc), out);
  return pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int exit_code_for(BranchStatus s) noexcept {
  switch (s) {
    case BranchStatus::FoldFound: return kExitOk;
    case BranchStatus::StepLimit: return kExitStepLimit;
    case BranchStatus::ConstraintHit: return kExitConstraintHit;
  }
  return kExitVerifyFailed;
}

std::vector<double> parse_values(const std::vector<std::string>& items) {
  auto to_d = [](const std::string& t) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(t, &used);
    } catch (const std::exception&) {
      bad("not a number: '" + t + "'");
    }
    if (used != t.size() || !std::isfinite(x)) bad("not a number: '" + t + "'");
    return x;
  };
  std::vector<double> out;
  for (const std::string& item : items) {
    if (item.empty()) continue;
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(to_d(item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string::npos) bad("range must be start:stop:step, got '" + item + "'");
    const double a = to_d(item.substr(0, c1)), b = to_d(item.substr(c1 + 1, c2 - c1 - 1));
    const double h = to_d(item.substr(c2 + 1));
    if (!(h > 0.0)) bad("range step must be positive");
    const double count = std::floor((b - a) / h + 1e-9);
    if (count > 1e6) bad("range too long");
    for (double k = 0; k <= count; ++k) out.push_back(a + k * h);
  }
  return out;
}

VerifyOutcome verify_branch(const BranchConfig& cfg, const Branch& b, const std::vector<std::string>& checks,
                            std::optional<double> t, std::size_t stride) {
  const DiscreteOperator op = cfg.op();
  const SystemSpec sys = cfg.system();
  const double t_val = t ? *t : (sys.family() == Family::Gelfand ? 1.0 : 1.5);
  auto has = [&](const char* c) { return std::find(checks.begin(), checks.end(), c) != checks.end(); };

  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < b.records.size(); i += stride) idx.push_back(i);
  if (idx.back() != b.records.size() - 1) idx.push_back(b.records.size() - 1);

  VerifyOutcome v;
  json reports = json::array();
  auto add = [&](const std::string& check, long rec, const EstimateReport& r) {
    json j = report_json(r);
    j["check"] = check;
    j["record"] = rec;
    j["lambda"] = rec >= 0 ? num(b.records[static_cast<std::size_t>(rec)].lambda) : json(nullptr);
    reports.push_back(j);
    v.pass = v.pass && r.pass;
  };

  std::vector<double> mus;
  for (std::size_t i : idx) {
    const BranchRecord& r = b.records[i];
    const long li = static_cast<long>(i);
    if (has("residual")) {
      const double res = residual_norm(op, sys, r.lambda, r.gamma, r.u, r.v);
      EstimateReport e = make_report("residual", res, cfg.tol, 0.0);
      e.quantities = {{"stored", r.residual_norm}};
      add("residual", li, e);
    }
    if (has("stability")) {
      const StabilityForm form(op, sys, r.lambda, r.gamma, r.u, r.v);
      const double mu = stability_indicator(form);
      mus.push_back(mu);
      EstimateReport e = make_report("stability_indicator", 0.0, mu, 0.0);
      e.pass = mu > 0.0;
      e.quantities = {{"mu1", mu}};
      add("stability", li, e);
    }
    if (has("corollary")) {
      for (const EstimateReport& e : check_corollary_inequality(op, sys, r, default_test_bank(op, sys, r)))
        add("corollary", li, e);
    }
    if (has("estimates")) {
      for (const EstimateReport& e : check_integral_estimates(op, sys, r, t_val)) add("estimates", li, e);
    }
  }
  if (has("stability") && stride == 1) {
    // μ₁ must fall over the final five records
    const std::size_t k = std::min<std::size_t>(5, mus.size());
    bool dec = true;
    for (std::size_t i = mus.size() - k + 1; i < mus.size(); ++i) dec = dec && mus[i] < mus[i - 1];
    EstimateReport e;
    e.name = "stability_trend";
    e.pass = dec;
    e.note = "final " + std::to_string(k) + " indicators strictly decreasing";
    add("stability", -1, e);
  }
  if (has("monotonicity")) {
    for (std::size_t i = 1; i < b.records.size(); ++i) {
      const BranchRecord& a0 = b.records[i - 1];
      const BranchRecord& a1 = b.records[i];
      const double drop = std::min((a1.u - a0.u).minCoeff(), (a1.v - a0.v).minCoeff());
      const double scale = std::max(1.0, std::max(a1.sup_u(), a1.sup_v()));
      EstimateReport e = make_report("nondecreasing_in_lambda", -drop, 1e-8 * scale, 0.0);
      e.pass = e.pass && a1.lambda > a0.lambda;
      add("monotonicity", static_cast<long>(i), e);
    }
  }
  json doc = header("verify", cfg.seed);
  doc["checks"] = checks;
  doc["t"] = t_val;
  doc["stride"] = stride;
  doc["reports"] = reports;
  doc["pass"] = v.pass;
  v.report = std::move(doc);
  return v;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"nlx: minimal branches, stability and regularity thresholds for nonlocal elliptic systems"};
  app.set_config("--config", "", "key = value configuration file ([subcommand] sections)");
  app.require_subcommand(1);

  ThresholdArgs ta;
  auto* th = app.add_subcommand("thresholds", "tabulate dimension thresholds and Gamma criteria");
  th->add_option("--n", ta.n, "dimensions (values or start:stop:step)")->delimiter(',');
  th->add_option("--s", ta.s, "orders in (0, 1]")->delimiter(',');
  th->add_option("--p", ta.p, "exponents > 1")->delimiter(',');
  th->add_option("--q", ta.q, "second exponents for the gradient system (default q = p)")->delimiter(',');
  th->add_option("--format", ta.format, "json or csv");
  th->add_option("--out", ta.out, "output path, - for stdout");

  CriterionArgs ca;
  auto* cr = app.add_subcommand("criterion", "evaluate a Gamma-function criterion or its crossover");
  cr->add_option("--family", ca.family, "gelfand or lane_emden");
  cr->add_option("--n", ca.n, "dimension");
  cr->add_option("--s", ca.s, "order");
  cr->add_option("--p", ca.p, "Lane-Emden exponent");
  cr->add_flag("--crossover", ca.crossover, "report the largest n at which the criterion holds");
  cr->add_option("--n-max", ca.n_max, "upper end of the crossover scan");
  cr->add_option("--out", ca.out, "output path");

  ContinueArgs co;
  auto* cn = app.add_subcommand("continue", "continue the minimal branch along gamma = sigma * lambda");
  cn->add_option("--family", co.cfg.family, "gelfand, lane_emden, mems or gradient");
  cn->add_option("--p", co.cfg.p, "exponent");
  cn->add_option("--q", co.cfg.q, "second exponent (gradient)");
  cn->add_option("--s", co.cfg.s, "order in (0, 1)");
  cn->add_option("--sigma", co.cfg.sigma, "ray slope gamma / lambda");
  cn->add_option("--N", co.cfg.N, "interior grid nodes");
  cn->add_option("--R", co.cfg.R, "half-width of the interval");
  cn->add_option("--rule", co.cfg.rule, "cell_exact or taylor2");
  cn->add_option("--tol", co.cfg.tol, "relative residual tolerance");
  cn->add_option("--resolution", co.cfg.resolution, "relative fold bracket width");
  cn->add_option("--max-steps", co.cfg.max_steps, "solver calls");
  cn->add_option("--initial-lambda", co.cfg.initial_lambda, "first lambda (0: automatic)");
  cn->add_flag("--scalar-reduction", co.cfg.scalar_reduction, "solve the diagonal scalar problem (sigma = 1)");
  cn->add_option("--seed", co.cfg.seed, "recorded in the artifact");
  cn->add_option("--out", co.out, "branch JSON path");
  cn->add_option("--csv", co.csv, "plot CSV path");

  VerifyArgs va;
  auto* ve = app.add_subcommand("verify", "check a branch file");
  ve->add_option("--branch", va.branch, "branch JSON")->required();
  ve->add_option("--checks", va.checks, "residual,stability,corollary,estimates,monotonicity | all | none")
      ->delimiter(',');
  ve->add_option("--t", va.t, "auxiliary moment exponent");
  ve->add_option("--stride", va.stride, "check every k-th record");
  ve->add_option("--out", va.out, "report path");

  SingularArgs sa;
  auto* sc = app.add_subcommand("singular-check", "compare quadrature on a singular profile with its closed form");
  sc->add_option("--family", sa.family, "gelfand or lane_emden");
  sc->add_option("--n", sa.n, "dimension (must be 1)");
  sc->add_option("--s", sa.s, "order");
  sc->add_option("--p", sa.p, "Lane-Emden exponent");
  sc->add_option("--points", sa.points, "evaluation points in (0, 1)")->delimiter(',');
  sc->add_option("--tol", sa.tol, "relative error tolerance");
  sc->add_option("--truncation", sa.truncation, "quadrature truncation radius");
  sc->add_option("--quad-tol", sa.quad_tol, "quadrature tolerance");
  sc->add_option("--out", sa.out, "report path");

  BootstrapArgs ba;
  auto* bo = app.add_subcommand("bootstrap", "iterate the integrability bootstrap");
  bo->add_option("--n", ba.n, "dimension");
  bo->add_option("--s", ba.s, "order");
  bo->add_option("--p0", ba.p0, "starting exponent (default n/(n-2s))");
  bo->add_option("--max-steps", ba.max_steps, "iteration cap");
  bo->add_flag("--replay", ba.replay, "use the closed forms for the first three stages");
  bo->add_option("--out", ba.out, "report path");

  InequalityArgs ia;
  auto* in = app.add_subcommand("inequalities", "sample the elementary pointwise inequalities");
  in->add_option("--samples", ia.samples, "samples per inequality");
  in->add_option("--seed", ia.seed, "mt19937_64 seed");
  in->add_option("--out", ia.out, "report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*th) return cmd_thresholds(ta, out);
    if (*cr) return cmd_criterion(ca, out);
    if (*cn) return cmd_continue(co, out, err);
    if (*ve) return cmd_verify(va, out);
    if (*sc) return cmd_singular(sa, out);
    if (*bo) return cmd_bootstrap(ba, out);
    if (*in) return cmd_inequalities(ia, out);
  } catch (const Error& e) {
    err << "nlx: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::InvalidArgument:
      case ErrorCode::DomainError:
      case ErrorCode::UnsupportedGrid:
      case ErrorCode::GridMismatch:
      case ErrorCode::EllipticityViolation: return kExitConfig;
      default: return kExitVerifyFailed;
    }
  } catch (const std::exception& e) {
    err << "nlx: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
  return kExitConfig;
}

}  // namespace nlx::cli
