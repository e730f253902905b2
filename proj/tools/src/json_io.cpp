#include "json_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <nlx/error.hpp>
#include <nlx/kernel.hpp>

namespace nlx::cli {
namespace {

void bad(const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); }

bool inline_array(const json& j) {
  for (const auto& e : j)
    if (e.is_structured()) return false;
  return true;
}

void emit(std::ostringstream& os, const json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
  const std::string inner(static_cast<std::size_t>(2 * depth + 2), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << json(it.key()).dump() << ": ";
        emit(os, it.value(), depth + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      if (inline_array(j)) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          emit(os, j[i], depth + 1);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << inner;
        emit(os, j[i], depth + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        os << "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      os << buf;
      return;
    }
    default:
      os << j.dump();
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

double get_double(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_number()) bad(std::string("field '") + key + "' must be a number");
  return f.get<double>();
}

int get_int(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_number_integer()) bad(std::string("field '") + key + "' must be an integer");
  return f.get<int>();
}

std::string get_string(const json& j, const char* key) {
  const json& f = field(j, key);
  if (!f.is_string()) bad(std::string("field '") + key + "' must be a string");
  return f.get<std::string>();
}

GridFunction get_vector(const json& j, const char* key, int n) {
  const json& f = field(j, key);
  if (!f.is_array() || static_cast<int>(f.size()) != n)
    bad(std::string("field '") + key + "' must be an array of length N");
  GridFunction g(n);
  for (int i = 0; i < n; ++i) {
    if (!f[static_cast<std::size_t>(i)].is_number()) bad(std::string("non-numeric entry in '") + key + "'");
    g[i] = f[static_cast<std::size_t>(i)].get<double>();
  }
  return g;
}

}  // namespace

std::string to_text(const json& j) {
  std::ostringstream os;
  emit(os, j, 0);
  os << "\n";
  return os.str();
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double read_num(const json& j, double missing) {
  if (j.is_null()) return missing;
  if (!j.is_number()) bad("expected a number or null");
  return j.get<double>();
}

void BranchConfig::validate() const {
  if (family != "gelfand" && family != "lane_emden" && family != "mems" && family != "gradient")
    bad("family must be one of gelfand, lane_emden, mems, gradient (got '" + family + "')");
  if (family != "gelfand" && !(p > 1.0 && std::isfinite(p))) bad("p must exceed 1");
  if (family == "gradient" && !(q > 1.0 && std::isfinite(q))) bad("q must exceed 1");
  if (!(s > 0.0 && s < 1.0)) bad("s must lie in (0, 1)");
  if (!(sigma > 0.0 && std::isfinite(sigma))) bad("sigma must be positive");
  if (N < 3) bad("N must be at least 3");
  if (!(R > 0.0 && std::isfinite(R))) bad("R must be positive");
  parse_singular_rule(rule);
  if (!(tol > 0.0 && tol < 1e-2)) bad("tol must lie in (0, 1e-2)");
  if (!(resolution > 0.0 && resolution < 1.0)) bad("resolution must lie in (0, 1)");
  if (max_steps < 1) bad("max_steps must be positive");
  if (!(initial_lambda >= 0.0)) bad("initial_lambda must be nonnegative");
  if (scalar_reduction && (sigma != 1.0 || family == "gradient"))
    bad("scalar_reduction needs sigma = 1 and a symmetric family");
}

SystemSpec BranchConfig::system() const {
  if (family == "gelfand") return SystemSpec::gelfand();
  if (family == "lane_emden") return SystemSpec::lane_emden(p);
  if (family == "mems") return SystemSpec::mems(p);
  return SystemSpec::gradient_power(p, q);
}

DiscreteOperator BranchConfig::op() const {
  return assemble(SpectralKernel::fractional_laplacian(s), Grid::uniform(static_cast<std::size_t>(N), R),
                  parse_singular_rule(rule));
}

SolverOptions BranchConfig::solver_options() const {
  SolverOptions o;
  o.tol = tol;
  o.scalar_reduction = scalar_reduction;
  return o;
}

StepPolicy BranchConfig::step_policy() const {
  StepPolicy sp;
  sp.initial_lambda = initial_lambda;
  sp.resolution = resolution;
  sp.max_steps = max_steps;
  return sp;
}

json config_to_json(const BranchConfig& c) {
  return json{{"family", c.family},
              {"p", c.p},
              {"q", c.q},
              {"s", c.s},
              {"sigma", c.sigma},
              {"N", c.N},
              {"R", c.R},
              {"rule", c.rule},
              {"kernel", "fractional_laplacian"},
              {"tol", c.tol},
              {"resolution", c.resolution},
              {"max_steps", c.max_steps},
              {"initial_lambda", c.initial_lambda},
              {"scalar_reduction", c.scalar_reduction}};
}

BranchConfig config_from_json(const json& j) {
  BranchConfig c;
  c.family = get_string(j, "family");
  c.p = get_double(j, "p");
  c.q = get_double(j, "q");
  c.s = get_double(j, "s");
  c.sigma = get_double(j, "sigma");
  c.N = get_int(j, "N");
  c.R = get_double(j, "R");
  c.rule = get_string(j, "rule");
  if (get_string(j, "kernel") != "fractional_laplacian") bad("unsupported kernel");
  c.tol = get_double(j, "tol");
  c.resolution = get_double(j, "resolution");
  c.max_steps = get_int(j, "max_steps");
  c.initial_lambda = get_double(j, "initial_lambda");
  const json& sr = field(j, "scalar_reduction");
  if (!sr.is_boolean()) bad("field 'scalar_reduction' must be a boolean");
  c.scalar_reduction = sr.get<bool>();
  c.validate();
  return c;
}

json branch_to_json(const BranchConfig& c, const Branch& b) {
  json recs = json::array();
  for (const BranchRecord& r : b.records) {
    recs.push_back(json{{"lambda", r.lambda},
                        {"gamma", r.gamma},
                        {"sup_u", r.sup_u()},
                        {"sup_v", r.sup_v()},
                        {"stability_indicator", num(r.stability_indicator)},
                        {"residual", r.residual_norm},
                        {"newton_iters", r.newton_iters},
                        {"monotone_iters", r.monotone_iters},
                        {"u", std::vector<double>(r.u.data(), r.u.data() + r.u.size())},
                        {"v", std::vector<double>(r.v.data(), r.v.data() + r.v.size())}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"kind", "branch"},
              {"seed", c.seed},
              {"config", config_to_json(c)},
              {"status", std::string(to_string(b.status))},
              {"sigma", b.sigma},
              {"lambda_lo", b.lambda_lo},
              {"lambda_hi", num(b.lambda_hi)},
              {"lambda_star_estimate", b.lambda_star_estimate()},
              {"gamma_star_estimate", b.sigma * b.lambda_star_estimate()},
              {"bracket_width", num(b.bracket_width())},
              {"records", recs}};
}

Branch branch_from_json(const json& j, BranchConfig& config) {
  if (!j.is_object()) bad("branch document must be an object");
  const json& ver = field(j, "schema_version");
  if (!ver.is_number_integer() || ver.get<int>() != kSchemaVersion)
    bad("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  if (get_string(j, "kind") != "branch") bad("document kind is not 'branch'");
  config = config_from_json(field(j, "config"));
  const json& seed = field(j, "seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) bad("field 'seed' must be an integer");
  config.seed = seed.get<std::uint64_t>();

  Branch b;
  b.sigma = get_double(j, "sigma");
  if (b.sigma != config.sigma) bad("sigma disagrees with config");
  b.status = parse_branch_status(get_string(j, "status"));
  b.lambda_lo = get_double(j, "lambda_lo");
  b.lambda_hi = read_num(field(j, "lambda_hi"), std::numeric_limits<double>::infinity());
  const json& recs = field(j, "records");
  if (!recs.is_array() || recs.empty()) bad("records must be a non-empty array");
  for (const json& r : recs) {
    BranchRecord rec;
    rec.lambda = get_double(r, "lambda");
    rec.gamma = get_double(r, "gamma");
    rec.stability_indicator = read_num(field(r, "stability_indicator"), std::nan(""));
    rec.residual_norm = get_double(r, "residual");
    rec.newton_iters = get_int(r, "newton_iters");
    rec.monotone_iters = get_int(r, "monotone_iters");
    rec.u = get_vector(r, "u", config.N);
    rec.v = get_vector(r, "v", config.N);
    if (!b.records.empty() && !(rec.lambda > b.records.back().lambda)) bad("records are not increasing in lambda");
    b.records.push_back(std::move(rec));
  }
  return b;
}

std::string branch_csv(const Branch& b) {
  std::ostringstream os;
  os << "lambda,gamma,sup_u,sup_v,stability_indicator,residual\n";
  char buf[256];
  for (const BranchRecord& r : b.records) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.lambda, r.gamma, r.sup_u(),
                  r.sup_v(), r.stability_indicator, r.residual_norm);
    os << buf;
  }
  return os.str();
}

}  // namespace nlx::cli
