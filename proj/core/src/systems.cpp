#include "nlx/systems.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlx/error.hpp"

namespace nlx {
namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::vector<double> default_probe(double domain_end, double top, std::size_t count) {
  if (std::isinf(domain_end)) return geometric_probe(1e-2, top, count);
  // cluster toward the open end: t = end - 10^{-k}
  std::vector<double> t(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double e = -1.0 - 5.0 * static_cast<double>(k) / static_cast<double>(count - 1);
    t[k] = domain_end - std::pow(10.0, e) * domain_end;
  }
  return t;
}

struct Derivs {
  double t, d1, d2, d3, f;
};

// Upper half of the probe with every value finite.
std::vector<Derivs> finite_tail(const ScalarFunction& fn, std::vector<double> probe) {
  if (probe.empty()) probe = default_probe(fn.domain_end, 1e6, 240);
  std::sort(probe.begin(), probe.end());
  std::vector<Derivs> ok;
  for (double t : probe) {
    Derivs d{t, fn.d1(t), fn.d2(t), fn.d3 ? fn.d3(t) : std::nan(""), fn.f(t)};
    if (std::isfinite(d.f) && std::isfinite(d.d1) && std::isfinite(d.d2)) ok.push_back(d);
  }
  ok.erase(ok.begin(), ok.begin() + static_cast<std::ptrdiff_t>(ok.size() / 2));
  return ok;
}

}  // namespace

ScalarNonlinearity ScalarNonlinearity::exponential() { return {ScalarKind::Exponential, 0.0}; }

ScalarNonlinearity ScalarNonlinearity::power(double p) {
  if (!(p > 1.0 && std::isfinite(p))) throw Error(ErrorCode::DomainError, "power exponent must exceed 1");
  return {ScalarKind::Power, p};
}

ScalarNonlinearity ScalarNonlinearity::singular_power(double p) {
  if (!(p > 1.0 && std::isfinite(p))) throw Error(ErrorCode::DomainError, "MEMS exponent must exceed 1");
  return {ScalarKind::SingularPower, p};
}

double ScalarNonlinearity::domain_end() const noexcept {
  return kind_ == ScalarKind::SingularPower ? 1.0 : std::numeric_limits<double>::infinity();
}

void ScalarNonlinearity::check(double t) const {
  if (kind_ == ScalarKind::SingularPower && !(t < 1.0))
    throw Error(ErrorCode::ConstraintViolation, "MEMS argument reached 1 (" + num(t) + ")");
  if (kind_ == ScalarKind::Power && !(t > -1.0))
    throw Error(ErrorCode::ConstraintViolation, "power argument at or below -1 (" + num(t) + ")");
}

double ScalarNonlinearity::value(double t) const {
  check(t);
  switch (kind_) {
    case ScalarKind::Exponential: return std::exp(t);
    case ScalarKind::Power: return std::pow(1.0 + t, p_);
    case ScalarKind::SingularPower: return std::pow(1.0 - t, -p_);
  }
  return 0.0;
}

double ScalarNonlinearity::d1(double t) const {
  check(t);
  switch (kind_) {
    case ScalarKind::Exponential: return std::exp(t);
    case ScalarKind::Power: return p_ * std::pow(1.0 + t, p_ - 1.0);
    case ScalarKind::SingularPower: return p_ * std::pow(1.0 - t, -p_ - 1.0);
  }
  return 0.0;
}

double ScalarNonlinearity::d2(double t) const {
  check(t);
  switch (kind_) {
    case ScalarKind::Exponential: return std::exp(t);
    case ScalarKind::Power: return p_ * (p_ - 1.0) * std::pow(1.0 + t, p_ - 2.0);
    case ScalarKind::SingularPower: return p_ * (p_ + 1.0) * std::pow(1.0 - t, -p_ - 2.0);
  }
  return 0.0;
}

double ScalarNonlinearity::d3(double t) const {
  check(t);
  switch (kind_) {
    case ScalarKind::Exponential: return std::exp(t);
    case ScalarKind::Power: return p_ * (p_ - 1.0) * (p_ - 2.0) * std::pow(1.0 + t, p_ - 3.0);
    case ScalarKind::SingularPower: return p_ * (p_ + 1.0) * (p_ + 2.0) * std::pow(1.0 - t, -p_ - 3.0);
  }
  return 0.0;
}

ScalarFunction ScalarNonlinearity::as_function() const {
  ScalarNonlinearity self = *this;
  return {[self](double t) { return self.value(t); }, [self](double t) { return self.d1(t); },
          [self](double t) { return self.d2(t); }, [self](double t) { return self.d3(t); },
          domain_end(), name()};
}

std::string ScalarNonlinearity::name() const {
  switch (kind_) {
    case ScalarKind::Exponential: return "exp(t)";
    case ScalarKind::Power: return "(1+t)^" + num(p_);
    case ScalarKind::SingularPower: return "(1-t)^-" + num(p_);
  }
  return "?";
}

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::Gelfand: return "gelfand";
    case Family::LaneEmden: return "lane_emden";
    case Family::Mems: return "mems";
    case Family::Gradient: return "gradient";
  }
  return "?";
}

SystemSpec SystemSpec::gelfand() {
  auto e = ScalarNonlinearity::exponential();
  return {Family::Gelfand, e, e};
}
SystemSpec SystemSpec::lane_emden(double p) {
  auto f = ScalarNonlinearity::power(p);
  return {Family::LaneEmden, f, f};
}
SystemSpec SystemSpec::mems(double p) {
  auto f = ScalarNonlinearity::singular_power(p);
  return {Family::Mems, f, f};
}
SystemSpec SystemSpec::gradient(ScalarNonlinearity f, ScalarNonlinearity g) {
  return {Family::Gradient, f, g};
}
SystemSpec SystemSpec::gradient_power(double p, double q) {
  return gradient(ScalarNonlinearity::power(p), ScalarNonlinearity::power(q));
}

std::string SystemSpec::name() const {
  switch (family_) {
    case Family::Gelfand: return "gelfand";
    case Family::LaneEmden: return "lane_emden(p=" + num(p()) + ")";
    case Family::Mems: return "mems(p=" + num(p()) + ")";
    case Family::Gradient: return "gradient(f=" + f_.name() + ", g=" + g_.name() + ")";
  }
  return "?";
}

double SystemSpec::upper_bound() const noexcept { return std::min(f_.domain_end(), g_.domain_end()); }

bool SystemSpec::admissible(double u, double v) const noexcept {
  const double top = upper_bound();
  return u >= 0.0 && v >= 0.0 && u < top && v < top;
}

bool SystemSpec::symmetric() const noexcept {
  if (family_ != Family::Gradient) return true;
  return f_.kind() == g_.kind() && f_.exponent() == g_.exponent();
}

PointEval SystemSpec::eval(double u, double v) const {
  PointEval e;
  if (family_ == Family::Gradient) {
    const double fu = f_.value(u), f1 = f_.d1(u), f2 = f_.d2(u);
    const double gv = g_.value(v), g1 = g_.d1(v), g2 = g_.d2(v);
    e.F = f1 * gv;
    e.G = fu * g1;
    e.Fu = f2 * gv;
    e.Fv = f1 * g1;
    e.Gu = f1 * g1;
    e.Gv = fu * g2;
  } else {
    e.F = f_.value(v);
    e.G = f_.value(u);
    e.Fv = f_.d1(v);
    e.Gu = f_.d1(u);
  }
  return e;
}

SystemValues SystemSpec::eval(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  if (u.size() != v.size()) throw Error(ErrorCode::GridMismatch, "u and v lengths differ");
  const auto n = u.size();
  SystemValues r{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n),
                 Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const PointEval e = eval(u[i], v[i]);
    r.F[i] = e.F;
    r.G[i] = e.G;
    r.Fu[i] = e.Fu;
    r.Fv[i] = e.Fv;
    r.Gu[i] = e.Gu;
    r.Gv[i] = e.Gv;
  }
  return r;
}

double SystemSpec::diagonal_value(double t) const { return eval(t, t).F; }

double SystemSpec::diagonal_slope(double t) const {
  const PointEval e = eval(t, t);
  return e.Fu + e.Fv;
}

std::vector<double> geometric_probe(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw Error(ErrorCode::InvalidArgument, "bad probe range");
  std::vector<double> t(count);
  const double r = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) t[k] = lo * std::exp(r * static_cast<double>(k));
  t.back() = hi;
  return t;
}

ConditionReport check_condition_R(const ScalarFunction& fn, std::vector<double> probe) {
  ConditionReport rep;
  auto fail = [&rep](std::string msg) {
    rep.pass = false;
    rep.violations.push_back(std::move(msg));
  };
  if (probe.empty()) probe = default_probe(fn.domain_end, kSuperlinearProbe, 200);
  probe.push_back(0.0);
  std::sort(probe.begin(), probe.end());

  if (std::abs(fn.f(0.0) - 1.0) > 1e-14) fail("f(0) = " + num(fn.f(0.0)) + ", expected 1");
  for (double t : probe) {
    const double d1 = fn.d1(t), d2 = fn.d2(t);
    if (std::isnan(d1) || std::isnan(d2)) {
      fail("derivative undefined at t = " + num(t));
      continue;
    }
    if (!(d1 > 0.0)) fail("f' <= 0 at t = " + num(t));
    if (d2 < 0.0) fail("f'' < 0 at t = " + num(t));
  }
  const double T = probe.back();
  const double ratio = fn.f(T) / T;  // +inf counts as superlinear
  if (!(ratio >= kSuperlinearRatio))
    fail("f(T)/T = " + num(ratio) + " < " + num(kSuperlinearRatio) + " at T = " + num(T));
  return rep;
}

RatioReport check_condition_deltaeps(const ScalarFunction& fn, std::vector<double> probe) {
  RatioReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = -std::numeric_limits<double>::infinity();
  for (const Derivs& d : finite_tail(fn, std::move(probe))) {
    if (!std::isfinite(d.d3)) continue;
    ++rep.evaluated;
    if (d.d3 == 0.0) {
      rep.degenerate = true;
      continue;
    }
    const double r = d.d2 * d.d2 / (d.d3 * d.d1);
    rep.min_ratio = std::min(rep.min_ratio, r);
    rep.max_ratio = std::max(rep.max_ratio, r);
  }
  if (rep.evaluated == 0) rep.degenerate = true;
  rep.pass = !rep.degenerate && rep.min_ratio > 0.0;
  return rep;
}

double check_condition_conf(const ScalarFunction& fn, std::vector<double> probe) {
  double sup = -std::numeric_limits<double>::infinity();
  for (const Derivs& d : finite_tail(fn, std::move(probe))) sup = std::max(sup, d.f * d.d2 / (d.d1 * d.d1));
  return sup;
}

}  // namespace nlx
