#include "nlx/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nlx/error.hpp"

namespace nlx {
namespace {

using Vec = Eigen::VectorXd;
using Eigen::Index;

double integral(const DiscreteOperator& op, const Vec& f) { return op.grid().h() * f.sum(); }

std::string tag(const char* base, double t) {
  std::ostringstream os;
  os << base << t;
  return os.str();
}

Vec pow_vec(const Vec& base, double e) { return base.array().pow(e).matrix(); }

// The ε from the sweep giving the largest normalized slack.
template <class Make>
EstimateReport best_over_eps(const std::vector<double>& eps, Make make) {
  EstimateReport best;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (double e : eps) {
    EstimateReport r = make(e);
    const double m = r.slack / std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-300});
    if (m > best_margin) {
      best_margin = m;
      best = std::move(r);
    }
  }
  return best;
}

EstimateReport not_applicable(std::string name, std::string why) {
  EstimateReport r;
  r.name = std::move(name);
  r.pass = true;
  r.note = "not applicable: " + why;
  return r;
}

// Shared tail of the product bound: a X_i <= k λ I + m Zw for both rows,
// X_1 X_2 >= I², Zw <= |Ω|^{1-θ} I^θ.
EstimateReport product_report(std::string name, double I, double Zw, double lambda, double gamma,
                              double omega, double theta, double k,
                              const std::vector<std::pair<double, double>>& a_m, double tol) {
  double best_C = std::numeric_limits<double>::infinity();
  double best_eps_index = -1;
  for (std::size_t i = 0; i < a_m.size(); ++i) {
    const auto [a, m] = a_m[i];
    const double A = a * a - k * k * lambda * gamma;
    if (!(A > 0.0)) continue;
    const double B = m * k * (lambda + gamma) * std::pow(omega, 1.0 - theta);
    const double D = m * m * std::pow(omega, 2.0 - 2.0 * theta);
    const double C = product_bound(A, B, D, theta);
    if (C < best_C) {
      best_C = C;
      best_eps_index = static_cast<double>(i);
    }
  }
  if (!std::isfinite(best_C)) return not_applicable(std::move(name), "no epsilon gives a positive leading coefficient");
  EstimateReport r = make_report(std::move(name), I, best_C, tol);
  r.quantities = {{"I", I}, {"Zw", Zw}, {"C", best_C}, {"omega", omega}, {"eps_index", best_eps_index}};
  return r;
}

}  // namespace

StabilityForm::StabilityForm(const DiscreteOperator& op, const SystemSpec& system, double lambda,
                             double gamma, const GridFunction& u, const GridFunction& v)
    : op_(&op), lambda_(lambda), gamma_(gamma), vals_(system.eval(u, v)) {
  if (static_cast<std::size_t>(u.size()) != op.size() || static_cast<std::size_t>(v.size()) != op.size())
    throw Error(ErrorCode::GridMismatch, "state does not match the operator grid");
  if (!(lambda > 0.0 && gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda and gamma must be positive");
}

Eigen::MatrixXd StabilityForm::matrix() const {
  const Index n = static_cast<Index>(op_->size());
  const Eigen::MatrixXd& A = op_->matrix();
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  Q.topLeftCorner(n, n) = A / lambda_;
  Q.bottomRightCorner(n, n) = A / gamma_;
  const Vec cross = (vals_.Fv.cwiseProduct(vals_.Gu)).cwiseSqrt();
  for (Index i = 0; i < n; ++i) {
    Q(i, i) -= vals_.Fu[i];
    Q(n + i, n + i) -= vals_.Gv[i];
    Q(i, n + i) = -cross[i];
    Q(n + i, i) = -cross[i];
  }
  return Q;
}

Eigen::MatrixXd StabilityForm::reduced_matrix() const {
  Eigen::MatrixXd Q = op_->matrix() / lambda_;
  Q.diagonal() -= vals_.Fu + (vals_.Fv.cwiseProduct(vals_.Gu)).cwiseSqrt();
  return Q;
}

double StabilityForm::value(const GridFunction& zeta, const GridFunction& eta) const {
  const Vec cross = (vals_.Fv.cwiseProduct(vals_.Gu)).cwiseSqrt();
  const Vec pot = vals_.Fu.cwiseProduct(zeta.cwiseAbs2()) + vals_.Gv.cwiseProduct(eta.cwiseAbs2()) +
                  2.0 * cross.cwiseProduct(zeta).cwiseProduct(eta);
  return energy_form(*op_, zeta, zeta) / lambda_ + energy_form(*op_, eta, eta) / gamma_ -
         integral(*op_, pot);
}

Eigenpair smallest_eigenpair(const Eigen::MatrixXd& Q) {
  const Index n = Q.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(Q);
  if (llt.info() == Eigen::Success) {
    Vec x = Vec::Ones(n).normalized();
    double mu_prev = 0.0;
    int settled = 0;
    for (int k = 0; k < 5000; ++k) {
      Vec y = llt.solve(x);
      const double mu = 1.0 / x.dot(y);
      x = y.normalized();
      if (std::abs(mu - mu_prev) <= 1e-15 * std::abs(mu)) {
        if (++settled >= 2) return {x.dot(Q * x), x};
      } else {
        settled = 0;
      }
      mu_prev = mu;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "symmetric eigensolver failed");
  Vec x = es.eigenvectors().col(0);
  if (x.sum() < 0.0) x = -x;
  return {es.eigenvalues()[0], x};
}

double stability_indicator(const StabilityForm& form) { return smallest_eigenpair(form.matrix()).value; }

double reduced_stability_indicator(const StabilityForm& form) {
  return smallest_eigenpair(form.reduced_matrix()).value;
}

EstimateReport make_report(std::string name, double lhs, double rhs, double tol) {
  EstimateReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.pass = std::isfinite(r.slack) && r.slack >= -tol * std::max(std::abs(lhs), std::abs(rhs));
  return r;
}

std::vector<TestPair> default_test_bank(const DiscreteOperator& op, const SystemSpec& system,
                                        const BranchRecord& rec) {
  const Grid& g = op.grid();
  const Index n = static_cast<Index>(g.size());
  const double R = g.R();
  auto shape = [&](auto fn) {
    Vec z(n);
    for (Index i = 0; i < n; ++i) z[i] = fn(g.node(static_cast<std::size_t>(i)));
    return z;
  };
  auto hat = [&](double c) {
    return shape([=](double x) { return std::max(0.0, 1.0 - std::abs(x - c) / (0.25 * R)); });
  };
  const Vec zero = Vec::Zero(n);
  const Vec bump = shape([=](double x) { return std::pow(1.0 - (x / R) * (x / R), 2); });
  const Vec cosine = shape([=](double x) { return std::cos(0.5 * M_PI * x / R); });
  const Vec hl = hat(-0.5 * R), hc = hat(0.0), hr = hat(0.5 * R);

  std::vector<TestPair> bank{{"zero", zero, zero},
                             {"bump", bump, bump},
                             {"cosine", cosine, cosine},
                             {"hat_left", hl, hl},
                             {"hat_center", hc, hc},
                             {"hat_right", hr, hr},
                             {"hat_split", hl, hr},
                             {"bump_u_only", bump, zero},
                             {"bump_v_only", zero, bump},
                             {"bump_opposed", bump, -bump},
                             {"constant", Vec::Ones(n), Vec::Ones(n)}};

  const StabilityForm form(op, system, rec.lambda, rec.gamma, rec.u, rec.v);
  const Eigenpair gs = smallest_eigenpair(form.matrix());
  bank.push_back({"ground_state", gs.vector.head(n), gs.vector.tail(n)});

  const Vec& u = rec.u;
  const Vec& v = rec.v;
  const Vec one = Vec::Ones(n);
  switch (system.family()) {
    case Family::Gelfand:
      for (double t : {1.0, 1.5, 2.0})
        bank.push_back({tag("exp_t", t), ((0.5 * t) * u).array().exp().matrix() - one,
                        ((0.5 * t) * v).array().exp().matrix() - one});
      break;
    case Family::LaneEmden:
      for (double t : {system.p(), 1.5, 2.0})
        bank.push_back({tag("power_t", t), pow_vec(one + u, 0.5 * (t + 1.0)) - one,
                        pow_vec(one + v, 0.5 * (t + 1.0)) - one});
      break;
    case Family::Mems:
      for (double t : {system.p(), 1.5, 2.0})
        bank.push_back({tag("mems_t", t), pow_vec(one - u, 0.5 * (1.0 - t)) - one,
                        pow_vec(one - v, 0.5 * (1.0 - t)) - one});
      break;
    case Family::Gradient: {
      const double a = system.f().d1(0.0), b = system.g().d1(0.0);
      Vec z(n), e(n);
      for (Index i = 0; i < n; ++i) {
        z[i] = system.f().d1(u[i]) - a;
        e[i] = system.g().d1(v[i]) - b;
      }
      bank.push_back({"derivative_shift", z, e});
      break;
    }
  }
  return bank;
}

std::vector<EstimateReport> check_corollary_inequality(const DiscreteOperator& op,
                                                       const SystemSpec& system,
                                                       const BranchRecord& rec,
                                                       const std::vector<TestPair>& bank, double tol) {
  const StabilityForm form(op, system, rec.lambda, rec.gamma, rec.u, rec.v);
  const SystemValues& sv = form.values();
  const Vec cross = (sv.Fv.cwiseProduct(sv.Gu)).cwiseSqrt();
  const double lam = rec.lambda, gam = rec.gamma;
  std::vector<EstimateReport> out;
  for (const TestPair& tp : bank) {
    const double Ez = energy_form(op, tp.zeta, tp.zeta);
    const double Ee = energy_form(op, tp.eta, tp.eta);
    if (system.family() != Family::Gradient) {
      // √(λγ) ∫ √(F_v G_u) ζ² <= E(ζ, ζ)
      const double lhs = std::sqrt(lam * gam) * integral(op, cross.cwiseProduct(tp.zeta.cwiseAbs2()));
      EstimateReport r = make_report("single[" + tp.name + "]", lhs, Ez, tol);
      r.quantities = {{"energy", Ez}};
      out.push_back(std::move(r));
    }
    const Vec pot = sv.Fu.cwiseProduct(tp.zeta.cwiseAbs2()) + sv.Gv.cwiseProduct(tp.eta.cwiseAbs2()) +
                    2.0 * cross.cwiseProduct(tp.zeta).cwiseProduct(tp.eta);
    EstimateReport r = make_report("pair[" + tp.name + "]", integral(op, pot), Ez / lam + Ee / gam, tol);
    r.quantities = {{"energy_zeta", Ez}, {"energy_eta", Ee}};
    out.push_back(std::move(r));
  }
  return out;
}

double product_bound(double A, double B, double D, double theta) {
  if (!(A > 0.0) || B < 0.0 || D < 0.0 || !(theta >= 0.0 && theta < 1.0))
    throw Error(ErrorCode::InvalidArgument, "product bound needs A > 0, B, D >= 0, 0 <= theta < 1");
  const double z = (B + std::sqrt(B * B + 4.0 * A * D)) / (2.0 * A);
  return std::pow(z, 1.0 / (1.0 - theta));
}

std::vector<EstimateReport> check_integral_estimates(const DiscreteOperator& op, const SystemSpec& system,
                                                     const BranchRecord& rec, double t,
                                                     const std::vector<double>& epsilons, double tol) {
  if (epsilons.empty()) throw Error(ErrorCode::InvalidArgument, "epsilon sweep is empty");
  const Index n = static_cast<Index>(op.size());
  if (rec.u.size() != n || rec.v.size() != n) throw Error(ErrorCode::GridMismatch, "record does not match grid");
  const Vec& u = rec.u;
  const Vec& v = rec.v;
  const Vec one = Vec::Ones(n);
  const double lam = rec.lambda, gam = rec.gamma, rlg = std::sqrt(lam * gam);
  const double omega = static_cast<double>(n) * op.grid().h();
  auto I = [&](const Vec& f) { return integral(op, f); };
  auto E = [&](const Vec& f, const Vec& g) { return energy_form(op, f, g); };
  std::vector<EstimateReport> out;

  auto chain = [&](std::string name, const Vec& coef, const Vec& zeta, double lhs_scale, double rhs) {
    const double lhs = lhs_scale * I(coef.cwiseProduct(zeta.cwiseAbs2()));
    EstimateReport r = make_report(std::move(name), lhs, rhs, tol);
    r.quantities = {{"energy", E(zeta, zeta)}};
    return r;
  };

  switch (system.family()) {
    case Family::Gelfand: {
      if (!(t > 0.5)) throw Error(ErrorCode::DomainError, "exponential moments need t > 1/2");
      const Vec eu = u.array().exp().matrix(), ev = v.array().exp().matrix();
      const Vec half = (0.5 * (u + v)).array().exp().matrix();
      const double Iuv = I(eu.cwiseProduct(ev)), K = I(half);
      const Vec zu = (0.5 * u).array().exp().matrix() - one;
      const Vec zv = (0.5 * v).array().exp().matrix() - one;
      out.push_back(chain("exp_chain_u", half, zu, rlg, 0.25 * lam * Iuv));
      out.back().quantities.push_back({"quarter_pairing", 0.25 * E(eu - one, u)});
      out.push_back(chain("exp_chain_v", half, zv, rlg, 0.25 * gam * Iuv));
      out.back().quantities.push_back({"quarter_pairing", 0.25 * E(ev - one, v)});
      const double X1 = I(half.cwiseProduct(eu)), X2 = I(half.cwiseProduct(ev));
      out.push_back(make_report("exp_young_u", 2.0 * rlg * X1, lam * Iuv + 8.0 * rlg * K, tol));
      out.push_back(make_report("exp_young_v", 2.0 * rlg * X2, gam * Iuv + 8.0 * rlg * K, tol));
      out.push_back(make_report("exp_cauchy_schwarz", Iuv * Iuv, X1 * X2, 1e-12));
      // a = 2√(λγ), k = 1, m = 8√(λγ), θ = 1/2
      out.push_back(product_report("exp_product_bound", Iuv, K, lam, gam, omega, 0.5, 1.0,
                                   {{2.0 * rlg, 8.0 * rlg}}, tol));

      const Vec X_int = ((t + 0.5) * u + 0.5 * v).array().exp().matrix();
      const Vec Y_int = ((t + 0.5) * v + 0.5 * u).array().exp().matrix();
      const double X = I(X_int), Y = I(Y_int), Z = I(eu), W = I(ev);
      const double a1 = (2.0 * t - 1.0) / (2.0 * t), a2 = 1.0 / (2.0 * t);
      const std::vector<std::pair<std::string, double>> q{{"X", X}, {"Y", Y}, {"Z", Z}, {"W", W}, {"t", t}};
      const Vec zt = ((0.5 * t) * u).array().exp().matrix() - one;
      out.push_back(chain("exp_moment_chain", half, zt, rlg,
                          0.25 * t * lam * I(((t * u).array().exp().matrix() - one).cwiseProduct(ev))));
      for (int row = 0; row < 2; ++row) {
        const double P = row == 0 ? X : Y, Q = row == 0 ? Y : X;
        const double mult = row == 0 ? lam : gam, C_over_eps = row == 0 ? gam : lam;
        const double mass = row == 0 ? Z : W;
        EstimateReport r = best_over_eps(epsilons, [&](double e) {
          EstimateReport rr = make_report(row == 0 ? "exp_moment_X" : "exp_moment_Y", rlg * P,
                                          (0.25 * t + e) * mult * std::pow(P, a1) * std::pow(Q, a2) +
                                              C_over_eps / e * mass,
                                          tol);
          rr.quantities = q;
          rr.quantities.push_back({"epsilon", e});
          return rr;
        });
        out.push_back(std::move(r));
      }
      out.push_back(make_report("exp_moment_holder", I((t * u + v).array().exp().matrix()),
                                std::pow(X, a1) * std::pow(Y, a2), 1e-10));
      break;
    }

    case Family::LaneEmden:
    case Family::Mems: {
      if (!(t > 1.0)) throw Error(ErrorCode::DomainError, "power moments need t > 1");
      const bool mems = system.family() == Family::Mems;
      const double p = system.p();
      const char* pre = mems ? "mems" : "power";
      auto nm = [&](const char* s) { return std::string(pre) + "_" + s; };
      if (mems && std::max(u.maxCoeff(), v.maxCoeff()) > 1.0 - 1e-8) {
        EstimateReport r;
        r.name = nm("estimates");
        r.note = "ConstraintProximity";
        out.push_back(r);
        return out;
      }
      // base = 1 + u or 1 - u; sgn flips the exponents for the singular family
      const double sgn = mems ? -1.0 : 1.0;
      const Vec bu = mems ? Vec(one - u) : Vec(one + u);
      const Vec bv = mems ? Vec(one - v) : Vec(one + v);
      const Vec w = pow_vec(bu.cwiseProduct(bv), sgn * 0.5 * (mems ? p + 1.0 : p - 1.0));
      const Vec Fu_full = pow_vec(bu, sgn * p), Fv_full = pow_vec(bv, sgn * p);
      const double Iuv = I(Fu_full.cwiseProduct(Fv_full)), Zw = I(w);
      const double k = mems ? (p - 1.0) * (p - 1.0) / (4.0 * p) : (p + 1.0) * (p + 1.0) / (4.0 * p);
      const double zexp = mems ? 0.5 * (1.0 - p) : 0.5 * (p + 1.0);
      const Vec zu = pow_vec(bu, zexp) - one, zv = pow_vec(bv, zexp) - one;
      out.push_back(chain(nm("chain_u"), w, zu, p * rlg, k * lam * Iuv));
      out.push_back(chain(nm("chain_v"), w, zv, p * rlg, k * gam * Iuv));
      const Vec sq_u = pow_vec(bu, 2.0 * zexp), sq_v = pow_vec(bv, 2.0 * zexp);
      const double X1 = I(w.cwiseProduct(sq_u)), X2 = I(w.cwiseProduct(sq_v));
      for (int row = 0; row < 2; ++row) {
        const double Xr = row == 0 ? X1 : X2, mult = row == 0 ? lam : gam;
        out.push_back(best_over_eps(epsilons, [&](double e) {
          EstimateReport r = make_report(nm(row == 0 ? "young_u" : "young_v"), p * rlg * (1.0 - e) * Xr,
                                         k * mult * Iuv + p * rlg / e * Zw, tol);
          r.quantities = {{"X", Xr}, {"I", Iuv}, {"Zw", Zw}, {"epsilon", e}};
          return r;
        }));
      }
      out.push_back(make_report(nm("cauchy_schwarz"), Iuv * Iuv, X1 * X2, 1e-12));
      std::vector<std::pair<double, double>> a_m;
      for (double e : epsilons) a_m.push_back({p * rlg * (1.0 - e), p * rlg / e});
      const double theta = mems ? (p + 1.0) / (2.0 * p) : (p - 1.0) / (2.0 * p);
      out.push_back(product_report(nm("product_bound"), Iuv, Zw, lam, gam, omega, theta, k, a_m, tol));

      // moments at exponent t
      const double kt = mems ? (t - 1.0) * (t - 1.0) / (4.0 * t) : (t + 1.0) * (t + 1.0) / (4.0 * t);
      const double ztexp = mems ? 0.5 * (1.0 - t) : 0.5 * (t + 1.0);
      const Vec X_int = w.cwiseProduct(pow_vec(bu, 2.0 * ztexp));
      const Vec Y_int = w.cwiseProduct(pow_vec(bv, 2.0 * ztexp));
      const double X = I(X_int), Y = I(Y_int);
      const Vec target = pow_vec(bu, sgn * t).cwiseProduct(Fv_full);
      const Vec zt = pow_vec(bu, ztexp) - one;
      out.push_back(chain(nm("moment_chain"), w, zt, p * rlg,
                          kt * lam * I((pow_vec(bu, sgn * t) - one).cwiseProduct(Fv_full))));
      // Hölder weight 1/β on X
      const double num = mems ? 2.0 * t - p - 1.0 : 2.0 * t - p + 1.0;
      const double den = mems ? 2.0 * (t - 1.0) : 2.0 * (t + 1.0);
      if (num < 0.0) {
        for (const char* s : {"moment_X", "moment_Y", "moment_holder"})
          out.push_back(not_applicable(nm(s), "Hoelder exponent is negative for this (p, t)"));
        break;
      }
      const double inv_beta = num / den;
      const std::vector<std::pair<std::string, double>> q{{"X", X}, {"Y", Y}, {"Z", Zw}, {"t", t}};
      for (int row = 0; row < 2; ++row) {
        const double P = row == 0 ? X : Y, Q = row == 0 ? Y : X, mult = row == 0 ? lam : gam;
        out.push_back(best_over_eps(epsilons, [&](double e) {
          EstimateReport r = make_report(nm(row == 0 ? "moment_X" : "moment_Y"), rlg * p * (1.0 - e) * P,
                                         kt * mult * std::pow(P, inv_beta) * std::pow(Q, 1.0 - inv_beta) +
                                             rlg * p / e * Zw,
                                         tol);
          r.quantities = q;
          r.quantities.push_back({"epsilon", e});
          return r;
        }));
      }
      out.push_back(make_report(nm("moment_holder"), I(target),
                                std::pow(X, inv_beta) * std::pow(Y, 1.0 - inv_beta), 1e-10));
      break;
    }

    case Family::Gradient: {
      const ScalarNonlinearity& f = system.f();
      const ScalarNonlinearity& g = system.g();
      const double a = f.d1(0.0), b = g.d1(0.0);
      Vec lhs_int(n), rhs_int(n), diag(n);
      for (Index i = 0; i < n; ++i) {
        const double fu = f.value(u[i]), f1 = f.d1(u[i]), f2 = f.d2(u[i]);
        const double gv = g.value(v[i]), g1 = g.d1(v[i]), g2 = g.d2(v[i]);
        const double zeta = f1 - a, eta = g1 - b;
        lhs_int[i] = f2 * gv * zeta * zeta + fu * g2 * eta * eta + 2.0 * f1 * g1 * zeta * eta;
        rhs_int[i] = second_derivative_energy(f, u[i]) * f1 * gv + second_derivative_energy(g, v[i]) * fu * g1;
        diag[i] = f1 * g1 * zeta * eta;
      }
      out.push_back(make_report("gradient_stability", I(lhs_int), I(rhs_int), tol));
      const double d = I(diag);
      EstimateReport r;
      r.name = "gradient_boundedness";
      r.lhs = r.rhs = d;
      r.pass = std::isfinite(d);
      r.quantities = {{"integral", d}, {"a", a}, {"b", b}};
      out.push_back(r);
      break;
    }
  }
  for (EstimateReport& r : out) {
    if (!std::isfinite(r.lhs) || !std::isfinite(r.rhs)) {
      r.pass = false;
      if (system.family() == Family::Mems) r.note = "ConstraintProximity";
    }
  }
  return out;
}

double four_variable_margin(double a, double b, double c, double d) {
  const double lhs = (a + b) * (c * c / a + d * d / b);
  const double rhs = (c - d) * (c - d);
  const double scale = c * c + d * d + std::abs(b / a) * c * c + std::abs(a / b) * d * d;
  return (rhs - lhs) / std::max(scale, 1e-300);
}

double exponential_margin(double alpha, double beta) {
  // divided through by e^α
  const double dd = beta - alpha;
  const double lhs = std::pow(std::expm1(0.5 * dd), 2);
  const double rhs = 0.25 * std::expm1(dd) * dd;
  return (rhs - lhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

double power_margin(double alpha, double beta, double p) {
  // divided through by (1+β)^p
  const double y = 1.0 + beta;
  const double L = std::log1p((alpha - beta) / y);
  const double rhs = std::expm1(p * L) * (alpha - beta);
  const double lhs = 4.0 * p / ((p + 1.0) * (p + 1.0)) * y * std::pow(std::expm1(0.5 * (p + 1.0) * L), 2);
  return (rhs - lhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

double singular_power_margin(double alpha, double beta, double p) {
  // divided through by (1-β)^{-p}
  const double y = 1.0 - beta;
  const double L = std::log1p((beta - alpha) / y);  // log((1-α)/(1-β))
  const double rhs = std::expm1(-p * L) * (alpha - beta);
  const double lhs = 4.0 * p / ((p - 1.0) * (p - 1.0)) * y * std::pow(std::expm1(0.5 * (1.0 - p) * L), 2);
  return (rhs - lhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

double gradient_margin(const ScalarNonlinearity& f, double alpha, double beta) {
  const double dd = beta - alpha;
  double lhs = 0.0, rhs = 0.0;
  switch (f.kind()) {
    case ScalarKind::Exponential:  // divided by e^{2α}
      lhs = std::pow(std::expm1(dd), 2);
      rhs = 0.5 * std::expm1(2.0 * dd) * dd;
      break;
    case ScalarKind::Power: {  // f' = p y^{p-1}, h1 = p²(p-1)² y^{2p-3}/(2p-3); divided by p² y^{2p-2}
      const double p = f.exponent(), y = 1.0 + alpha, L = std::log1p(dd / y);
      lhs = std::pow(std::expm1((p - 1.0) * L), 2);
      const double e = 2.0 * p - 3.0;
      const double growth = e == 0.0 ? L : std::expm1(e * L) / e;
      rhs = (p - 1.0) * (p - 1.0) * growth * dd / y;
      break;
    }
    case ScalarKind::SingularPower: {  // f' = p y^{-p-1}, h1 = p²(p+1)² (y^{-2p-3} - 1)/(2p+3), y = 1-s
      const double p = f.exponent(), y = 1.0 - alpha, L = std::log1p(-dd / y);
      lhs = std::pow(std::expm1(-(p + 1.0) * L), 2);
      const double e = 2.0 * p + 3.0;
      rhs = (p + 1.0) * (p + 1.0) * std::expm1(-e * L) / e * dd / y;
      break;
    }
  }
  return (rhs - lhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

double second_derivative_energy(const ScalarNonlinearity& f, double t) {
  if (t == 0.0) return 0.0;
  auto sq = [&](double w) {
    const double d2 = f.d2(w);
    return d2 * d2;
  };
  const double lo = std::min(0.0, t), hi = std::max(0.0, t);
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(sq, lo, hi, 15, 1e-13);
  return t > 0.0 ? v : -v;
}

std::vector<InequalityReport> elementary_inequalities(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto U = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  constexpr double kFloor = -1e-12;

  auto run = [&](std::string name, auto draw) {
    InequalityReport r;
    r.name = std::move(name);
    r.samples = samples;
    r.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < samples; ++k) {
      std::vector<double> args;
      const double m = draw(args);
      if (m < r.worst_margin) r.worst_margin = m;
      if (!(m >= kFloor)) {
        if (r.violations++ == 0) r.witness = args;
      }
    }
    return r;
  };

  std::vector<InequalityReport> out;
  out.push_back(run("four_variable", [&](std::vector<double>& w) {
    double a = U(-10.0, 10.0);
    if (a == 0.0) a = 1.0;
    const double b = -std::copysign(U(1e-3, 10.0), a);
    const double c = U(-10.0, 10.0), d = U(-10.0, 10.0);
    w = {a, b, c, d};
    return four_variable_margin(a, b, c, d);
  }));
  out.push_back(run("exponential", [&](std::vector<double>& w) {
    const double al = U(-20.0, 20.0), be = U(-20.0, 20.0);
    w = {al, be};
    return exponential_margin(al, be);
  }));
  out.push_back(run("power", [&](std::vector<double>& w) {
    const double p = U(1.01, 8.0), al = U(-1.0 + 1e-9, 10.0), be = U(-1.0 + 1e-9, 10.0);
    w = {al, be, p};
    return power_margin(al, be, p);
  }));
  out.push_back(run("singular_power", [&](std::vector<double>& w) {
    const double p = U(1.05, 8.0), al = U(-5.0, 1.0 - 1e-6), be = U(-5.0, 1.0 - 1e-6);
    w = {al, be, p};
    return singular_power_margin(al, be, p);
  }));
  out.push_back(run("gradient", [&](std::vector<double>& w) {
    const int kind = static_cast<int>(U(0.0, 3.0));
    double al, be, p = 0.0;
    double m;
    if (kind == 0) {
      al = U(-10.0, 10.0);
      be = U(-10.0, 10.0);
      m = gradient_margin(ScalarNonlinearity::exponential(), al, be);
    } else if (kind == 1) {
      p = U(1.6, 6.0);
      al = U(0.0, 10.0);
      be = U(0.0, 10.0);
      m = gradient_margin(ScalarNonlinearity::power(p), al, be);
    } else {
      p = U(1.05, 6.0);
      al = U(0.0, 0.95);
      be = U(0.0, 0.95);
      m = gradient_margin(ScalarNonlinearity::singular_power(p), al, be);
    }
    w = {static_cast<double>(kind), al, be, p};
    return m;
  }));
  return out;
}

}  // namespace nlx
