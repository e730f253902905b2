#include "nlx/solve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "nlx/error.hpp"
#include "nlx/verify.hpp"

namespace nlx {
namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Eigen::Index;

constexpr double kInf = std::numeric_limits<double>::infinity();

double sup(const Vec& w) { return w.size() ? w.cwiseAbs().maxCoeff() : 0.0; }

double default_cap(const SystemSpec& system) {
  const bool exp_like = system.f().kind() == ScalarKind::Exponential ||
                        system.g().kind() == ScalarKind::Exponential;
  return exp_like ? 50.0 : 1e8;
}

struct Limits {
  double cap;
  double top;     // upper end of the admissible box minus the margin
  double bottom;  // (1+t)^p needs t > -1; overshooting Newton steps can get there
};

double lower_end(const SystemSpec& system) {
  const bool power = system.f().kind() == ScalarKind::Power || system.g().kind() == ScalarKind::Power;
  return power ? -1.0 : -kInf;
}

void check_state(const Vec& u, const Vec& v, const Limits& lim) {
  if (!u.allFinite() || !v.allFinite()) throw Error(ErrorCode::NoSolution, "iterate is not finite");
  const double m = std::max(u.maxCoeff(), v.maxCoeff());
  if (m > lim.top) throw Error(ErrorCode::ConstraintHit, "iterate left the admissible box");
  if (m > lim.cap) throw Error(ErrorCode::NoSolution, "iterate exceeded the blow-up cap");
  if (std::min(u.minCoeff(), v.minCoeff()) <= lim.bottom)
    throw Error(ErrorCode::NoSolution, "iterate left the domain of the nonlinearity");
}

// Newton updates may overshoot the MEMS box; shrink them back inside it.
double damp_into_box(const Vec& w, const Vec& d, double top) {
  double a = 1.0;
  for (int k = 0; k < 60 && (w + a * d).maxCoeff() > top; ++k) a *= 0.5;
  return a;
}

}  // namespace

double residual_norm(const DiscreteOperator& op, const SystemSpec& system, double lambda, double gamma,
                     const GridFunction& u, const GridFunction& v) {
  const SystemValues sv = system.eval(u, v);
  const Vec& A_u = op.apply(u);
  const Vec& A_v = op.apply(v);
  const double scale = std::max({1.0, lambda * sup(sv.F), gamma * sup(sv.G)});
  return std::max(sup(A_u - lambda * sv.F), sup(A_v - gamma * sv.G)) / scale;
}

BranchRecord minimal_solution(const DiscreteOperator& op, const SystemSpec& system, double lambda,
                              double gamma, const SolverOptions& opts) {
  const Vec z = Vec::Zero(static_cast<Index>(op.size()));
  return minimal_solution(op, system, lambda, gamma, z, z, opts);
}

BranchRecord minimal_solution(const DiscreteOperator& op, const SystemSpec& system, double lambda,
                              double gamma, const GridFunction& u0, const GridFunction& v0,
                              const SolverOptions& opts) {
  const Index n = static_cast<Index>(op.size());
  if (u0.size() != n || v0.size() != n) throw Error(ErrorCode::GridMismatch, "initial state does not match grid");
  if (!(lambda > 0.0 && gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda and gamma must be positive");
  if (!(opts.tol > 0.0) || opts.newton_max_iters < 1 || opts.monotone_max_iters < 0)
    throw Error(ErrorCode::InvalidArgument, "bad solver options");
  const bool scalar = opts.scalar_reduction;
  if (scalar && !(system.symmetric() && lambda == gamma))
    throw Error(ErrorCode::InvalidArgument, "scalar reduction needs a symmetric system with lambda = gamma");
  if (u0.minCoeff() < 0.0 || v0.minCoeff() < 0.0)
    throw Error(ErrorCode::InvalidArgument, "initial state must be nonnegative");

  const Limits lim{opts.blowup_cap > 0.0 ? opts.blowup_cap : default_cap(system),
                   std::isfinite(system.upper_bound()) ? system.upper_bound() - opts.constraint_margin : kInf,
                   lower_end(system) + opts.constraint_margin};
  const Mat& A = op.matrix();

  Vec u = u0, v = scalar ? u0 : v0;
  check_state(u, v, lim);

  // Monotone phase. Any shift c >= 0 keeps the map order preserving because F, G
  // are nondecreasing in both arguments; the shift only matters for (H).
  BranchRecord rec;
  Eigen::LLT<Mat> llt;
  double c_prev = -1.0;
  for (int k = 0; k < opts.monotone_max_iters; ++k) {
    const SystemValues sv = system.eval(u, v);
    const double c = 1.1 * std::max(lambda * sv.Fu.maxCoeff(), gamma * sv.Gv.maxCoeff());
    if (c != c_prev) {
      Mat M = A;
      M.diagonal().array() += c;
      llt.compute(M);
      if (llt.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "shifted operator not SPD");
      c_prev = c;
    }
    Vec un = llt.solve(lambda * sv.F + c * u);
    Vec vn = scalar ? un : Vec(llt.solve(gamma * sv.G + c * v));
    const double scale = std::max(1.0, std::max(sup(un), sup(vn)));
    check_state(un, vn, lim);
    if ((un - u).minCoeff() < -1e-12 * scale || (vn - v).minCoeff() < -1e-12 * scale)
      throw Error(ErrorCode::MonotonicityViolation, "monotone iteration decreased");
    const double delta = std::max(sup(un - u), sup(vn - v));
    u = std::move(un);
    v = std::move(vn);
    rec.monotone_iters = k + 1;
    if (delta <= opts.monotone_tol * scale) break;
  }
  const Vec sub_u = u, sub_v = v;

  // Newton polish on the coupled (or reduced) system.
  bool converged = false, polished = false;
  for (int it = 0; it <= opts.newton_max_iters; ++it) {
    const double res = residual_norm(op, system, lambda, gamma, u, v);
    if (!std::isfinite(res)) throw Error(ErrorCode::NoSolution, "residual is not finite");
    if (res <= opts.tol && (polished || res <= 1e-3 * opts.tol)) {
      converged = true;
      break;
    }
    if (res <= opts.tol) polished = true;
    if (it == opts.newton_max_iters) break;
    const SystemValues sv = system.eval(u, v);
    if (scalar) {
      Mat J = A;
      J.diagonal() -= lambda * (sv.Fu + sv.Fv);
      const Vec r = A * u - lambda * sv.F;
      const Vec d = J.partialPivLu().solve(-r);
      if (!d.allFinite()) throw Error(ErrorCode::NoSolution, "Newton step is not finite");
      u += damp_into_box(u, d, lim.top) * d;
      v = u;
    } else {
      Mat J = Mat::Zero(2 * n, 2 * n);
      J.topLeftCorner(n, n) = A;
      J.bottomRightCorner(n, n) = A;
      for (Index i = 0; i < n; ++i) {
        J(i, i) -= lambda * sv.Fu[i];
        J(i, n + i) = -lambda * sv.Fv[i];
        J(n + i, i) = -gamma * sv.Gu[i];
        J(n + i, n + i) -= gamma * sv.Gv[i];
      }
      Vec r(2 * n);
      r.head(n) = A * u - lambda * sv.F;
      r.tail(n) = A * v - gamma * sv.G;
      const Vec d = J.partialPivLu().solve(-r);
      if (!d.allFinite()) throw Error(ErrorCode::NoSolution, "Newton step is not finite");
      Vec w(2 * n);
      w << u, v;
      w += damp_into_box(w, d, lim.top) * d;
      u = w.head(n);
      v = w.tail(n);
    }
    rec.newton_iters = it + 1;
    check_state(u, v, lim);
  }
  if (!converged) throw Error(ErrorCode::NoSolution, "Newton did not converge");

  const double scale = std::max(1.0, std::max(sup(u), sup(v)));
  if ((u - sub_u).minCoeff() < -1e-9 * scale || (v - sub_v).minCoeff() < -1e-9 * scale)
    throw Error(ErrorCode::NoSolution, "Newton limit lies below the monotone subsolution");
  if (u.minCoeff() < 0.0 || v.minCoeff() < 0.0) throw Error(ErrorCode::NoSolution, "negative solution");

  rec.lambda = lambda;
  rec.gamma = gamma;
  rec.residual_norm = residual_norm(op, system, lambda, gamma, u, v);
  rec.u = std::move(u);
  rec.v = std::move(v);
  if (opts.compute_stability) {
    const StabilityForm form(op, system, lambda, gamma, rec.u, rec.v);
    rec.stability_indicator = scalar ? reduced_stability_indicator(form) : stability_indicator(form);
    if (!(rec.stability_indicator > 0.0))
      throw Error(ErrorCode::NoSolution, "solution is not stable, so it is not minimal");
  }
  return rec;
}

std::string_view to_string(BranchStatus s) noexcept {
  switch (s) {
    case BranchStatus::FoldFound: return "FoldFound";
    case BranchStatus::StepLimit: return "StepLimit";
    case BranchStatus::ConstraintHit: return "ConstraintHit";
  }
  return "?";
}

BranchStatus parse_branch_status(std::string_view name) {
  for (BranchStatus s : {BranchStatus::FoldFound, BranchStatus::StepLimit, BranchStatus::ConstraintHit})
    if (to_string(s) == name) return s;
  throw Error(ErrorCode::InvalidArgument, "unknown branch status '" + std::string(name) + "'");
}

double Branch::lambda_star_estimate() const noexcept {
  return std::isfinite(lambda_hi) ? 0.5 * (lambda_lo + lambda_hi) : lambda_lo;
}

Branch continue_branch(const DiscreteOperator& op, const SystemSpec& system, double sigma,
                       const StepPolicy& policy, const SolverOptions& opts) {
  if (!(sigma > 0.0 && std::isfinite(sigma))) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  if (!(policy.growth > 1.0) || !(policy.resolution > 0.0) || policy.max_steps < 1 || policy.initial_lambda < 0.0)
    throw Error(ErrorCode::InvalidArgument, "bad step policy");
  if (opts.scalar_reduction && sigma != 1.0)
    throw Error(ErrorCode::InvalidArgument, "scalar reduction needs sigma = 1");

  Branch br;
  br.sigma = sigma;
  br.lambda_hi = kInf;
  double lambda = policy.initial_lambda;
  if (lambda == 0.0) lambda = 1e-3 * smallest_eigenpair(op.matrix()).value / std::max(1.0, sigma);

  const Vec zero = Vec::Zero(static_cast<Index>(op.size()));
  try {
    br.records.push_back(minimal_solution(op, system, lambda, sigma * lambda, zero, zero, opts));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoSolution || e.code() == ErrorCode::ConstraintHit)
      throw Error(ErrorCode::InfeasibleStart, std::string("first continuation step failed: ") + e.what());
    throw;
  }
  br.lambda_lo = lambda;

  ErrorCode last_failure = ErrorCode::NoSolution;
  int calls = 1;
  for (;;) {
    if (std::isfinite(br.lambda_hi) && br.lambda_hi - br.lambda_lo <= policy.resolution * br.lambda_lo) {
      br.status = BranchStatus::FoldFound;
      break;
    }
    if (calls >= policy.max_steps) {
      br.status = BranchStatus::StepLimit;
      break;
    }
    lambda = std::isfinite(br.lambda_hi) ? 0.5 * (br.lambda_lo + br.lambda_hi) : br.lambda_lo * policy.growth;
    const BranchRecord& prev = br.records.back();
    ++calls;
    try {
      BranchRecord rec = minimal_solution(op, system, lambda, sigma * lambda, prev.u, prev.v, opts);
      const double scale = std::max(1.0, std::max(rec.sup_u(), rec.sup_v()));
      if ((rec.u - prev.u).minCoeff() < -1e-8 * scale || (rec.v - prev.v).minCoeff() < -1e-8 * scale)
        throw Error(ErrorCode::MonotonicityViolation, "minimal solution decreased along the branch");
      br.records.push_back(std::move(rec));
      br.lambda_lo = lambda;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoSolution && e.code() != ErrorCode::ConstraintHit) throw;
      br.lambda_hi = lambda;
      last_failure = e.code();
    }
  }
  const BranchRecord& last = br.records.back();
  if (last_failure == ErrorCode::ConstraintHit && std::isfinite(system.upper_bound()) &&
      std::max(last.sup_u(), last.sup_v()) >= system.upper_bound() - 1e-3)
    br.status = BranchStatus::ConstraintHit;
  return br;
}

namespace {

// Lagrange weights at t for three distinct nodes.
std::array<double, 3> lagrange(const std::array<double, 3>& x, double t) {
  std::array<double, 3> w{};
  for (int i = 0; i < 3; ++i) {
    double l = 1.0;
    for (int j = 0; j < 3; ++j)
      if (j != i) l *= (t - x[j]) / (x[i] - x[j]);
    w[i] = l;
  }
  return w;
}

std::pair<Vec, Vec> interpolate(const Branch& br, std::size_t first, double lambda_star, double lambda) {
  std::array<double, 3> t{};
  for (int i = 0; i < 3; ++i) t[i] = std::sqrt(std::max(0.0, lambda_star - br.records[first + i].lambda));
  if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
    throw Error(ErrorCode::NumericalFailure, "records coincide in sqrt(lambda* - lambda)");
  const auto w = lagrange(t, std::sqrt(lambda_star - lambda));
  Vec u = Vec::Zero(br.records[first].u.size()), v = u;
  for (int i = 0; i < 3; ++i) {
    u += w[i] * br.records[first + i].u;
    v += w[i] * br.records[first + i].v;
  }
  return {u, v};
}

void require_records(const Branch& br) {
  if (br.records.size() < 3) throw Error(ErrorCode::NeedMoreRecords, "extrapolation needs at least 3 records");
  if (!std::isfinite(br.lambda_hi)) throw Error(ErrorCode::NeedMoreRecords, "branch has no fold bracket");
}

}  // namespace

ExtremalEstimate extremal_estimate(const DiscreteOperator& op, const SystemSpec& system,
                                   const Branch& branch) {
  require_records(branch);
  ExtremalEstimate ex;
  ex.lambda_star = branch.lambda_star_estimate();
  ex.gamma_star = branch.sigma * ex.lambda_star;
  std::tie(ex.u, ex.v) = interpolate(branch, branch.records.size() - 3, ex.lambda_star, ex.lambda_star);
  ex.sup_u = ex.u.maxCoeff();
  ex.sup_v = ex.v.maxCoeff();
  const Grid& g = op.grid();
  if (static_cast<std::size_t>(ex.u.size()) != g.size()) throw Error(ErrorCode::GridMismatch, "branch grid differs");
  try {
    const SystemValues sv = system.eval(ex.u, ex.v);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double d = std::pow(g.boundary_distance(i), op.order());
      ex.weak_F += sv.F[static_cast<Index>(i)] * d;
      ex.weak_G += sv.G[static_cast<Index>(i)] * d;
    }
    ex.weak_F *= g.h();
    ex.weak_G *= g.h();
  } catch (const Error&) {
    ex.weak_F = ex.weak_G = kInf;  // extrapolated past the MEMS box
  }
  return ex;
}

std::pair<GridFunction, GridFunction> evaluate_branch_at(const Branch& branch, double lambda) {
  require_records(branch);
  const double ls = branch.lambda_star_estimate();
  if (!(lambda > 0.0 && lambda <= ls)) throw Error(ErrorCode::InvalidArgument, "lambda outside (0, lambda*]");
  const auto& r = branch.records;
  std::size_t k = 0;
  for (std::size_t i = 1; i < r.size(); ++i)
    if (std::abs(r[i].lambda - lambda) < std::abs(r[k].lambda - lambda)) k = i;
  const std::size_t first = std::min(k == 0 ? 0 : k - 1, r.size() - 3);
  return interpolate(branch, first, ls, lambda);
}

}  // namespace nlx
