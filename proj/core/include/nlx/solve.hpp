#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "nlx/discretize.hpp"
#include "nlx/record.hpp"
#include "nlx/systems.hpp"

namespace nlx {

struct SolverOptions {
  double tol = 1e-10;              // sup-norm residual, relative to max(1, |λF|, |γG|)
  int monotone_max_iters = 200;
  double monotone_tol = 1e-9;      // stop the monotone phase early once updates are this small
  int newton_max_iters = 30;
  double blowup_cap = 0.0;         // 0: 50 for exponential nonlinearities, 1e8 otherwise
  double constraint_margin = 1e-8; // MEMS: iterates must stay <= 1 - margin
  bool scalar_reduction = false;   // solve Lu = λφ(u) with φ(t) = F(t,t); needs λ = γ
  bool compute_stability = true;   // fill stability_indicator and reject unstable solutions
};

// Monotone iteration from a subsolution followed by Newton polish. The returned
// record lies above init and is stable whenever compute_stability is set.
// Throws NoSolution (no convergence or blow-up) or ConstraintHit (MEMS box).
BranchRecord minimal_solution(const DiscreteOperator& op, const SystemSpec& system, double lambda,
                              double gamma, const GridFunction& u0, const GridFunction& v0,
                              const SolverOptions& opts = {});
BranchRecord minimal_solution(const DiscreteOperator& op, const SystemSpec& system, double lambda,
                              double gamma, const SolverOptions& opts = {});

// Sup norm of (Au - λF, Av - γG) relative to max(1, |λF|, |γG|).
double residual_norm(const DiscreteOperator& op, const SystemSpec& system, double lambda, double gamma,
                     const GridFunction& u, const GridFunction& v);

struct StepPolicy {
  double initial_lambda = 0.0;  // 0: 1e-3 μ₁(A) / max(1, σ)
  double growth = 2.0;          // step multiplier after each success before the first failure
  double resolution = 1e-4;     // stop once the bracket width <= resolution·λ
  int max_steps = 400;          // solver calls
};

enum class BranchStatus { FoldFound, StepLimit, ConstraintHit };
std::string_view to_string(BranchStatus s) noexcept;
BranchStatus parse_branch_status(std::string_view name);

struct Branch {
  std::vector<BranchRecord> records;  // strictly increasing λ
  double sigma = 1.0;
  double lambda_lo = 0.0;  // last success
  double lambda_hi = 0.0;  // smallest failure (inf if none)
  BranchStatus status = BranchStatus::StepLimit;

  double lambda_star_estimate() const noexcept;  // bracket midpoint, λ_lo without a failure
  double bracket_width() const noexcept { return lambda_hi - lambda_lo; }
};

// Natural-parameter continuation along γ = σλ: geometric steps, then bisection of
// [last success, first failure]. Throws InfeasibleStart if the first solve fails and
// MonotonicityViolation if an accepted record falls below its predecessor.
Branch continue_branch(const DiscreteOperator& op, const SystemSpec& system, double sigma,
                       const StepPolicy& policy = {}, const SolverOptions& opts = {});

struct ExtremalEstimate {
  double lambda_star = 0.0;
  double gamma_star = 0.0;
  GridFunction u, v;
  double sup_u = 0.0, sup_v = 0.0;
  double weak_F = 0.0;  // h Σ F(u*,v*) δ^s
  double weak_G = 0.0;
};

// Quadratic extrapolation in √(λ* - λ) through the three records closest to the fold.
ExtremalEstimate extremal_estimate(const DiscreteOperator& op, const SystemSpec& system,
                                   const Branch& branch);

// The same interpolant evaluated at λ <= λ*; reproduces records at their own λ.
std::pair<GridFunction, GridFunction> evaluate_branch_at(const Branch& branch, double lambda);

}  // namespace nlx
