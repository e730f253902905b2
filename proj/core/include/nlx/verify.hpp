#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nlx/discretize.hpp"
#include "nlx/record.hpp"
#include "nlx/systems.hpp"

namespace nlx {

// Q[(ζ,η)] = (1/λ)E(ζ,ζ) + (1/γ)E(η,η) - ∫[F_u ζ² + G_v η² + 2√(F_v G_u) ζη]
// with the grid mass form M[(ζ,η)] = ∫(ζ² + η²). Dividing both by h leaves
// the symmetric matrix returned by matrix() against the identity.
class StabilityForm {
 public:
  StabilityForm(const DiscreteOperator& op, const SystemSpec& system, double lambda, double gamma,
                const GridFunction& u, const GridFunction& v);

  Eigen::MatrixXd matrix() const;
  // u = v, λ = γ: the form restricted to ζ = η, halved
  Eigen::MatrixXd reduced_matrix() const;
  double value(const GridFunction& zeta, const GridFunction& eta) const;

  const DiscreteOperator& op() const noexcept { return *op_; }
  double lambda() const noexcept { return lambda_; }
  double gamma() const noexcept { return gamma_; }
  const SystemValues& values() const noexcept { return vals_; }

 private:
  const DiscreteOperator* op_;
  double lambda_, gamma_;
  SystemValues vals_;
};

// Smallest eigenvalue μ₁ of Q against M; μ₁ >= 0 certifies the stability inequality
// over every discrete test pair.
double stability_indicator(const StabilityForm& form);
// The same on the diagonal reduction (σ = 1, u = v, symmetric systems).
double reduced_stability_indicator(const StabilityForm& form);

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;
};
// Smallest eigenpair of a symmetric matrix with nonpositive off-diagonal entries:
// Cholesky-backed inverse iteration from the positive vector, dense fallback.
Eigenpair smallest_eigenpair(const Eigen::MatrixXd& Q);

struct EstimateReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, double>> quantities;
  std::string note;
};

inline constexpr double kEstimateTolerance = 1e-8;

// slack = rhs - lhs; pass iff slack >= -tol * max(|lhs|, |rhs|)
EstimateReport make_report(std::string name, double lhs, double rhs, double tol = kEstimateTolerance);

struct TestPair {
  std::string name;
  GridFunction zeta, eta;
};

// Deterministic bank: zero, bumps, hats, constants, the ground state of the form,
// and the substitutions e^{tu/2}-1, (1+u)^{(t+1)/2}-1, (1-u)^{(1-t)/2}-1, f'(u)-a.
std::vector<TestPair> default_test_bank(const DiscreteOperator& op, const SystemSpec& system,
                                        const BranchRecord& rec);

// Family-specific single-function inequality (ζ only; η follows by symmetry) and the
// two-function form for every pair. One report per test entry.
std::vector<EstimateReport> check_corollary_inequality(const DiscreteOperator& op,
                                                       const SystemSpec& system,
                                                       const BranchRecord& rec,
                                                       const std::vector<TestPair>& bank,
                                                       double tol = kEstimateTolerance);

inline const std::vector<double> kDefaultEpsilons{0.01, 0.05, 0.1};

// Integral estimate chains for the record's family at auxiliary exponent t.
std::vector<EstimateReport> check_integral_estimates(const DiscreteOperator& op,
                                                     const SystemSpec& system,
                                                     const BranchRecord& rec, double t,
                                                     const std::vector<double>& epsilons = kDefaultEpsilons,
                                                     double tol = kEstimateTolerance);

// Largest y >= 0 with A y^{2-2θ} <= B y^{1-θ} + D (0 <= θ < 1).
double product_bound(double A, double B, double D, double theta);

struct InequalityReport {
  std::string name;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  // smallest normalized slack seen
  std::vector<double> witness;
};

// Five pointwise inequalities behind the stability and moment estimates,
// each sampled `samples` times from an mt19937_64 seeded with `seed`.
std::vector<InequalityReport> elementary_inequalities(std::size_t samples, std::uint64_t seed);

// Individual inequality forms, exposed for direct checks. Each returns rhs - lhs
// scaled by the magnitude of the terms (nonnegative when the inequality holds).
double four_variable_margin(double a, double b, double c, double d);
double exponential_margin(double alpha, double beta);
double power_margin(double alpha, double beta, double p);
double singular_power_margin(double alpha, double beta, double p);
double gradient_margin(const ScalarNonlinearity& f, double alpha, double beta);

// ∫_0^t f''(w)² dw by adaptive quadrature.
double second_derivative_energy(const ScalarNonlinearity& f, double t);

}  // namespace nlx
