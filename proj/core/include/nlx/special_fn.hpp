#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace nlx {

// ln|Γ(x)|. Throws DomainError at the poles x = 0, -1, -2, ...
double log_gamma(double x);

// Dimension bounds below which the extremal solution is bounded.
// All accept 0 < s <= 1 (s = 1 is the classical limit).
double threshold_gelfand(double s);
double threshold_lane_emden(double s, double p);
double threshold_mems(double s, double p);
double threshold_gradient(double s, double p, double q);

// T(t) = t + sqrt(t(t-1)), t >= 1.
double lundgren_T(double t);

enum class Verdict { Holds, Fails, Marginal };
std::string_view to_string(Verdict v) noexcept;

// Both sides of a Gamma-ratio criterion, kept in log space.
struct CriterionResult {
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  Verdict verdict = Verdict::Marginal;

  bool holds() const noexcept { return verdict == Verdict::Holds; }
  double lhs() const;
  double rhs() const;
};

// Relative band inside which a criterion is reported Marginal.
inline constexpr double kCriterionGuard = 1e-12;

CriterionResult gelfand_gamma_criterion(double n, double s);
CriterionResult lane_emden_gamma_criterion(double n, double s, double p);

// Upper dimension at which a criterion switches from Holds to Fails.
// Scans n upward from the domain edge with `step`, then bisects the last flip.
std::optional<double> gelfand_crossover(double s, double n_max = 200.0, double step = 0.01);
std::optional<double> lane_emden_crossover(double s, double p, double n_max = 200.0,
                                           double step = 0.01);

// λ = 2^{2s} Γ(n/2)Γ(1+s)/Γ((n-2s)/2); the profile log(1/|x|^{2s}) solves Lu = λ e^u.
double gelfand_singular_lambda(double n, double s);

struct LaneEmdenSingular {
  double beta = 0.0;    // 2s/(p-1)
  double A_pow = 0.0;   // A^{p-1}, the Gamma ratio
  double A = 0.0;
  double lambda = 0.0;  // L(A|x|^{-beta}) = lambda * (A|x|^{-beta})^p
};

inline constexpr double kSingularPMax = 1e3;

LaneEmdenSingular lane_emden_singular(double n, double s, double p,
                                      double p_max = kSingularPMax);

struct EmbeddingExponent {
  enum class Kind { Finite, AnyFinite, Unbounded };
  Kind kind = Kind::Finite;
  double q = 0.0;  // meaningful for Finite only
};

// L^r data gives an L^q solution with q = nr/(n-2rs).
EmbeddingExponent embedding_exponent(double n, double s, double r);

enum class BootstrapVerdict { Bounded, Inconclusive };
std::string_view to_string(BootstrapVerdict v) noexcept;

struct BootstrapTrace {
  std::vector<double> exponents;  // exponents[0] is the seed p0
  BootstrapVerdict verdict = BootstrapVerdict::Inconclusive;
  std::size_t steps = 0;
};

// n/(n-2s): the integrability every weak solution starts from.
double bootstrap_seed(double n, double s);

// p_{k+1} = 2 p_k n / (p_k (n-4s) + 2n).
// Bounded once a denominator reaches zero or an iterate climbs past n/(2s).
// With replay_stages the first three iterates use their closed forms
// 2n/(3n-8s), n/(2(n-3s)), 2n/(5n-16s); p0 must then equal bootstrap_seed(n, s).
BootstrapTrace nedev_bootstrap(double n, double s, double p0, std::size_t max_steps,
                               bool replay_stages = false);

struct ThresholdReport {
  double n = 0.0, s = 0.0, p = 0.0, q = 0.0;
  double gelfand_bound = 0.0;
  std::optional<double> lane_emden_bound;
  std::optional<double> mems_bound;
  std::optional<double> gradient_bound;
  std::optional<Verdict> gelfand_gamma;
  std::optional<Verdict> lane_emden_gamma;
  std::optional<double> singular_lambda;
  std::optional<double> singular_A;
};

// Fields whose inputs fall outside their domain are left empty.
ThresholdReport threshold_report(double n, double s, double p, double q);

}  // namespace nlx
