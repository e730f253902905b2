#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "nlx/kernel.hpp"

namespace nlx {

using GridFunction = Eigen::VectorXd;

// Uniform interior nodes of (-R, R); the endpoints carry the zero exterior data.
class Grid {
 public:
  static Grid uniform(std::size_t n, double R = 1.0);
  // Accepts explicit nodes only when they form the uniform interior grid.
  static Grid from_nodes(const std::vector<double>& nodes, double R);

  std::size_t size() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  double R() const noexcept { return R_; }
  double node(std::size_t i) const noexcept { return -R_ + static_cast<double>(i + 1) * h_; }
  std::vector<double> nodes() const;
  // R - |x_i|
  double boundary_distance(std::size_t i) const noexcept;
  bool operator==(const Grid& o) const noexcept { return n_ == o.n_ && h_ == o.h_ && R_ == o.R_; }

 private:
  Grid(std::size_t n, double R);
  std::size_t n_;
  double R_;
  double h_;
};

enum class SingularRule {
  CellExact,  // exact kernel integrals against piecewise-linear data, corrected second difference
  Taylor2,    // second-order Taylor on the singular band, cell averages elsewhere
};
std::string_view to_string(SingularRule r) noexcept;
SingularRule parse_singular_rule(std::string_view name);

// (Lu)_i = Σ_j W_ij (u_i - u_j) + τ_i u_i with W_ij = ω_{|i-j|} (Toeplitz).
class DiscreteOperator {
 public:
  DiscreteOperator(Grid grid, double order, SingularRule rule, Eigen::VectorXd distance_weights,
                   Eigen::VectorXd exterior);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }
  double order() const noexcept { return s_; }
  SingularRule rule() const noexcept { return rule_; }

  double weight(std::size_t i, std::size_t j) const noexcept {
    return i == j ? 0.0 : omega_[static_cast<Eigen::Index>(i > j ? i - j : j - i)];
  }
  // ω_k for k = 0..N-1 (ω_0 = 0)
  const Eigen::VectorXd& distance_weights() const noexcept { return omega_; }
  const Eigen::VectorXd& exterior() const noexcept { return tau_; }
  Eigen::MatrixXd weights() const;
  // A = diag(ΣW + τ) - W, symmetric positive definite
  const Eigen::MatrixXd& matrix() const noexcept { return A_; }

  GridFunction apply(const GridFunction& u) const;

 private:
  Grid grid_;
  double s_;
  SingularRule rule_;
  Eigen::VectorXd omega_;
  Eigen::VectorXd tau_;
  Eigen::MatrixXd A_;
};

// Smallest s for which the corrected nearest-neighbour weight stays positive.
// Below it assemble() falls back to Taylor2 and reports that in rule().
double cell_exact_min_order();

DiscreteOperator assemble(const SpectralKernel& kernel, const Grid& grid,
                          SingularRule rule = SingularRule::CellExact);

// ½ Σ_ij W_ij (f_i-f_j)(g_i-g_j) h + Σ_i τ_i f_i g_i h  (= h <g, Lf>)
double energy_form(const DiscreteOperator& op, const GridFunction& f, const GridFunction& g);

// D_i = Σ_j W_ij (f_i-f_j)(g_i-g_j) + τ_i f_i g_i, the pairing over the whole line
// (exterior values are zero, so the exterior contributes τ_i f_i g_i).
GridFunction interaction_term(const DiscreteOperator& op, const GridFunction& f,
                              const GridFunction& g);

// L(fg) - f L g - g L f + D; identically zero up to rounding.
GridFunction product_rule_defect(const DiscreteOperator& op, const GridFunction& f,
                                 const GridFunction& g);

struct PvResult {
  double value = 0.0;
  double error = 0.0;
};

// ∫_0^∞ [2u(x) - u(x+y) - u(x-y)] J(y) dy by adaptive quadrature, a Taylor patch
// near y = 0 and a log-affine tail model beyond `truncation`.
PvResult pv_apply(const SpectralKernel& kernel, const std::function<double(double)>& u, double x,
                  double truncation = 1e6, double tolerance = 1e-10);

}  // namespace nlx
