#include "nlx/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "nlx/error.hpp"

namespace nlx {
namespace {
std::string fmt_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}
}  // namespace
namespace {

// Unit-spacing integrals of z^{m-1-2s}; written to survive s -> 1/2 and b/a -> 1.
double int_pow(double a, double b, double e) {
  // ∫_a^b z^{e-1} dz
  const double L = std::log(b / a);
  if (e == 0.0) return L;
  return std::pow(a, e) * std::expm1(e * L) / e;
}
double I0(double a, double b, double s) {  // ∫ z^{-1-2s}
  if (std::isinf(b)) return std::pow(a, -2.0 * s) / (2.0 * s);
  return int_pow(a, b, -2.0 * s);
}
double I1(double a, double b, double s) { return int_pow(a, b, 1.0 - 2.0 * s); }
double I2_unit(double s) { return 1.0 / (2.0 - 2.0 * s); }  // ∫_0^1 z^{1-2s}

// Σ_{k>=1} ∫_k^{k+1} (z-k)(k+1-z) z^{-1-2s} dz: the defect of linear interpolation
// against the kernel, removed from the nearest-neighbour weight.
double interpolation_defect(double s) {
  constexpr int K = 1024;
  double sum = 0.0;
  for (int k = K - 1; k >= 1; --k) {
    const double kk = k;
    sum += boost::math::quadrature::gauss<double, 15>::integrate(
        [&](double z) { return (z - kk) * (kk + 1.0 - z) * std::pow(z, -1.0 - 2.0 * s); }, kk,
        kk + 1.0);
  }
  // Euler-Maclaurin tail: G(K)/6 + g'(K)/360 with g = z^{-1-2s}
  const double Kd = K;
  sum += std::pow(Kd, -2.0 * s) / (12.0 * s) - (1.0 + 2.0 * s) * std::pow(Kd, -2.0 - 2.0 * s) / 360.0;
  return sum;
}

struct UnitWeights {
  Eigen::VectorXd omega;  // ω_0..ω_{N-1}, unit spacing
  Eigen::VectorXd tail;   // tail[K], K = 1..N: weight of an exterior node at distance K
  double boundary_adjust = 0.0;
  SingularRule rule;
};

UnitWeights hat_weights(std::size_t n, double s) {
  UnitWeights w;
  w.rule = SingularRule::CellExact;
  w.omega = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  w.tail = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n + 1));
  const double d = interpolation_defect(s);
  const double first = I2_unit(s) + 2.0 * I0(1, 2, s) - I1(1, 2, s);
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    w.omega[static_cast<Eigen::Index>(k)] =
        k == 1 ? first - d
               : (I1(kk - 1, kk, s) - (kk - 1) * I0(kk - 1, kk, s)) +
                     ((kk + 1) * I0(kk, kk + 1, s) - I1(kk, kk + 1, s));
  }
  for (std::size_t K = 1; K <= n; ++K) {
    const double kk = static_cast<double>(K);
    w.tail[static_cast<Eigen::Index>(K)] =
        K == 1 ? I2_unit(s) + I0(1, INFINITY, s)
               : I1(kk - 1, kk, s) - (kk - 1) * I0(kk - 1, kk, s) + I0(kk, INFINITY, s);
  }
  w.boundary_adjust = -d;
  return w;
}

UnitWeights taylor_weights(std::size_t n, double s) {
  UnitWeights w;
  w.rule = SingularRule::Taylor2;
  w.omega = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  w.tail = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n + 1));
  const double band = std::pow(1.5, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    w.omega[static_cast<Eigen::Index>(k)] = k == 1 ? band : I0(kk - 0.5, kk + 0.5, s);
  }
  for (std::size_t K = 1; K <= n; ++K) {
    const double kk = static_cast<double>(K);
    w.tail[static_cast<Eigen::Index>(K)] = K == 1 ? band + I0(1.5, INFINITY, s) : I0(kk - 0.5, INFINITY, s);
  }
  return w;
}

void check_aligned(const DiscreteOperator& op, const GridFunction& f) {
  if (static_cast<std::size_t>(f.size()) != op.size())
    throw Error(ErrorCode::GridMismatch, "grid function length " + std::to_string(f.size()) +
                                             " does not match " + std::to_string(op.size()) + " nodes");
}

}  // namespace

Grid::Grid(std::size_t n, double R) : n_(n), R_(R), h_(2.0 * R / static_cast<double>(n + 1)) {}

Grid Grid::uniform(std::size_t n, double R) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "grid needs at least one node");
  if (!(R > 0.0 && std::isfinite(R))) throw Error(ErrorCode::InvalidArgument, "half-width must be positive");
  return Grid(n, R);
}

Grid Grid::from_nodes(const std::vector<double>& nodes, double R) {
  Grid g = uniform(nodes.size(), R);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (std::abs(nodes[i] - g.node(i)) > 1e-14 * std::max(1.0, R) * 4.0)
      throw Error(ErrorCode::UnsupportedGrid, "only uniform interior grids are supported");
  }
  return g;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
  return x;
}

double Grid::boundary_distance(std::size_t i) const noexcept {
  // exact on the lattice: distance to the nearer endpoint is min(i+1, n-i) h
  return static_cast<double>(std::min(i + 1, n_ - i)) * h_;
}

std::string_view to_string(SingularRule r) noexcept {
  return r == SingularRule::CellExact ? "cell_exact" : "taylor2";
}

SingularRule parse_singular_rule(std::string_view name) {
  if (name == "cell_exact") return SingularRule::CellExact;
  if (name == "taylor2") return SingularRule::Taylor2;
  throw Error(ErrorCode::InvalidArgument, "unknown singular rule '" + std::string(name) + "'");
}

DiscreteOperator::DiscreteOperator(Grid grid, double order, SingularRule rule,
                                   Eigen::VectorXd distance_weights, Eigen::VectorXd exterior)
    : grid_(grid), s_(order), rule_(rule), omega_(std::move(distance_weights)), tau_(std::move(exterior)) {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  if (omega_.size() != n || tau_.size() != n) throw Error(ErrorCode::GridMismatch, "operator data length");
  // prefix[m] = ω_1 + ... + ω_m
  Eigen::VectorXd prefix = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 1; k < n; ++k) prefix[k] = prefix[k - 1] + omega_[k];
  A_.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) A_(i, j) = -omega_[std::abs(i - j)];
  for (Eigen::Index i = 0; i < n; ++i) A_(i, i) = prefix[i] + prefix[n - 1 - i] + tau_[i];
}

Eigen::MatrixXd DiscreteOperator::weights() const {
  Eigen::MatrixXd W = -A_;
  W.diagonal().setZero();
  return W;
}

GridFunction DiscreteOperator::apply(const GridFunction& u) const {
  check_aligned(*this, u);
  return A_ * u;
}

double cell_exact_min_order() {
  // ω_1 of the corrected rule is decreasing as s -> 0; bisect its sign change.
  auto first = [](double s) {
    return I2_unit(s) + 2.0 * I0(1, 2, s) - I1(1, 2, s) - interpolation_defect(s);
  };
  double lo = 1e-3, hi = 0.5;
  if (first(lo) > 0.0) return lo;
  for (int it = 0; it < 50; ++it) {
    const double m = 0.5 * (lo + hi);
    (first(m) > 0.0 ? hi : lo) = m;
  }
  return hi;
}

DiscreteOperator assemble(const SpectralKernel& kernel, const Grid& grid, SingularRule rule) {
  const double s = kernel.order();
  const std::size_t n = grid.size();
  UnitWeights w = rule == SingularRule::CellExact ? hat_weights(std::max<std::size_t>(n, 2), s)
                                                  : taylor_weights(std::max<std::size_t>(n, 2), s);
  if (w.rule == SingularRule::CellExact && !(w.omega[1] > 0.0))
    w = taylor_weights(std::max<std::size_t>(n, 2), s);

  const double scale = kernel.one_sided_weight() * std::pow(grid.h(), -2.0 * s);
  Eigen::VectorXd omega = scale * w.omega.head(static_cast<Eigen::Index>(n));
  omega[0] = 0.0;
  Eigen::VectorXd tau(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    tau[static_cast<Eigen::Index>(i)] =
        scale * (w.tail[static_cast<Eigen::Index>(n - i)] + w.tail[static_cast<Eigen::Index>(i + 1)]);
  // nearest exterior neighbours also see the corrected ω_1
  tau[0] += scale * w.boundary_adjust;
  tau[static_cast<Eigen::Index>(n - 1)] += scale * w.boundary_adjust;
  if (!(tau.minCoeff() > 0.0))
    throw Error(ErrorCode::NumericalFailure, "exterior weights lost positivity");
  return DiscreteOperator(grid, s, w.rule, std::move(omega), std::move(tau));
}

double energy_form(const DiscreteOperator& op, const GridFunction& f, const GridFunction& g) {
  check_aligned(op, f);
  check_aligned(op, g);
  const auto n = static_cast<Eigen::Index>(op.size());
  const Eigen::VectorXd& om = op.distance_weights();
  const Eigen::VectorXd& tau = op.exterior();
  // each unordered pair once: ½ Σ_{i≠j} = Σ_{i<j}
  double pairs = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) row += om[j - i] * ((f[i] - f[j]) * (g[i] - g[j]));  // product first: symmetric in f, g
    pairs += row;
  }
  double ext = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) ext += tau[i] * (f[i] * g[i]);
  return (pairs + ext) * op.grid().h();
}

GridFunction interaction_term(const DiscreteOperator& op, const GridFunction& f, const GridFunction& g) {
  check_aligned(op, f);
  check_aligned(op, g);
  const auto n = static_cast<Eigen::Index>(op.size());
  const Eigen::VectorXd& om = op.distance_weights();
  GridFunction D(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) acc += om[std::abs(i - j)] * (f[i] - f[j]) * (g[i] - g[j]);
    D[i] = acc + op.exterior()[i] * f[i] * g[i];
  }
  return D;
}

GridFunction product_rule_defect(const DiscreteOperator& op, const GridFunction& f, const GridFunction& g) {
  check_aligned(op, f);
  check_aligned(op, g);
  const GridFunction fg = f.cwiseProduct(g);
  return op.apply(fg) - f.cwiseProduct(op.apply(g)) - g.cwiseProduct(op.apply(f)) +
         interaction_term(op, f, g);
}

PvResult pv_apply(const SpectralKernel& kernel, const std::function<double(double)>& u, double x,
                  double truncation, double tolerance) {
  if (!(truncation > 0.0) || !(tolerance > 0.0))
    throw Error(ErrorCode::InvalidArgument, "truncation and tolerance must be positive");
  const double s = kernel.order();
  const double c = kernel.one_sided_weight();
  const double ux = u(x);
  auto diff = [&](double y) { return 2.0 * ux - u(x + y) - u(x - y); };

  const double ax = std::abs(x);
  const double delta = 1e-3 * (ax > 0.0 ? std::min(1.0, ax) : 1.0);
  if (!(truncation > 4.0 * delta)) throw Error(ErrorCode::InvalidArgument, "truncation too small");

  // Near y = 0: diff(y) ≈ -u''(x) y², with u'' read off diff(δ) itself.
  auto inner = [&](double d) { return diff(d) * c * std::pow(d, -2.0 * s) / (2.0 - 2.0 * s); };

  std::vector<double> cuts{delta};
  for (double b = 2.0 * delta; b < truncation; b *= 2.0) cuts.push_back(b);
  if (ax > delta && ax < truncation) {
    cuts.push_back(ax);
    // grade toward y = |x|, where u(x - y) meets a possible singularity at the origin
    for (double e = 0.5; e > 1e-4; e *= 0.5) {
      if (ax * (1.0 - e) > delta) cuts.push_back(ax * (1.0 - e));
      if (ax * (1.0 + e) < truncation) cuts.push_back(ax * (1.0 + e));
    }
  }
  cuts.push_back(truncation);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Tanh-sinh per panel. Its endpoint-distance argument keeps x -+ y exact where
  // a panel ends at y = |x|, so profiles singular at the origin stay resolvable.
  boost::math::quadrature::tanh_sinh<double> ts;
  auto panel = [&](double a, double b, double* err) mutable {
    auto g = [&](double y, double yc) {
      double xp = x + y, xm = x - y;
      const bool near_sing = (b == ax && yc > 0.0) || (a == ax && yc < 0.0);
      if (near_sing && x > 0.0) xm = yc;
      if (near_sing && x < 0.0) xp = -yc;
      return (2.0 * ux - u(xp) - u(xm)) * c * std::pow(y, -1.0 - 2.0 * s);
    };
    try {
      return ts.integrate(g, a, b, 1e-14, err);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::NumericalFailure, std::string("panel quadrature failed: ") + e.what());
    }
  };
  double value = 0.0, error = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double err = 0.0;
    value += panel(cuts[k], cuts[k + 1], &err);
    error += err;
  }
  const double in_full = inner(delta);
  double e_half = 0.0;
  const double in_half = inner(0.5 * delta) + panel(0.5 * delta, delta, &e_half);
  value += in_full;
  error += std::abs(in_full - in_half) + e_half;

  // Tail: diff ≈ a + b y^{-κ} with κ read off three decades (κ → 0 is a + b log y);
  // the decade beyond R gives the error estimate.
  // Growth like y^{2s} or faster diverges.
  const double R = truncation;
  const double f2 = diff(R), f1 = diff(R / 10.0), f0 = diff(R / 100.0), f3 = diff(10.0 * R);
  if (!std::isfinite(f2) ||
      (std::abs(f2) > 0.0 && std::abs(f2) >= std::abs(f0) * std::pow(100.0, 2.0 * s) * (1.0 - 1e-3)))
    throw Error(ErrorCode::TailDivergence, "integrand grows at least like |y|^{2s}");
  const double d2 = f2 - f1;
  auto tail_model = [&](double d_lo, double d_hi) {
    const double scale = c * std::pow(R, -2.0 * s);
    if (d2 == 0.0) return scale * f2 / (2.0 * s);
    const double r = d_hi / d_lo;
    const double kappa = r > 0.0 && std::isfinite(r) ? -std::log10(r) : 0.0;
    if (std::abs(kappa) < 1e-6) return scale * (f2 / (2.0 * s) + d2 / std::log(10.0) / (4.0 * s * s));
    if (!(kappa + 2.0 * s > 0.0)) throw Error(ErrorCode::TailDivergence, "integrand tail decays too slowly");
    const double bR = d2 / (1.0 - std::pow(10.0, kappa));  // b R^{-κ}
    return scale * ((f2 - bR) / (2.0 * s) + bR / (kappa + 2.0 * s));
  };
  const double tail = tail_model(f1 - f0, d2);
  const double tail_alt = std::isfinite(f3) ? tail_model(d2, f3 - f2) : tail_model(f1 - f0, d2);
  value += tail;
  error += std::abs(tail - tail_alt);

  if (!std::isfinite(value)) throw Error(ErrorCode::NumericalFailure, "principal value is not finite");
  if (error > tolerance * std::max(1.0, std::abs(value)))
    throw Error(ErrorCode::NumericalFailure, "principal value missed its tolerance (estimated error " +
                                                 fmt_sci(error) + ")");
  return {value, error};
}

}  // namespace nlx
