#pragma once

#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace nlx {

// A scalar map with three derivatives, as probed by the structural-condition checks.
struct ScalarFunction {
  std::function<double(double)> f, d1, d2, d3;
  double domain_end = std::numeric_limits<double>::infinity();  // exclusive upper end
  std::string name;
};

enum class ScalarKind { Exponential, Power, SingularPower };

// e^t, (1+t)^p, (1-t)^{-p}: the nonlinearities the systems are built from.
class ScalarNonlinearity {
 public:
  static ScalarNonlinearity exponential();
  static ScalarNonlinearity power(double p);
  static ScalarNonlinearity singular_power(double p);

  ScalarKind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return p_; }
  double domain_end() const noexcept;
  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  double d3(double t) const;
  ScalarFunction as_function() const;
  std::string name() const;

 private:
  ScalarNonlinearity(ScalarKind k, double p) : kind_(k), p_(p) {}
  void check(double t) const;
  ScalarKind kind_;
  double p_;
};

enum class Family { Gelfand, LaneEmden, Mems, Gradient };
std::string_view to_string(Family f) noexcept;

struct PointEval {
  double F = 0, G = 0, Fu = 0, Fv = 0, Gu = 0, Gv = 0;
};

struct SystemValues {
  Eigen::VectorXd F, G, Fu, Fv, Gu, Gv;
};

// Right-hand sides of Lu = λF(u,v), Lv = γG(u,v).
//   Gelfand / Lane-Emden / MEMS: F = f(v), G = f(u)
//   Gradient: F = f'(u) g(v), G = f(u) g'(v)
class SystemSpec {
 public:
  static SystemSpec gelfand();
  static SystemSpec lane_emden(double p);
  static SystemSpec mems(double p);
  static SystemSpec gradient(ScalarNonlinearity f, ScalarNonlinearity g);
  static SystemSpec gradient_power(double p, double q);

  Family family() const noexcept { return family_; }
  const ScalarNonlinearity& f() const noexcept { return f_; }
  const ScalarNonlinearity& g() const noexcept { return g_; }
  double p() const noexcept { return f_.exponent(); }
  double q() const noexcept { return g_.exponent(); }
  std::string name() const;

  // Open upper end of the admissible box (1 for MEMS).
  double upper_bound() const noexcept;
  bool admissible(double u, double v) const noexcept;
  // F(u,v) = G(v,u), so σ = 1 admits the reduction u = v.
  bool symmetric() const noexcept;

  PointEval eval(double u, double v) const;
  SystemValues eval(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

  // φ(t) = F(t,t) and φ'(t) = F_u + F_v along the diagonal; requires symmetric().
  double diagonal_value(double t) const;
  double diagonal_slope(double t) const;

 private:
  SystemSpec(Family fam, ScalarNonlinearity f, ScalarNonlinearity g)
      : family_(fam), f_(f), g_(g) {}
  Family family_;
  ScalarNonlinearity f_, g_;
};

struct RayParams {
  double sigma = 1.0;
  double lambda = 0.0;
  double gamma() const noexcept { return sigma * lambda; }
};

// count points geometrically spaced in [lo, hi]
std::vector<double> geometric_probe(double lo, double hi, std::size_t count);

struct ConditionReport {
  bool pass = true;
  std::vector<std::string> violations;
};

// Superlinearity proxy: f(T)/T >= kSuperlinearRatio at the largest probe.
inline constexpr double kSuperlinearRatio = 10.0;
inline constexpr double kSuperlinearProbe = 1e4;

// f smooth, increasing, convex, f(0) = 1, superlinear.
ConditionReport check_condition_R(const ScalarFunction& f, std::vector<double> probe = {});

struct RatioReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool degenerate = false;
  bool pass = false;
  std::size_t evaluated = 0;  // tail points with finite values
};

// liminf f''^2 / (f''' f') > 0 over the upper half of a geometric probe up to 1e6.
RatioReport check_condition_deltaeps(const ScalarFunction& f, std::vector<double> probe = {});

// sup of f f'' / f'^2 over the same tail.
double check_condition_conf(const ScalarFunction& f, std::vector<double> probe = {});

}  // namespace nlx
