#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <nlx/error.hpp>
#include <nlx/systems.hpp>

using namespace nlx;

namespace {

ScalarFunction make(std::function<double(double)> f, std::function<double(double)> d1,
                    std::function<double(double)> d2, std::function<double(double)> d3) {
  return {std::move(f), std::move(d1), std::move(d2), std::move(d3),
          std::numeric_limits<double>::infinity(), "custom"};
}

std::vector<SystemSpec> all_families() {
  return {SystemSpec::gelfand(),     SystemSpec::lane_emden(2.0), SystemSpec::lane_emden(5.0),
          SystemSpec::mems(2.0),     SystemSpec::mems(1.5),       SystemSpec::gradient_power(3.0, 4.0),
          SystemSpec::gradient(ScalarNonlinearity::exponential(), ScalarNonlinearity::power(3.0))};
}

}  // namespace

TEST(PointEval, FamilyValuesAtKnownPoints) {
  const PointEval g = SystemSpec::gelfand().eval(0.0, 0.0);
  EXPECT_EQ(g.F, 1.0);
  EXPECT_EQ(g.G, 1.0);
  EXPECT_EQ(g.Fv, 1.0);
  EXPECT_EQ(g.Gu, 1.0);
  EXPECT_EQ(g.Fu, 0.0);
  EXPECT_EQ(g.Gv, 0.0);

  const PointEval le = SystemSpec::lane_emden(2.0).eval(0.0, 0.0);
  EXPECT_EQ(le.F, 1.0);
  EXPECT_EQ(le.Fv, 2.0);
  EXPECT_EQ(le.Gu, 2.0);

  const PointEval m = SystemSpec::mems(2.0).eval(0.5, 0.5);
  EXPECT_DOUBLE_EQ(m.F, 4.0);
  EXPECT_DOUBLE_EQ(m.G, 4.0);
  EXPECT_DOUBLE_EQ(m.Fv, 16.0);
  EXPECT_DOUBLE_EQ(m.Gu, 16.0);
}

TEST(PointEval, GradientSystemUsesDerivatives) {
  const SystemSpec h = SystemSpec::gradient_power(3.0, 4.0);
  const double u = 0.3, v = 0.7;
  const PointEval e = h.eval(u, v);
  EXPECT_DOUBLE_EQ(e.F, 3 * std::pow(1 + u, 2) * std::pow(1 + v, 4));
  EXPECT_DOUBLE_EQ(e.G, std::pow(1 + u, 3) * 4 * std::pow(1 + v, 3));
  EXPECT_DOUBLE_EQ(e.Fu, 6 * (1 + u) * std::pow(1 + v, 4));
  EXPECT_DOUBLE_EQ(e.Gv, std::pow(1 + u, 3) * 12 * std::pow(1 + v, 2));
  EXPECT_NEAR(e.Fv, e.Gu, 1e-12 * e.Fv);
}

TEST(PointEval, MemsBoxIsEnforced) {
  const SystemSpec m = SystemSpec::mems(2.0);
  EXPECT_EQ(m.upper_bound(), 1.0);
  EXPECT_FALSE(m.admissible(1.0, 0.0));
  EXPECT_TRUE(m.admissible(0.99, 0.0));
  try {
    m.eval(0.2, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConstraintViolation);
  }
}

TEST(PointEval, VectorMatchesPointwise) {
  const SystemSpec le = SystemSpec::lane_emden(3.0);
  Eigen::VectorXd u(3), v(3);
  u << 0.0, 0.5, 2.0;
  v << 1.0, 0.25, 0.0;
  const SystemValues sv = le.eval(u, v);
  for (int i = 0; i < 3; ++i) {
    const PointEval p = le.eval(u[i], v[i]);
    EXPECT_EQ(sv.F[i], p.F);
    EXPECT_EQ(sv.Gu[i], p.Gu);
  }
  EXPECT_THROW(le.eval(u, Eigen::VectorXd(2)), Error);
}

TEST(SystemSpec, StructuralSamplingOverAdmissibleBox) {
  std::mt19937_64 rng(1234);
  for (const SystemSpec& sys : all_families()) {
    const double top = std::isfinite(sys.upper_bound()) ? sys.upper_bound() * (1 - 1e-6) : 20.0;
    const double hi = sys.family() == Family::Gelfand ? 20.0 : top;
    std::uniform_real_distribution<double> d(0.0, hi);
    const PointEval origin = sys.eval(0.0, 0.0);
    EXPECT_GT(origin.F, 0.0);
    EXPECT_GT(origin.G, 0.0);
    for (int k = 0; k < 10000; ++k) {
      const double u = d(rng), v = d(rng);
      const double v2 = v + (hi - v) * 0.5 * d(rng) / hi;
      const PointEval a = sys.eval(u, v), b = sys.eval(u, v2);
      ASSERT_GE(a.Fv * a.Gu, 0.0) << sys.name() << " at " << u << ", " << v;
      ASSERT_GE(b.F, a.F) << sys.name();
      ASSERT_GE(a.Fu, 0.0);
      ASSERT_GE(a.Gv, 0.0);
    }
  }
}

TEST(SystemSpec, GradientFamilyCrossDerivativesAgree) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> d(0.0, 5.0);
  const SystemSpec sys = SystemSpec::gradient(ScalarNonlinearity::exponential(), ScalarNonlinearity::power(2.5));
  for (int k = 0; k < 1000; ++k) {
    const PointEval e = sys.eval(d(rng), d(rng));
    EXPECT_NEAR(e.Fv, e.Gu, 1e-12 * std::abs(e.Fv));
  }
}

TEST(SystemSpec, SymmetryAndDiagonal) {
  EXPECT_TRUE(SystemSpec::gelfand().symmetric());
  EXPECT_TRUE(SystemSpec::mems(3.0).symmetric());
  EXPECT_FALSE(SystemSpec::gradient_power(3.0, 4.0).symmetric());
  const SystemSpec le = SystemSpec::lane_emden(2.0);
  EXPECT_DOUBLE_EQ(le.diagonal_value(0.5), 2.25);
  EXPECT_DOUBLE_EQ(le.diagonal_slope(0.5), 3.0);
}

TEST(SystemSpec, InvalidExponents) {
  EXPECT_THROW(SystemSpec::lane_emden(1.0), Error);
  EXPECT_THROW(SystemSpec::mems(0.5), Error);
  EXPECT_THROW(ScalarNonlinearity::power(std::nan("")), Error);
}

TEST(ConditionR, Verdicts) {
  EXPECT_TRUE(check_condition_R(ScalarNonlinearity::exponential().as_function()).pass);
  EXPECT_TRUE(check_condition_R(ScalarNonlinearity::power(3.0).as_function()).pass);
  EXPECT_TRUE(check_condition_R(ScalarNonlinearity::singular_power(2.0).as_function()).pass);
  const ConditionReport lin = check_condition_R(make([](double t) { return 1 + t; }, [](double) { return 1.0; },
                                                     [](double) { return 0.0; }, [](double) { return 0.0; }));
  EXPECT_FALSE(lin.pass);
  ASSERT_EQ(lin.violations.size(), 1u);
  EXPECT_NE(lin.violations[0].find("f(T)/T"), std::string::npos);
  const ConditionReport shifted = check_condition_R(make([](double t) { return std::exp(t) + 1; },
                                                         [](double t) { return std::exp(t); },
                                                         [](double t) { return std::exp(t); },
                                                         [](double t) { return std::exp(t); }));
  EXPECT_FALSE(shifted.pass);
}

TEST(ConditionDeltaEps, RatiosMatchClosedForms) {
  const RatioReport e = check_condition_deltaeps(ScalarNonlinearity::exponential().as_function());
  EXPECT_TRUE(e.pass);
  EXPECT_NEAR(e.min_ratio, 1.0, 1e-12);
  EXPECT_NEAR(e.max_ratio, 1.0, 1e-12);
  const RatioReport p = check_condition_deltaeps(ScalarNonlinearity::power(3.0).as_function());
  EXPECT_TRUE(p.pass);
  // f''² / (f''' f') = (p-1)/(p-2) for (1+t)^p
  EXPECT_NEAR(p.min_ratio, 2.0, 1e-12);
  EXPECT_NEAR(p.max_ratio, 2.0, 1e-12);
  const RatioReport q = check_condition_deltaeps(make([](double t) { return 1 + t * t; }, [](double t) { return 2 * t; },
                                                      [](double) { return 2.0; }, [](double) { return 0.0; }));
  EXPECT_TRUE(q.degenerate);
  EXPECT_FALSE(q.pass);
}

TEST(ConditionConf, TailSupremum) {
  EXPECT_NEAR(check_condition_conf(ScalarNonlinearity::exponential().as_function()), 1.0, 1e-12);
  EXPECT_NEAR(check_condition_conf(ScalarNonlinearity::power(4.0).as_function()), 0.75, 1e-12);
  EXPECT_NEAR(check_condition_conf(ScalarNonlinearity::singular_power(2.0).as_function()), 1.5, 1e-12);
}

TEST(GeometricProbe, Endpoints) {
  const auto t = geometric_probe(1.0, 1e4, 5);
  ASSERT_EQ(t.size(), 5u);
  EXPECT_DOUBLE_EQ(t.front(), 1.0);
  EXPECT_DOUBLE_EQ(t.back(), 1e4);
  EXPECT_NEAR(t[2], 100.0, 1e-10);
  EXPECT_THROW(geometric_probe(0.0, 1.0, 5), Error);
}
