#include <cmath>
#include <random>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include <nlx/discretize.hpp>
#include <nlx/error.hpp>
#include <nlx/special_fn.hpp>

using namespace nlx;

namespace {

GridFunction random_function(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  GridFunction f(static_cast<Eigen::Index>(n));
  for (auto& x : f) x = g(rng);
  return f;
}

GridFunction sample(const Grid& grid, double (*fn)(double)) {
  GridFunction f(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) f[static_cast<Eigen::Index>(i)] = fn(grid.node(i));
  return f;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST(Grid, UniformInteriorNodes) {
  const Grid g = Grid::uniform(9, 2.0);
  EXPECT_DOUBLE_EQ(g.h(), 0.4);
  EXPECT_DOUBLE_EQ(g.node(0), -1.6);
  EXPECT_NEAR(g.node(4), 0.0, 1e-15);
  EXPECT_NEAR(g.boundary_distance(0), 0.4, 1e-15);
  EXPECT_THROW(Grid::uniform(0), Error);
}

TEST(Grid, RejectsNonUniformNodes) {
  EXPECT_NO_THROW(Grid::from_nodes(Grid::uniform(5).nodes(), 1.0));
  try {
    Grid::from_nodes({-0.5, 0.0, 0.6}, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedGrid);
  }
}

TEST(Assemble, StructuralInvariants) {
  for (double s : {0.1, 0.3, 0.5, 0.9})
    for (SingularRule rule : {SingularRule::CellExact, SingularRule::Taylor2}) {
      const DiscreteOperator op = assemble(SpectralKernel::fractional_laplacian(s), Grid::uniform(64), rule);
      const Eigen::MatrixXd W = op.weights();
      EXPECT_EQ((W - W.transpose()).cwiseAbs().maxCoeff(), 0.0);
      EXPECT_GE(W.minCoeff(), 0.0);
      EXPECT_EQ(W.diagonal().cwiseAbs().maxCoeff(), 0.0);
      EXPECT_GT(op.exterior().minCoeff(), 0.0);
      const Eigen::MatrixXd& A = op.matrix();
      EXPECT_EQ((A - A.transpose()).cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(Assemble, CellExactFallsBackBelowMinimumOrder) {
  const double smin = cell_exact_min_order();
  ASSERT_GT(smin, 0.0);
  ASSERT_LT(smin, 0.5);
  const auto lo = assemble(SpectralKernel::fractional_laplacian(smin / 2), Grid::uniform(32));
  EXPECT_EQ(lo.rule(), SingularRule::Taylor2);
  const auto hi = assemble(SpectralKernel::fractional_laplacian(0.5), Grid::uniform(32));
  EXPECT_EQ(hi.rule(), SingularRule::CellExact);
}

TEST(Assemble, ConstantGivesExteriorMass) {
  const DiscreteOperator op = assemble(SpectralKernel::fractional_laplacian(0.4), Grid::uniform(50));
  const GridFunction c = GridFunction::Constant(50, 3.0);
  const GridFunction Lc = op.apply(c);
  for (Eigen::Index i = 0; i < 50; ++i) EXPECT_NEAR(Lc[i], 3.0 * op.exterior()[i], 1e-12 * Lc[i]);
}

TEST(Assemble, ParseRuleNames) {
  EXPECT_EQ(parse_singular_rule("cell_exact"), SingularRule::CellExact);
  EXPECT_EQ(parse_singular_rule("taylor2"), SingularRule::Taylor2);
  EXPECT_THROW(parse_singular_rule("simpson"), Error);
}

TEST(EnergyForm, SymmetricPositiveAndMatchesOperator) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {64u, 400u}) {
    const DiscreteOperator op = assemble(SpectralKernel::fractional_laplacian(0.35), Grid::uniform(n));
    for (int k = 0; k < 20; ++k) {
      const GridFunction f = random_function(n, rng), g = random_function(n, rng);
      EXPECT_EQ(energy_form(op, f, g), energy_form(op, g, f));
      EXPECT_LE(rel(energy_form(op, f, g), op.grid().h() * g.dot(op.apply(f))), 1e-12);
      EXPECT_GT(energy_form(op, f, f), 0.0);
    }
    EXPECT_EQ(energy_form(op, GridFunction::Zero(n), GridFunction::Zero(n)), 0.0);
  }
}

TEST(EnergyForm, GridMismatchThrows) {
  const DiscreteOperator op = assemble(SpectralKernel::fractional_laplacian(0.5), Grid::uniform(10));
  try {
    energy_form(op, GridFunction::Zero(9), GridFunction::Zero(10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
}

TEST(ProductRule, DefectVanishes) {
  std::mt19937_64 rng(9);
  for (std::size_t n : {64u, 400u}) {
    const DiscreteOperator op = assemble(SpectralKernel::fractional_laplacian(0.6), Grid::uniform(n));
    for (int k = 0; k < 20; ++k) {
      const GridFunction f = random_function(n, rng), g = random_function(n, rng);
      const GridFunction d = product_rule_defect(op, f, g);
      const double scale = op.apply(f.cwiseProduct(g)).cwiseAbs().maxCoeff() +
                           f.cwiseProduct(op.apply(g)).cwiseAbs().maxCoeff() +
                           g.cwiseProduct(op.apply(f)).cwiseAbs().maxCoeff();
      EXPECT_LE(d.cwiseAbs().maxCoeff(), 1e-12 * scale);
    }
  }
}

TEST(ProductRule, InteractionTermSumsToEnergy) {
  // h Σ D(f,g) = 2E(f,g) - h Σ τ f g
  std::mt19937_64 rng(21);
  const DiscreteOperator op = assemble(SpectralKernel::fractional_laplacian(0.25), Grid::uniform(80));
  const GridFunction f = random_function(80, rng), g = random_function(80, rng);
  const double h = op.grid().h();
  const double lhs = h * interaction_term(op, f, g).sum();
  const double rhs = 2 * energy_form(op, f, g) - h * (op.exterior().array() * f.array() * g.array()).sum();
  EXPECT_LE(rel(lhs, rhs), 1e-12);
}

TEST(MaximumPrinciple, NonnegativeDataGivesNonnegativeSolution) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const DiscreteOperator op = assemble(SpectralKernel::fractional_laplacian(0.2), Grid::uniform(120));
  const Eigen::LLT<Eigen::MatrixXd> llt(op.matrix());
  for (int k = 0; k < 20; ++k) {
    GridFunction b(120);
    for (auto& x : b) x = u(rng) < 0.3 ? u(rng) : 0.0;
    EXPECT_GE(llt.solve(b).minCoeff(), -1e-14);
  }
}

TEST(Consistency, InteriorConvergenceOrder) {
  // L (1-x²)_+^{1+s} = 4^s Γ(2+s) Γ(1/2+s) / Γ(1/2) · (1 - (1+2s) x²) on (-1, 1)
  for (double s : {0.3, 0.5, 0.7}) {
    const double c = std::pow(4.0, s) * boost::math::tgamma(2 + s) * boost::math::tgamma(0.5 + s) /
                     boost::math::tgamma(0.5);
    std::vector<double> err;
    for (std::size_t n : {99u, 199u, 399u}) {
      const Grid grid = Grid::uniform(n);
      const DiscreteOperator op = assemble(SpectralKernel::fractional_laplacian(s), grid);
      GridFunction u(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) u[static_cast<Eigen::Index>(i)] = std::pow(1 - grid.node(i) * grid.node(i), 1 + s);
      const GridFunction Lu = op.apply(u);
      double e = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.node(i);
        if (std::abs(x) > 0.5 + 1e-12) continue;
        e = std::max(e, std::abs(Lu[static_cast<Eigen::Index>(i)] - c * (1 - (1 + 2 * s) * x * x)));
      }
      err.push_back(e);
    }
    const double order = std::log2(err[1] / err[2]);
    EXPECT_GE(order, std::min(2 - 2 * s, 1.0)) << "s = " << s << " errors " << err[0] << " " << err[1] << " " << err[2];
    EXPECT_LT(err[2], err[1]);
  }
}

TEST(PrincipalValue, OddAndConstantProfilesVanishAtOrigin) {
  const auto k = SpectralKernel::fractional_laplacian(0.4);
  const PvResult odd = pv_apply(k, [](double y) { return std::sin(y) / (1 + y * y); }, 0.0);
  EXPECT_NEAR(odd.value, 0.0, 1e-12);
  const PvResult c = pv_apply(k, [](double) { return 2.5; }, 0.3);
  EXPECT_NEAR(c.value, 0.0, 1e-12);
}

TEST(PrincipalValue, GelfandSingularProfile) {
  const double s = 0.3;
  const auto k = SpectralKernel::fractional_laplacian(s);
  const double lam = gelfand_singular_lambda(1.0, s);
  for (double x : {0.25, 0.5, 0.75}) {
    const PvResult r = pv_apply(k, [s](double y) { return -2 * s * std::log(std::abs(y)); }, x);
    const double expected = lam * std::pow(x, -2 * s);
    EXPECT_LE(rel(r.value, expected), 1e-8) << x;
  }
  const PvResult mid = pv_apply(k, [s](double y) { return -2 * s * std::log(std::abs(y)); }, 0.5);
  EXPECT_NEAR(mid.value, 0.796046981939854, 1e-9);
}

TEST(PrincipalValue, PowerProfileScaling) {
  const double s = 0.35, beta = 0.6;  // beta = 1 - 2s would be harmonic
  const auto k = SpectralKernel::fractional_laplacian(s);
  auto u = [beta](double y) { return std::pow(std::abs(y), -beta); };
  for (double x : {0.1, 0.3}) {
    const double a = pv_apply(k, u, x, 1e6, 1e-9).value, b = pv_apply(k, u, 2 * x, 1e6, 1e-9).value;
    EXPECT_LE(rel(a / b, std::pow(2.0, beta + 2 * s)), 1e-8) << x;
  }
}

TEST(PrincipalValue, GrowingTailIsRejected) {
  const auto k = SpectralKernel::fractional_laplacian(0.3);
  try {
    pv_apply(k, [](double y) { return y * y; }, 0.2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TailDivergence);
  }
}
