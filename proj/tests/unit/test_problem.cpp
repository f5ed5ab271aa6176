#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "tvl/problem.hpp"

namespace tvl {
namespace {

using test::kTwoPi;
using test::vec;

TEST(Example1, StationaryPointsOfQuartic) {
  const Scalar1DFunction g = example1_quartic();
  EXPECT_DOUBLE_EQ(g.y1, -2.0);
  EXPECT_DOUBLE_EQ(g.y2, -0.375);
  EXPECT_DOUBLE_EQ(g.y3, 2.0);
  for (double y : {g.y1, g.y2, g.y3}) EXPECT_NEAR(g.dg(y), 0.0, 1e-14);
  EXPECT_GT(g.d2g(g.y1), 0.0);
  EXPECT_LT(g.d2g(g.y2), 0.0);
  EXPECT_GT(g.d2g(g.y3), 0.0);
}

TEST(Example1, ValuesAtMinima) {
  const Scalar1DFunction g = example1_quartic();
  EXPECT_DOUBLE_EQ(g.g(-2.0), 6.0);
  EXPECT_DOUBLE_EQ(g.g(2.0), 2.0);
  EXPECT_GT(g.g(g.y1), g.g(g.y3));
}

TEST(Example1, ZeroPhaseMatchesQuartic) {
  const Example1 ex = make_example1(10.0);
  for (double x : {-3.0, -0.5, 0.0, 1.7}) EXPECT_DOUBLE_EQ(ex.problem.objective(vec({x}), 0.0), ex.g.g(x));
}

TEST(Example1, TranslationIdentity) {
  const double beta = 7.5;
  const Example1 ex = make_example1(beta, 0.3);
  for (double t : {0.1, 1.0, 2.5, 4.0, 6.0}) {
    for (double x : {-2.5, 0.0, 3.0}) {
      EXPECT_NEAR(ex.problem.objective(vec({x + beta * std::sin(t)}), t), ex.g.g(x), 1e-12);
    }
  }
}

TEST(Example1, ShapeAndHorizon) {
  const Example1 ex = make_example1(10.0, 0.4);
  EXPECT_EQ(ex.problem.n, 1);
  EXPECT_EQ(ex.problem.m, 0);
  EXPECT_DOUBLE_EQ(ex.problem.horizon, kTwoPi);
  EXPECT_DOUBLE_EQ(ex.problem.alpha, 0.4);
  EXPECT_NO_THROW(check_problem(ex.problem));
}

TEST(Example1, RejectsNonPositiveBeta) {
  EXPECT_THROW(make_example1(0.0), std::invalid_argument);
  EXPECT_THROW(make_example1(-1.0), std::invalid_argument);
}

TEST(Example1, PureEvaluation) {
  const Example1 a = make_example1(3.0);
  const Example1 b = make_example1(3.0);
  for (double t : {0.0, 0.7, 3.1}) {
    const Vec x = vec({0.123456789});
    EXPECT_EQ(a.problem.objective(x, t), b.problem.objective(x, t));
    EXPECT_EQ(a.problem.grad_objective(x, t)(0), b.problem.grad_objective(x, t)(0));
  }
}

TEST(MatrixRecovery, ConsistentDataAtZero) {
  const ProblemDef p = make_matrix_recovery(true);
  const Vec d = p.data_path(0.0);
  EXPECT_NEAR(d(0), 1.0, 1e-15);
  EXPECT_NEAR(d(1), 0.0, 1e-15);
  EXPECT_NEAR(d(3), 0.0, 1e-15);
}

TEST(MatrixRecovery, ObjectiveZeroOnGlobalTrajectory) {
  const ProblemDef p = make_matrix_recovery(true);
  EXPECT_DOUBLE_EQ(p.objective(test::matrec_global(0.0), 0.0), 0.0);
}

TEST(MatrixRecovery, GlobalTrajectoryExactlyFeasible) {
  const ProblemDef p = make_matrix_recovery(true);
  for (int k = 0; k <= 50; ++k) {
    const double t = kTwoPi * k / 50;
    EXPECT_LE((p.constraints(test::matrec_global(t)) - p.data_path(t)).norm(), 1e-14) << "t = " << t;
  }
}

TEST(MatrixRecovery, SlackBlockGivesFullRank) {
  const ProblemDef p = make_matrix_recovery(true);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int s = 0; s < 20; ++s) {
    Vec x(6);
    for (int i = 0; i < 6; ++i) x(i) = 3.0 * normal(rng);
    const Mat j = p.jacobian(x);
    EXPECT_TRUE(j.rightCols(4).isApprox(-Mat::Identity(4, 4)));
    const Eigen::JacobiSVD<Mat> svd(j);
    EXPECT_GE(svd.singularValues().minCoeff(), 1.0 - 1e-12);
  }
}

TEST(MatrixRecovery, SensingMatricesAsPrinted) {
  const auto& a = matrix_recovery_sensing();
  ASSERT_EQ(a.size(), 4u);
  EXPECT_DOUBLE_EQ(a[0](0, 0), 1.0);
  EXPECT_DOUBLE_EQ(a[0](1, 1), 0.5);
  EXPECT_DOUBLE_EQ(a[1](0, 1), std::sqrt(3.0) / 2.0);
  EXPECT_DOUBLE_EQ(a[2](0, 1), -1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(a[2](1, 0), 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(a[3](1, 1), std::sqrt(3.0) / 2.0);
}

TEST(MatrixRecovery, PrintedDataDiffersInThirdComponent) {
  const ProblemDef consistent = make_matrix_recovery(true);
  const ProblemDef printed = make_matrix_recovery(false);
  const double t = 0.9;
  const Vec a = consistent.data_path(t);
  const Vec b = printed.data_path(t);
  EXPECT_DOUBLE_EQ(b(2), 0.0);
  const double z1 = 0.8 + 0.2 * std::cos(t);
  EXPECT_NEAR(a(2), z1 * z1, 1e-14);
  EXPECT_NEAR(a(0), b(0), 1e-14);
  EXPECT_NEAR(a(1), b(1), 1e-14);
  EXPECT_NEAR(a(3), b(3), 1e-14);
}

TEST(MatrixRecovery, GlobalRateMatchesDifference) {
  for (double t : {0.0, 1.0, 4.0}) {
    const double h = 1e-6;
    const Eigen::Vector2d fd = (matrix_recovery_global(t + h) - matrix_recovery_global(t - h)) / (2 * h);
    EXPECT_LE((fd - matrix_recovery_global_rate(t)).norm(), 1e-9);
  }
}

TEST(DampedSinusoid, ZeroPhaseMatchesField) {
  const ScalarField g = quartic_field(3);
  const ProblemDef p = make_damped_sinusoid(g, 4.0, 2.0, 0.3, vec({0.0, 0.6, 0.8}));
  const Vec x = vec({0.3, -1.0, 2.0});
  EXPECT_DOUBLE_EQ(p.objective(x, 0.0), g.value(x));
}

TEST(DampedSinusoid, UndampedUnitSpecializesToExample1) {
  const ProblemDef p = make_damped_sinusoid(quartic_field(1), 10.0, 1.0, 0.0, vec({1.0}));
  const Example1 ex = make_example1(10.0);
  for (double t : {0.0, 0.4, 2.0, 5.5}) {
    for (double x : {-2.0, 0.5, 9.0}) {
      EXPECT_NEAR(p.objective(vec({x}), t), ex.problem.objective(vec({x}), t), 1e-12);
      EXPECT_NEAR(p.grad_objective(vec({x}), t)(0), ex.problem.grad_objective(vec({x}), t)(0), 1e-12);
    }
  }
}

TEST(DampedSinusoid, GradientIsTranslatedFieldGradient) {
  const ScalarField g = quartic_field(2);
  const double beta = 3.0, omega = 1.5, lambda = 0.2;
  const Vec u = vec({0.6, 0.8});
  const ProblemDef p = make_damped_sinusoid(g, beta, omega, lambda, u);
  const double t = 1.3;
  const Vec x = vec({0.5, -0.25});
  const Vec shift = beta * std::exp(-lambda * t) * std::sin(omega * t) * u;
  EXPECT_LE((p.grad_objective(x, t) - g.gradient(x - shift)).norm(), 1e-14);
}

TEST(DampedSinusoid, RejectsNonUnitDirection) {
  EXPECT_THROW(make_damped_sinusoid(quartic_field(2), 1.0, 1.0, 0.0, vec({1.0, 1e-3})), std::invalid_argument);
  EXPECT_THROW(make_damped_sinusoid(quartic_field(2), 1.0, 1.0, 0.0, vec({1.0})), std::invalid_argument);
  EXPECT_THROW(make_damped_sinusoid(quartic_field(1), 1.0, 1.0, -0.1, vec({1.0})), std::invalid_argument);
  EXPECT_NO_THROW(make_damped_sinusoid(quartic_field(1), 1.0, 1.0, 0.0, vec({1.0})));
}

TEST(CheckProblem, RejectsBadDefinitions) {
  ProblemDef p = make_example1(1.0).problem;
  p.alpha = 0.0;
  EXPECT_THROW(check_problem(p), std::invalid_argument);
  p = make_example1(1.0).problem;
  p.horizon = -1.0;
  EXPECT_THROW(check_problem(p), std::invalid_argument);
  p = make_matrix_recovery(true);
  p.m = 7;
  EXPECT_THROW(check_problem(p), std::invalid_argument);
  p = make_matrix_recovery(true);
  p.jacobian = nullptr;
  EXPECT_THROW(check_problem(p), std::invalid_argument);
}

TEST(Validate, Example1Passes) {
  const ValidationReport rep = validate_problem(make_example1(10.0, 0.4).problem, 50, 11);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.samples, 50);
  ASSERT_FALSE(rep.checks.empty());
  for (const auto& c : rep.checks) EXPECT_LE(c.max_rel_deviation, 1e-5) << c.name;
}

TEST(Validate, MatrixRecoveryPassesBothModes) {
  for (bool consistent : {true, false}) {
    const ValidationReport rep = validate_problem(make_matrix_recovery(consistent), 50, 5);
    EXPECT_TRUE(rep.passed()) << "consistent = " << consistent;
    EXPECT_EQ(rep.checks.size(), 5u);
  }
}

TEST(Validate, DetectsCorruptedGradient) {
  ProblemDef p = make_example1(10.0).problem;
  p.grad_objective = [](const Vec&, double) { return Vec::Zero(1); };
  const ValidationReport rep = validate_problem(p, 20, 1);
  EXPECT_FALSE(rep.passed());
  bool flagged = false;
  for (const auto& c : rep.checks) {
    if (c.name == "grad_objective") flagged = !c.passed;
  }
  EXPECT_TRUE(flagged);
}

TEST(Validate, DetectsCorruptedDataRate) {
  ProblemDef p = make_matrix_recovery(true);
  p.data_rate = [](double) { return Vec::Zero(4); };
  const ValidationReport rep = validate_problem(p, 20, 1);
  EXPECT_FALSE(rep.passed());
}

TEST(Validate, ReportsInvariantViolationInsteadOfThrowing) {
  ProblemDef p = make_example1(1.0).problem;
  p.alpha = -1.0;
  ValidationReport rep;
  EXPECT_NO_THROW(rep = validate_problem(p, 5, 1));
  EXPECT_FALSE(rep.passed());
  EXPECT_FALSE(rep.invariant_failures.empty());
}

TEST(Validate, DeterministicGivenSeed) {
  const ProblemDef p = make_matrix_recovery(true);
  const ValidationReport a = validate_problem(p, 10, 42);
  const ValidationReport b = validate_problem(p, 10, 42);
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    EXPECT_EQ(a.checks[i].max_rel_deviation, b.checks[i].max_rel_deviation);
  }
  EXPECT_THROW(validate_problem(p, 0, 1), std::invalid_argument);
}

TEST(QuarticField, LiftsQuartic) {
  const ScalarField f = quartic_field(3);
  const Vec y = vec({-2.0, 0.0, 0.0});
  EXPECT_NEAR(f.gradient(y).norm(), 0.0, 1e-14);
  EXPECT_DOUBLE_EQ(f.value(vec({2.0, 1.0, 1.0})), 2.0 + 1.0);
  EXPECT_DOUBLE_EQ(f.hessian(y)(0, 0), 6.5);
  EXPECT_DOUBLE_EQ(f.hessian(y)(2, 2), 1.0);
}

}  // namespace
}  // namespace tvl
