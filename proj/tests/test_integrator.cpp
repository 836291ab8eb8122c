#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <random>

#include "atm/integrator.hpp"
#include "support.hpp"

namespace {

using atm::Matrix;
using atm::OdeProblem;
using atm::Rational;
using atm::State;

OdeProblem<double> scalar(std::function<double(double)> f, double u0) {
  OdeProblem<double> p;
  p.dim = 1;
  p.u0 = {u0};
  p.rhs = [f](const State<double>& u) { return State<double>{f(u[0])}; };
  return p;
}

TEST(DerivativeRecursion, LinearSystemGivesMatrixPowersExactly) {
  const Matrix<Rational> a{{Rational(1, 2), Rational(-1, 3), 0},
                           {Rational(2), Rational(1, 5), Rational(-1)},
                           {Rational(0), Rational(3, 4), Rational(-2)}};
  const State<Rational> v{1, Rational(-2, 3), Rational(5, 7)};
  const auto problem = atm::linear_problem(a, v);
  for (int R = 1; R <= 7; ++R) {
    const auto stack = atm::derivative_recursion(problem, v, Rational(1, 10), R);
    ASSERT_EQ(stack.derivs.size(), static_cast<std::size_t>(R + 1));
    State<Rational> power = v;
    for (int k = 0; k <= R; ++k) {
      EXPECT_EQ(stack.derivs[static_cast<std::size_t>(k)], power) << "R=" << R << " k=" << k;
      power = a * power;
    }
  }
}

TEST(DerivativeRecursion, OrderOneIsJustTheRhs) {
  int calls = 0;
  OdeProblem<double> p = scalar([&](double u) { ++calls; return std::sin(u); }, 0.3);
  const auto stack = atm::derivative_recursion(p, {0.3}, 0.1, 1);
  ASSERT_EQ(stack.derivs.size(), 2u);
  EXPECT_EQ(stack.derivs[0][0], 0.3);
  EXPECT_EQ(stack.derivs[1][0], std::sin(0.3));
  EXPECT_EQ(calls, 1);
}

TEST(DerivativeRecursion, QuadraticRhsMatchesChainRule) {
  // u' = u^2 at u = 1: u'' = 2 u u' = 2, u''' = 2 u'^2 + 2 u u'' = 6.
  const auto stack = atm::derivative_recursion(scalar([](double u) { return u * u; }, 1.0), {1.0}, 1e-3, 3);
  EXPECT_DOUBLE_EQ(stack.derivs[1][0], 1.0);
  EXPECT_NEAR(stack.derivs[2][0], 2.0, 1e-4);
  EXPECT_NEAR(stack.derivs[3][0], 6.0, 1e-4);
}

TEST(DerivativeRecursion, IncrementsAreScaledDerivatives) {
  const double h = 0.05;
  const auto stack = atm::derivative_recursion(scalar([](double u) { return std::cos(u); }, 0.2), {0.2}, h, 6);
  double fact = 1;
  for (int l = 1; l <= 6; ++l) {
    fact *= l;
    EXPECT_NEAR(stack.w(l)[0], stack.derivs[static_cast<std::size_t>(l)][0] * std::pow(h, l - 1) / fact,
                1e-15 * std::abs(stack.derivs[static_cast<std::size_t>(l)][0]) + 1e-300);
  }
}

TEST(DerivativeRecursion, ReportsNonFiniteSample) {
  // log(u) from u = 0.05: the +h sample of T^1 lands at a negative argument.
  const auto p = scalar([](double u) { return std::log(u); }, 0.05);
  try {
    atm::derivative_recursion(p, {0.05}, 0.1, 2);
    FAIL() << "expected StepFailure";
  } catch (const atm::StepFailure& e) {
    EXPECT_EQ(e.level(), 1);
    EXPECT_EQ(e.offset(), 1);
  }
}

TEST(DerivativeRecursion, RejectsBadInput) {
  const auto p = scalar([](double u) { return u; }, 1.0);
  EXPECT_THROW(atm::derivative_recursion(p, {1.0}, 0.0, 2), atm::DomainError);
  EXPECT_THROW(atm::derivative_recursion(p, {1.0, 2.0}, 0.1, 2), atm::ShapeError);
  EXPECT_THROW(atm::derivative_recursion(p, {1.0}, 0.1, 0), atm::DomainError);
}

TEST(DerivativeRecursion, EvaluationCountIsStageCount) {
  for (int R = 1; R <= 9; ++R) {
    std::atomic<std::size_t> calls{0};
    const auto p = atm::with_eval_counter(scalar([](double u) { return std::sin(u); }, 0.4), calls);
    atm::step(p, {0.4}, 0.1, R);
    std::size_t expected = 1;
    for (int l = 1; l < R; ++l) expected += 2 * static_cast<std::size_t>((l - 1) / 2 + (R - l + 1) / 2);
    EXPECT_EQ(calls.load(), expected) << "R=" << R;
  }
}

TEST(TaylorPolyEval, Basics) {
  const std::vector<State<double>> derivs{{1.0}, {1.0}, {1.0}};
  EXPECT_DOUBLE_EQ(atm::taylor_poly_eval(derivs, 2, 2.0)[0], 5.0);
  EXPECT_DOUBLE_EQ(atm::taylor_poly_eval(derivs, 0, 7.0)[0], 1.0);
  EXPECT_DOUBLE_EQ(atm::taylor_poly_eval(derivs, 2, 0.0)[0], 1.0);
  EXPECT_THROW(atm::taylor_poly_eval(derivs, 3, 1.0), atm::DomainError);
  EXPECT_THROW(atm::taylor_poly_eval(derivs, -1, 1.0), atm::DomainError);
}

TEST(Step, DecayOrderTwoIsTruncatedExponential) {
  // Q(-1/10) = 1 - 1/10 + 1/200 = 181/200
  OdeProblem<Rational> p;
  p.dim = 1;
  p.u0 = {1};
  p.rhs = [](const State<Rational>& u) { return State<Rational>{-u[0]}; };
  EXPECT_EQ(atm::step(p, {1}, Rational(1, 10), 2)[0], Rational(181, 200));
  EXPECT_NEAR(atm::step(scalar([](double u) { return -u; }, 1.0), {1.0}, 0.1, 2)[0], 0.905, 1e-15);
}

TEST(Step, OrderOneIsExplicitEuler) {
  const auto p = scalar([](double u) { return std::exp(u); }, 0.5);
  EXPECT_DOUBLE_EQ(atm::step(p, {0.5}, 0.2, 1)[0], 0.5 + 0.2 * std::exp(0.5));
}

TEST(Step, QuadraticOrderFourLocalError) {
  const auto next = atm::step(scalar([](double u) { return u * u; }, 1.0), {1.0}, 0.01, 4);
  EXPECT_NEAR(next[0], 1.0 / (1.0 - 0.01), 1e-10);
}

TEST(Step, LinearSystemsReproduceTaylor) {
  std::mt19937_64 rng(20170811);
  for (std::size_t m = 1; m <= 8; ++m)
    for (int R = 1; R <= 8; ++R)
      for (double h : {0.1, 0.01}) {
        const auto a = atm::testing::random_matrix(rng, m);
        const auto v = atm::testing::random_state(rng, m);
        const auto approx = atm::step(atm::linear_problem(a, v), v, h, R);
        const auto exact = atm::exact_taylor_linear_step(a, v, h, R);
        EXPECT_LE(atm::testing::rel_max_diff(approx, exact), 1e-12) << "m=" << m << " R=" << R << " h=" << h;
      }
}

TEST(Integrate, ZeroStepsReturnsInitialPoint) {
  const auto traj = atm::integrate(scalar([](double u) { return -u; }, 2.0), 0.1, 0, 4);
  ASSERT_EQ(traj.size(), 1u);
  EXPECT_EQ(traj[0].t, 0.0);
  EXPECT_EQ(traj[0].u[0], 2.0);
}

TEST(Integrate, DecayToOne) {
  const auto traj = atm::integrate(scalar([](double u) { return -u; }, 1.0), 0.1, 10, 4);
  ASSERT_EQ(traj.size(), 11u);
  EXPECT_NEAR(traj.back().t, 1.0, 1e-15);
  EXPECT_NEAR(traj.back().u[0], std::exp(-1.0), 1e-6);
}

TEST(Integrate, HarmonicOscillator) {
  const Matrix<double> a{{0.0, 1.0}, {-1.0, 0.0}};
  const auto traj = atm::integrate(atm::linear_problem(a, {1.0, 0.0}), 0.05, 200, 6);
  EXPECT_NEAR(traj.back().u[0], std::cos(10.0), 1e-7);
  EXPECT_NEAR(traj.back().u[1], -std::sin(10.0), 1e-7);
}

TEST(Integrate, RepeatedDecayStepsArePowersOfQ) {
  const double h = 0.1;
  const double q = 1 - h + h * h / 2 - h * h * h / 6;
  const auto traj = atm::integrate(scalar([](double u) { return -u; }, 1.0), h, 200, 3);
  for (std::size_t n = 0; n < traj.size(); ++n) {
    const double expected = std::pow(q, static_cast<double>(n));
    EXPECT_LE(std::abs(traj[n].u[0] - expected) / expected, static_cast<double>(n) * 1e-14 + 1e-16);
  }
}

TEST(Integrate, FailureKeepsPartialTrajectory) {
  const auto p = scalar([](double u) { return u < 2.0 ? u : std::numeric_limits<double>::quiet_NaN(); }, 1.0);
  try {
    atm::integrate(p, 0.1, 100, 2);
    FAIL() << "expected IntegrationFailure";
  } catch (const atm::IntegrationFailure<double>& e) {
    EXPECT_GE(e.step_index(), 1u);
    EXPECT_EQ(e.partial().size(), e.step_index() + 1);
    EXPECT_LT(e.partial().back().u[0], 2.0);
  }
}

TEST(ExactTaylorLinear, Basics) {
  const State<double> v{0.3, -1.2};
  EXPECT_EQ(atm::exact_taylor_linear_step(Matrix<double>(2, 2), v, 0.5, 5), v);

  const double lambda = -0.7, h = 0.3;
  double q = 0, term = 1;
  for (int k = 0; k <= 4; ++k) {
    q += term;
    term *= h * lambda / (k + 1);
  }
  EXPECT_NEAR(atm::exact_taylor_linear_step(Matrix<double>{{lambda}}, {2.0}, h, 4)[0], 2.0 * q, 1e-15);

  const auto rot = atm::exact_taylor_linear_step(Matrix<double>{{0, 1}, {-1, 0}}, {1.0, 0.0}, 0.1, 10);
  EXPECT_NEAR(rot[0], std::cos(0.1), 1e-10);
  EXPECT_NEAR(rot[1], -std::sin(0.1), 1e-10);

  EXPECT_THROW(atm::exact_taylor_linear_step(Matrix<double>(2, 3), v, 0.1, 2), atm::ShapeError);
  EXPECT_THROW(atm::exact_taylor_linear_step(Matrix<double>(3, 3), v, 0.1, 2), atm::ShapeError);
}

TEST(Autonomize, QuadraticSolutionIsReproduced) {
  // u' = t, u(0) = 0: u = t^2 / 2, within the reach of an order-2 step.
  const auto p = atm::autonomize<double>([](double t, const State<double>&) { return State<double>{t}; }, 1, {0.0}, 0.0);
  EXPECT_EQ(p.dim, 2u);
  EXPECT_EQ(p.u0, (State<double>{0.0, 0.0}));
  EXPECT_EQ(p.rhs({5.0, 2.0}), (State<double>{2.0, 1.0}));
  const auto traj = atm::integrate(p, 0.1, 10, 2);
  for (const auto& pt : traj) EXPECT_NEAR(pt.u[0], pt.t * pt.t / 2, 1e-15);
  EXPECT_NEAR(traj.back().u[1], 1.0, 1e-15);
}

TEST(Autonomize, TimeIndependentRhsDecouples) {
  auto g = [](const State<double>& u) { return State<double>{-u[0] * u[0] + std::sin(u[0])}; };
  const auto p = atm::autonomize<double>([g](double, const State<double>& u) { return g(u); }, 1, {0.7}, 3.0);
  OdeProblem<double> plain;
  plain.dim = 1;
  plain.u0 = {0.7};
  plain.rhs = g;
  const auto a = atm::integrate(p, 0.05, 20, 5);
  const auto b = atm::integrate(plain, 0.05, 20, 5);
  for (std::size_t n = 0; n < a.size(); ++n) {
    EXPECT_EQ(a[n].u[0], b[n].u[0]);
    EXPECT_NEAR(a[n].u[1], 3.0 + a[n].t, 1e-13);
  }
}

TEST(Autonomize, CosineCoefficient) {
  const auto p = atm::autonomize<double>(
      [](double t, const State<double>& u) { return State<double>{std::cos(t) * u[0]}; }, 1, {1.0}, 0.0);
  const auto traj = atm::integrate(p, 0.01, 100, 4);
  EXPECT_NEAR(traj.back().u[0], std::exp(std::sin(1.0)), 1e-6);
}

TEST(Autonomize, RejectsWrongInitialDimension) {
  EXPECT_THROW(atm::autonomize<double>([](double, const State<double>& u) { return u; }, 2, {1.0}, 0.0),
               atm::ShapeError);
}

}  // namespace
