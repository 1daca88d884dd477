#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rsma/solver.hpp"

using namespace rsma;

namespace {

QuadConstraint linear_con(double c0, std::initializer_list<double> q) {
  QuadConstraint c;
  c.c0 = c0;
  c.q = VecR(static_cast<int>(q.size()));
  int i = 0;
  for (double v : q) c.q[i++] = v;
  return c;
}

} // namespace

TEST_CASE("scalar epigraph toy solves to the known optimum") {
  // maximize r subject to r <= 2w - w^2 and w^2 <= 1; optimum (w, r) = (1, 1).
  ConvexProgram prog;
  prog.obj = VecR::Zero(2);
  prog.obj[1] = 1.0;

  QuadConstraint g1;  // 2w - r - w^2 >= 0
  g1.c0 = 0.0;
  g1.q = VecR(2);
  g1.q << 2.0, -1.0;
  g1.P = MatR::Zero(2, 2);
  g1.P(0, 0) = 2.0;
  prog.cons.push_back(g1);

  QuadConstraint g2;  // 1 - w^2 >= 0
  g2.c0 = 1.0;
  g2.q = VecR::Zero(2);
  g2.P = MatR::Zero(2, 2);
  g2.P(0, 0) = 2.0;
  prog.cons.push_back(g2);

  VecR x0(2);
  x0 << 0.2, 0.1;  // strictly feasible
  const SolveResult res = solve_concave_qcp(prog, x0, SolverOptions{});
  CHECK(res.status == SolveStatus::Optimal);
  CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(res.x[1] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(res.objective == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("two-user max-min agrees with a dense grid search") {
  // maximize min(g1, g2) over x in [-2, 2] via the epigraph variable r:
  //   g1(x) = 4x - x^2,   g2(x) = 2 + 2x - 2x^2,  x^2 <= 4.
  ConvexProgram prog;
  prog.obj = VecR::Zero(2);
  prog.obj[1] = 1.0;

  QuadConstraint g1;
  g1.c0 = 0.0;
  g1.q = VecR(2);
  g1.q << 4.0, -1.0;
  g1.P = MatR::Zero(2, 2);
  g1.P(0, 0) = 2.0;
  prog.cons.push_back(g1);

  QuadConstraint g2;
  g2.c0 = 2.0;
  g2.q = VecR(2);
  g2.q << 2.0, -1.0;
  g2.P = MatR::Zero(2, 2);
  g2.P(0, 0) = 4.0;
  prog.cons.push_back(g2);

  QuadConstraint pw;
  pw.c0 = 4.0;
  pw.q = VecR::Zero(2);
  pw.P = MatR::Zero(2, 2);
  pw.P(0, 0) = 2.0;
  prog.cons.push_back(pw);

  double best = -1e30;
  for (int i = 0; i <= 400000; ++i) {
    const double x = -2.0 + 4.0 * i / 400000.0;
    best = std::max(best, std::min(4.0 * x - x * x, 2.0 + 2.0 * x - 2.0 * x * x));
  }

  VecR x0(2);
  x0 << 0.5, 0.1;
  const SolveResult res = solve_concave_qcp(prog, x0, SolverOptions{});
  CHECK(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(best).epsilon(1e-3));
}

TEST_CASE("warm-start dominance and feasibility of the returned point") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 20; ++rep) {
    const int d = 3;
    ConvexProgram prog;
    prog.obj = VecR::NullaryExpr(d, [&](int) { return nd(rng); });
    for (int c = 0; c < 4; ++c) {
      QuadConstraint con;
      MatR a = MatR::NullaryExpr(d, d, [&](int, int) { return nd(rng); });
      con.P = a * a.transpose() + 0.1 * MatR::Identity(d, d);
      con.q = VecR::NullaryExpr(d, [&](int) { return nd(rng); });
      con.c0 = 1.0 + std::abs(nd(rng));  // x = 0 strictly feasible
      prog.cons.push_back(con);
    }
    const VecR x0 = VecR::Zero(d);
    const SolveResult res = solve_concave_qcp(prog, x0, SolverOptions{});
    CHECK(res.objective >= prog.obj.dot(x0) - 1e-9);
    double min_slack = 1e30;
    for (const auto& con : prog.cons) min_slack = std::min(min_slack, con.value(res.x));
    CHECK(min_slack >= -1e-7);
  }
}

TEST_CASE("equality-pinned program returns the warm start") {
  // x >= 0 and -x >= 0 pin x at 0; no strictly feasible point exists.
  ConvexProgram prog;
  prog.obj = VecR::Ones(1);
  prog.cons.push_back(linear_con(0.0, {1.0}));
  prog.cons.push_back(linear_con(0.0, {-1.0}));
  const SolveResult res = solve_concave_qcp(prog, VecR::Zero(1), SolverOptions{});
  CHECK(res.status == SolveStatus::WarmStartOnly);
  CHECK(std::abs(res.x[0]) <= 1e-9);
}

TEST_CASE("infeasible constraint system is detected") {
  ConvexProgram prog;
  prog.obj = VecR::Ones(1);
  prog.cons.push_back(linear_con(-1.0, {1.0}));   // x >= 1
  prog.cons.push_back(linear_con(-1.0, {-1.0}));  // x <= -1
  const SolveResult res = solve_concave_qcp(prog, VecR::Zero(1), SolverOptions{});
  CHECK(res.status == SolveStatus::Infeasible);
}

TEST_CASE("constraint value and gradient are consistent") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  QuadConstraint con;
  const int d = 4;
  MatR a = MatR::NullaryExpr(d, d, [&](int, int) { return nd(rng); });
  con.P = a * a.transpose();
  con.q = VecR::NullaryExpr(d, [&](int) { return nd(rng); });
  con.c0 = 0.3;
  const VecR x = VecR::NullaryExpr(d, [&](int) { return nd(rng); });
  const VecR g = con.gradient(x);
  for (int i = 0; i < d; ++i) {
    VecR xp = x, xm = x;
    xp[i] += 1e-6;
    xm[i] -= 1e-6;
    const double fd = (con.value(xp) - con.value(xm)) / 2e-6;
    CHECK(g[i] == doctest::Approx(fd).epsilon(1e-6));
  }
}
