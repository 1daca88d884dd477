#include "rsma/solver.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace rsma {

double QuadConstraint::value(const VecR& x) const {
  double v = c0 + q.dot(x);
  if (P.size() > 0) v -= 0.5 * x.dot(P * x);
  return v;
}

VecR QuadConstraint::gradient(const VecR& x) const {
  if (P.size() > 0) return q - P * x;
  return q;
}

namespace {

double min_slack(const ConvexProgram& prog, const VecR& x) {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& c : prog.cons) s = std::min(s, c.value(x));
  return s;
}

struct CenterResult {
  VecR x;
  int iters = 0;
  bool converged = false;
};

// Newton minimization of -t c'x - sum ln g_i(x) from a strictly feasible x.
CenterResult center(const ConvexProgram& prog, VecR x, double t, int max_iters) {
  const int n = prog.dim();
  const int m = static_cast<int>(prog.cons.size());
  CenterResult res;

  auto phi = [&](const VecR& y) {
    double v = -t * prog.obj.dot(y);
    for (const auto& c : prog.cons) {
      const double g = c.value(y);
      if (g <= 0.0) return std::numeric_limits<double>::infinity();
      v -= std::log(g);
    }
    return v;
  };

  VecR grad(n);
  MatR hess(n, n);
  for (int it = 0; it < max_iters; ++it) {
    grad = -t * prog.obj;
    hess.setZero();
    for (int i = 0; i < m; ++i) {
      const auto& c = prog.cons[i];
      const double g = c.value(x);
      if (g <= 0.0) throw NumericalError("barrier iterate left the feasible region");
      const VecR dg = c.gradient(x);
      grad -= dg / g;
      hess += (dg * dg.transpose()) / (g * g);
      if (c.P.size() > 0) hess += c.P / g;
    }

    VecR d;
    double ridge = 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      MatR H = hess;
      if (ridge > 0.0) H.diagonal().array() += ridge;
      Eigen::LDLT<MatR> ldlt(H);
      if (ldlt.info() == Eigen::Success) {
        d = -ldlt.solve(grad);
        if (d.allFinite() && grad.dot(d) < 0.0) break;
      }
      ridge = (ridge == 0.0) ? 1e-10 * (1.0 + hess.diagonal().maxCoeff()) : ridge * 100.0;
      d.resize(0);
    }
    if (d.size() == 0) {
      res.x = x;
      res.iters = it;
      return res;  // stuck; caller treats current point as the answer
    }

    const double lambda2 = -grad.dot(d);
    if (lambda2 * 0.5 < 1e-10) {
      res.x = x;
      res.iters = it;
      res.converged = true;
      return res;
    }

    // backtrack into the domain, then Armijo
    const double phi0 = phi(x);
    double alpha = 1.0;
    int bt = 0;
    while (bt < 60 && phi(x + alpha * d) > phi0 + 0.25 * alpha * grad.dot(d)) {
      alpha *= 0.5;
      ++bt;
    }
    if (bt >= 60) {
      res.x = x;
      res.iters = it;
      res.converged = true;  // no progress representable
      return res;
    }
    x += alpha * d;
  }
  res.x = x;
  res.iters = max_iters;
  return res;
}

struct BarrierOut {
  VecR x;
  int iters = 0;
};

BarrierOut barrier_maximize(const ConvexProgram& prog, VecR x, double target_gap,
                            const SolverOptions& opts) {
  const int m = static_cast<int>(prog.cons.size());
  double t = 1.0;
  BarrierOut out;
  while (true) {
    CenterResult c = center(prog, x, t, opts.max_iters);
    x = c.x;
    out.iters += c.iters;
    if (m / t <= target_gap) break;
    t *= 10.0;
    if (t > 1e16) break;
  }
  out.x = x;
  return out;
}

} // namespace

SolveResult solve_concave_qcp(const ConvexProgram& prog, const VecR& x0,
                              const SolverOptions& opts) {
  SolveResult res;
  res.x = x0;
  res.objective = prog.obj.dot(x0);
  if (prog.cons.empty()) {
    res.status = SolveStatus::Optimal;
    return res;
  }

  const double g0 = min_slack(prog, x0);
  VecR x_strict;
  if (g0 > 1e-7) {
    x_strict = x0;
  } else {
    // phase I: maximize the minimum slack s with (x, s) jointly
    const int n = prog.dim();
    ConvexProgram p1;
    p1.obj = VecR::Zero(n + 1);
    p1.obj[n] = 1.0;
    for (const auto& c : prog.cons) {
      QuadConstraint qc;
      qc.c0 = c.c0;
      qc.q = VecR::Zero(n + 1);
      qc.q.head(n) = c.q.size() ? c.q : VecR::Zero(n);
      qc.q[n] = -1.0;
      if (c.P.size() > 0) {
        qc.P = MatR::Zero(n + 1, n + 1);
        qc.P.topLeftCorner(n, n) = c.P;
      }
      p1.cons.push_back(std::move(qc));
    }
    const double s_cap = 0.1;
    const double s_lo = g0 - 1.0;
    {
      QuadConstraint hi;  // s <= s_cap
      hi.c0 = s_cap;
      hi.q = VecR::Zero(n + 1);
      hi.q[n] = -1.0;
      p1.cons.push_back(hi);
      QuadConstraint lo;  // s >= s_lo - 1
      lo.c0 = -(s_lo - 1.0);
      lo.q = VecR::Zero(n + 1);
      lo.q[n] = 1.0;
      p1.cons.push_back(lo);
      // Trust region around the warm start. The restoration problem is
      // otherwise unbounded in x (slacks such as the epigraph floor grow
      // without limit), which sends the centering iterates to overflow.
      const double R = 100.0 * (1.0 + x0.norm());
      QuadConstraint tr;
      tr.c0 = R * R - x0.squaredNorm();
      tr.q = VecR::Zero(n + 1);
      tr.q.head(n) = 2.0 * x0;
      tr.P = MatR::Zero(n + 1, n + 1);
      tr.P.topLeftCorner(n, n) = 2.0 * MatR::Identity(n, n);
      p1.cons.push_back(std::move(tr));
    }
    VecR y0(n + 1);
    y0.head(n) = x0;
    y0[n] = s_lo;
    // Stage the barrier by hand so the restoration can stop as soon as a
    // strictly feasible point for the original program appears.
    BarrierOut b1;
    b1.x = y0;
    {
      const int m1 = static_cast<int>(p1.cons.size());
      double t = 1.0;
      while (true) {
        CenterResult c = center(p1, b1.x, t, opts.max_iters);
        b1.x = c.x;
        b1.iters += c.iters;
        if (min_slack(prog, b1.x.head(n)) > 1e-6) break;
        if (m1 / t <= 1e-9) break;
        t *= 10.0;
        if (t > 1e16) break;
      }
    }
    res.newton_iters += b1.iters;
    const double strict_slack = min_slack(prog, b1.x.head(n));
    const double s_star = std::max(b1.x[n], strict_slack);
    if (std::getenv("RSMA_SOLVER_DEBUG")) {
      int worst = -1;
      double wv = std::numeric_limits<double>::infinity();
      for (int i = 0; i < static_cast<int>(prog.cons.size()); ++i) {
        const double v = prog.cons[i].value(x0);
        if (v < wv) { wv = v; worst = i; }
      }
      std::fprintf(stderr, "[solver] dim=%d m=%zu g0=%.3e (con %d) s*=%.3e iters=%d\n",
                   prog.dim(), prog.cons.size(), g0, worst, s_star, b1.iters);
    }
    if (s_star < -opts.feas_tol) {
      res.status = SolveStatus::Infeasible;
      return res;
    }
    if (s_star <= 1e-9) {
      // warm start is (numerically) the only feasible point
      res.status = SolveStatus::WarmStartOnly;
      return res;
    }
    x_strict = b1.x.head(n);
    if (min_slack(prog, x_strict) <= 0.0) {
      res.status = SolveStatus::WarmStartOnly;
      return res;
    }
  }

  BarrierOut b2 = barrier_maximize(prog, x_strict, 0.2 * opts.opt_tol, opts);
  res.newton_iters += b2.iters;
  if (std::getenv("RSMA_SOLVER_DEBUG"))
    std::fprintf(stderr,
                 "[solver] phase2 iters=%d obj=%.6e warm=%.6e strict_slack=%.3e\n",
                 b2.iters, prog.obj.dot(b2.x), prog.obj.dot(x0),
                 min_slack(prog, x_strict));
  res.x = b2.x;
  res.objective = prog.obj.dot(b2.x);
  // MM warm-start dominance: never report a point worse than the warm start
  if (res.objective < prog.obj.dot(x0) && min_slack(prog, x0) >= -opts.feas_tol) {
    res.x = x0;
    res.objective = prog.obj.dot(x0);
    res.status = SolveStatus::WarmStartOnly;
    return res;
  }
  res.status = SolveStatus::Optimal;
  return res;
}

} // namespace rsma
