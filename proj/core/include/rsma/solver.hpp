#pragma once

#include <string>
#include <vector>

#include "rsma/types.hpp"

namespace rsma {

// g(x) = c0 + q.x - 0.5 x' P x >= 0 with P symmetric PSD (P may be empty for
// linear constraints).
struct QuadConstraint {
  double c0 = 0.0;
  VecR q;
  MatR P;  // 0x0 when linear

  double value(const VecR& x) const;
  VecR gradient(const VecR& x) const;
};

// maximize obj.x over the intersection of the constraints.
struct ConvexProgram {
  VecR obj;
  std::vector<QuadConstraint> cons;
  int dim() const { return static_cast<int>(obj.size()); }
};

struct SolverOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-6;
  int max_iters = 200;          // Newton iterations per centering step
  double bracket_expand = 2.0;  // reserved for bisection-style uses
};

enum class SolveStatus { Optimal, WarmStartOnly, Infeasible, IterationLimit };

struct SolveResult {
  VecR x;
  double objective = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  int newton_iters = 0;
};

// Log-barrier interior-point solve with a phase-I restoration step. x0 must be
// feasible up to feas_tol; when no strictly feasible point improves on it the
// warm start is returned unchanged.
SolveResult solve_concave_qcp(const ConvexProgram& prog, const VecR& x0,
                              const SolverOptions& opts);

} // namespace rsma
