#pragma once

// Dense phase-1 simplex for tiny equality-constrained feasibility problems:
// does Ax = b admit x >= 0? Minimizes the sum of artificial variables with
// Bland's rule; the problems here have at most a few hundred variables, so
// a plain dense tableau is the right tool.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace ontoscope {

struct LinearFeasibility {
  bool feasible = false;
  double residual = 0.0;         // phase-1 objective at the optimum
  std::vector<double> solution;  // a feasible point when feasible
};

inline LinearFeasibility solve_feasibility(Eigen::MatrixXd a, Eigen::VectorXd b,
                                           double tol = 1e-9) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != m)
    throw std::invalid_argument("solve_feasibility: shape mismatch");

  for (Eigen::Index i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      a.row(i) = -a.row(i);
      b[i] = -b[i];
    }
  }

  // Tableau: original vars | artificials | rhs. Basis starts as artificials.
  Eigen::MatrixXd tab(m + 1, n + m + 1);
  tab.setZero();
  tab.block(0, 0, m, n) = a;
  tab.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  tab.block(0, n + m, m, 1) = b;

  // Phase-1 objective row in reduced form for the artificial basis: the sum
  // of all constraint rows over the original columns.
  for (Eigen::Index j = 0; j <= n + m; ++j) {
    if (j >= n && j < n + m) continue;
    tab(m, j) = tab.block(0, j, m, 1).sum();
  }

  std::vector<Eigen::Index> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = n + i;

  const double pivot_tol = 1e-12;
  while (true) {
    // Bland: smallest-index entering column with positive reduced cost.
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (tab(m, j) > pivot_tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    double best_ratio = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (tab(i, enter) > pivot_tol) {
        const double ratio = tab(i, n + m) / tab(i, enter);
        if (leave < 0 || ratio < best_ratio - pivot_tol ||
            (ratio < best_ratio + pivot_tol && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0)
      throw std::runtime_error("solve_feasibility: unbounded phase-1 objective");

    tab.row(leave) /= tab(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double factor = tab(i, enter);
      if (factor != 0.0) tab.row(i) -= factor * tab.row(leave);
    }
    basis[leave] = enter;
  }

  LinearFeasibility out;
  out.residual = tab(m, n + m);
  out.feasible = out.residual <= tol;
  if (out.feasible) {
    out.solution.assign(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index i = 0; i < m; ++i)
      if (basis[i] < n) out.solution[static_cast<std::size_t>(basis[i])] = tab(i, n + m);
  }
  return out;
}

}  // namespace ontoscope
