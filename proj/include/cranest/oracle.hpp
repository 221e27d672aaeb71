#pragma once

#include <vector>

#include "cranest/functional.hpp"
#include "cranest/matcore.hpp"

namespace cranest {

struct OracleConfig {
  int max_iters = 20000;
  double tol_grad = 1e-10;        // gradient-mapping norm, relative to max(1, ||A^H B||)
  int power_iters = 100;          // Lipschitz estimate
  double lipschitz_inflation = 1.02;

  void validate() const;
};

struct OracleResult {
  ComplexMatrix x;
  double objective = 0.0;
  int iterations = 0;
  double lipschitz = 0.0;
  std::vector<double> objective_history;  // accepted objective after each iteration
};

/// Monotone accelerated proximal gradient for the weighted functional with W fixed.
/// Stops when the composite gradient mapping at the extrapolated point is below tol_grad.
///
/// Works in Y = W o X, where both penalties are plain chunk norms and their
/// joint prox is exact: element-chunk shrink by step*alpha2 followed by
/// row-chunk shrink by step*alpha1. Used as ground truth on small instances.
OracleResult prox_grad_solve(const ComplexMatrix& a, const ComplexMatrix& b, const Weights& weights,
                             const Regularization& reg, const ChunkLayout& layout,
                             const OracleConfig& config = {});

/// Largest eigenvalue of diag(1/w_l) A^H A diag(1/w_l) over columns l (power iteration).
double lipschitz_estimate(const ComplexMatrix& a, const RealMatrix& w, int iterations);

struct KktBreakdown {
  double stationarity = 0.0;      // ||G|| on the nonzero support, scaled
  double dual_feasibility = 0.0;  // worst excess of a zero chunk's dual bound, scaled
  double residual() const { return std::max(stationarity, dual_feasibility); }
};

/// Subgradient optimality check. G = A^H (A X - B) + alpha1 V + alpha2 U, with
/// V, U the closed-form subgradients on nonzero chunks. A zero row chunk is
/// feasible iff the element-shrunk ||shrink(-G_i o W_i^-1, alpha2)|| <= alpha1; a
/// zero element chunk inside a nonzero row needs ||G_ij o W_ij^-1|| <= alpha2.
/// Both parts are divided by max(1, ||A^H B||_F). Chunks count as zero only
/// when exactly zero.
KktBreakdown kkt_breakdown(const ComplexMatrix& x, const ComplexMatrix& a, const ComplexMatrix& b,
                           const Weights& weights, const Regularization& reg, const ChunkLayout& layout);

double kkt_residual(const ComplexMatrix& x, const ComplexMatrix& a, const ComplexMatrix& b,
                    const Weights& weights, const Regularization& reg, const ChunkLayout& layout);

}  // namespace cranest
