#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cranest/functional.hpp"
#include "cranest/matcore.hpp"

namespace cranest {

inline constexpr double kDefaultBetaScale = 4.0;

struct SolverConfig {
  Regularization reg;
  std::optional<double> beta;  // defaults to 4 (alpha1 + alpha2)
  double epsilon = 1e-8;       // weight floor for re-weighting
  int max_count = 2;           // re-weighting passes
  int max_inner_iters = 500;
  double tol_primal = 1e-6;
  double tol_change = 1e-8;

  double effective_beta() const { return beta ? *beta : kDefaultBetaScale * (reg.alpha1 + reg.alpha2); }
  void validate() const;
};

/// ADMM iterates for the split problem Z = W o X, Q = W o X.
struct SolverState {
  ComplexMatrix x, z, q, lambda1, lambda2;
  Weights weights;
  int inner_iter = 0;
  int outer_iter = 0;

  /// Z = Q = lambda1 = lambda2 = X = 0, W = 1.
  static SolverState initial(const ChunkLayout& layout);
  ComplexMatrix weighted_x() const { return (weights.w.array() * x.array()).matrix(); }
};

struct IterationRecord {
  int outer_pass = 0;  // 1-based
  int inner_iter = 0;  // 1-based within the pass
  double objective = 0.0;
  double primal_residual_z = 0.0;  // ||Z - W o X|| / max(1, ||W o X||)
  double primal_residual_q = 0.0;
  double dx_rel = 0.0;
};

struct SolveReport {
  ComplexMatrix x_hat;
  std::vector<IterationRecord> history;
  std::vector<int> inner_iterations_used;  // one entry per pass
  std::vector<bool> pass_converged;
  SolverState final_state;
  double wall_time_s = 0.0;
  std::vector<std::string> warnings;

  int total_inner_iterations() const;
};

enum class XUpdateMethod { automatic, woodbury, direct };

/// Column-wise solver for (2 beta diag(w_l^2) + A^H A) x_l = d_l.
///
/// Factorizations depend on W and beta only, so one instance serves every
/// inner iteration of a re-weighting pass. `automatic` picks the L x L
/// Woodbury form when L < KN and the KN x KN system otherwise.
class XUpdateSolver {
 public:
  XUpdateSolver(const ComplexMatrix& a, const RealMatrix& w, double beta,
                XUpdateMethod method = XUpdateMethod::automatic);

  ComplexMatrix solve(const ComplexMatrix& d) const;
  XUpdateMethod method() const { return method_; }

 private:
  Eigen::MatrixXcd a_;   // L x KN
  Eigen::MatrixXd p_;    // KN x GM, 1 / (2 beta w^2)
  XUpdateMethod method_;
  std::vector<Eigen::LLT<Eigen::MatrixXcd>> factors_;
};

/// D = beta W o (Z + Q) + A^H B - W o (lambda1 + lambda2).
ComplexMatrix x_update_rhs(const SolverState& state, const ComplexMatrix& a_h_b, double beta);

/// Minimizer of the augmented Lagrangian in X.
ComplexMatrix x_update(const SolverState& state, const ComplexMatrix& a, const ComplexMatrix& b,
                       const SolverConfig& config, const ChunkLayout& layout);

/// Largest per-column ||(2 beta W^2 o X + A^H A X - D)_l|| / ||D_l|| (absolute when D_l = 0).
double stationarity_residual(const ComplexMatrix& x, const ComplexMatrix& d, const ComplexMatrix& a,
                             const RealMatrix& w, double beta);

ComplexMatrix z_update(const SolverState& state, const SolverConfig& config, const ChunkLayout& layout);
ComplexMatrix q_update(const SolverState& state, const SolverConfig& config, const ChunkLayout& layout);

/// (lambda1 - beta (Z - W o X), lambda2 - beta (Q - W o X)).
std::pair<ComplexMatrix, ComplexMatrix> dual_update(const SolverState& state, const SolverConfig& config);

/// Called after every X-update with the new state (Z, Q, duals not yet updated) and the D used.
using IterationObserver = std::function<void(const SolverState& state, const ComplexMatrix& d)>;

struct InnerResult {
  SolverState state;
  std::vector<IterationRecord> history;
  bool converged = false;
};

/// ADMM iterations for fixed weights until both scaled primal residuals are
/// below tol_primal and the relative change of X is below tol_change.
InnerResult inner_solve(const ComplexMatrix& a, const ComplexMatrix& b, const Weights& weights,
                        const SolverConfig& config, const ChunkLayout& layout,
                        std::optional<SolverState> init = std::nullopt,
                        const IterationObserver& observer = {});

/// X with every chunk zeroed whose shrinkage output (Z row chunk or Q element
/// chunk) is exactly zero, or whose weighted norm is at most
/// tol_primal * max(1, ||W o X||). Penalties with a zero alpha do not contribute.
ComplexMatrix support_projection(const SolverState& state, const SolverConfig& config,
                                 const ChunkLayout& layout);

/// Re-weighted outer loop: pass 1 with W = 1, later passes with W from the
/// previous estimate, X warm-started and multipliers reset.
SolveReport solve(const ComplexMatrix& a, const ComplexMatrix& b, const SolverConfig& config,
                  const ChunkLayout& layout, const IterationObserver& observer = {});

}  // namespace cranest
