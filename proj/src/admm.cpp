#include "cranest/admm.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "cranest/shrinkage.hpp"

namespace cranest {

namespace {

bool all_finite(const ComplexMatrix& m) {
  for (Index k = 0; k < m.size(); ++k) {
    const Complex v = m.data()[k];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

void require_state(const SolverState& s, const ChunkLayout& layout) {
  layout.require_x(s.x, "state X");
  layout.require_x(s.z, "state Z");
  layout.require_x(s.q, "state Q");
  layout.require_x(s.lambda1, "state lambda1");
  layout.require_x(s.lambda2, "state lambda2");
  layout.require_x(s.weights.w, "state W");
}

double relative_change(const ComplexMatrix& now, const ComplexMatrix& before) {
  const double diff = frobenius_norm(now - before);
  if (diff == 0.0) return 0.0;
  return diff / std::max(frobenius_norm(now), std::numeric_limits<double>::min());
}

}  // namespace

void SolverConfig::validate() const {
  reg.validate();
  const double b = effective_beta();
  require(std::isfinite(b) && b > 0.0, ErrorKind::domain,
          "solver config: beta must be > 0 (set it explicitly when alpha1 = alpha2 = 0)");
  require(epsilon > 0.0, ErrorKind::domain, "solver config: epsilon must be > 0");
  require(max_count >= 1, ErrorKind::domain, "solver config: max_count must be >= 1");
  require(max_inner_iters >= 1, ErrorKind::domain, "solver config: max_inner_iters must be >= 1");
  require(tol_primal > 0.0 && tol_change > 0.0, ErrorKind::domain, "solver config: tolerances must be > 0");
}

SolverState SolverState::initial(const ChunkLayout& layout) {
  const ComplexMatrix zero = ComplexMatrix::Zero(layout.x_rows(), layout.x_cols());
  return SolverState{zero, zero, zero, zero, zero, Weights::ones(layout), 0, 0};
}

int SolveReport::total_inner_iterations() const {
  int total = 0;
  for (int n : inner_iterations_used) total += n;
  return total;
}

XUpdateSolver::XUpdateSolver(const ComplexMatrix& a, const RealMatrix& w, double beta, XUpdateMethod method)
    : a_(a), method_(method) {
  require(beta > 0.0, ErrorKind::domain, "x-update: beta must be > 0");
  require(w.rows() == a.cols(), ErrorKind::dimension, "x-update: weights do not match sensing matrix");
  const Index kn = a_.cols();
  const Index l = a_.rows();
  if (method_ == XUpdateMethod::automatic)
    method_ = l < kn ? XUpdateMethod::woodbury : XUpdateMethod::direct;

  p_ = (2.0 * beta * w.array().square()).cwiseInverse().matrix();
  factors_.reserve(static_cast<std::size_t>(w.cols()));
  if (method_ == XUpdateMethod::woodbury) {
    for (Index col = 0; col < w.cols(); ++col) {
      // I_L + A P_l A^H
      Eigen::MatrixXcd inner = a_ * p_.col(col).asDiagonal() * a_.adjoint();
      inner.diagonal().array() += 1.0;
      factors_.emplace_back(inner);
    }
  } else {
    const Eigen::MatrixXcd gram = a_.adjoint() * a_;
    for (Index col = 0; col < w.cols(); ++col) {
      Eigen::MatrixXcd system = gram;
      system.diagonal().array() += p_.col(col).cwiseInverse().array();
      factors_.emplace_back(system);
    }
  }
  for (const auto& f : factors_)
    require(f.info() == Eigen::Success, ErrorKind::divergence, "x-update: system not positive definite");
}

ComplexMatrix XUpdateSolver::solve(const ComplexMatrix& d) const {
  require(d.rows() == p_.rows() && d.cols() == p_.cols(), ErrorKind::dimension, "x-update: D has wrong shape");
  ComplexMatrix x(d.rows(), d.cols());
  Eigen::VectorXcd col_d;
  for (Index col = 0; col < d.cols(); ++col) {
    col_d = d.col(col);
    const auto& factor = factors_[static_cast<std::size_t>(col)];
    if (method_ == XUpdateMethod::woodbury) {
      // (P - P A^H (I + A P A^H)^-1 A P) d
      const Eigen::VectorXcd pd = p_.col(col).cwiseProduct(col_d);
      const Eigen::VectorXcd correction = a_.adjoint() * factor.solve(a_ * pd);
      x.col(col) = pd - p_.col(col).cwiseProduct(correction);
    } else {
      x.col(col) = factor.solve(col_d);
    }
  }
  return x;
}

ComplexMatrix x_update_rhs(const SolverState& state, const ComplexMatrix& a_h_b, double beta) {
  const auto& w = state.weights.w.array();
  return (beta * w * (state.z + state.q).array() + a_h_b.array() -
          w * (state.lambda1 + state.lambda2).array())
      .matrix();
}

ComplexMatrix x_update(const SolverState& state, const ComplexMatrix& a, const ComplexMatrix& b,
                       const SolverConfig& config, const ChunkLayout& layout) {
  config.validate();
  layout.require_a(a);
  layout.require_b(b);
  require_state(state, layout);
  const double beta = config.effective_beta();
  const ComplexMatrix a_h_b = a.adjoint() * b;
  return XUpdateSolver(a, state.weights.w, beta).solve(x_update_rhs(state, a_h_b, beta));
}

double stationarity_residual(const ComplexMatrix& x, const ComplexMatrix& d, const ComplexMatrix& a,
                             const RealMatrix& w, double beta) {
  const ComplexMatrix lhs =
      (2.0 * beta * w.array().square() * x.array()).matrix() + a.adjoint() * (a * x);
  double worst = 0.0;
  for (Index col = 0; col < x.cols(); ++col) {
    const double num = (lhs.col(col) - d.col(col)).norm();
    const double den = d.col(col).norm();
    worst = std::max(worst, den > 0.0 ? num / den : num);
  }
  return worst;
}

ComplexMatrix z_update(const SolverState& state, const SolverConfig& config, const ChunkLayout& layout) {
  const double beta = config.effective_beta();
  ComplexMatrix v = state.weighted_x() + state.lambda1 / beta;
  chunk_shrink_inplace(v, layout, Granularity::row_chunk, config.reg.alpha1 / beta);
  return v;
}

ComplexMatrix q_update(const SolverState& state, const SolverConfig& config, const ChunkLayout& layout) {
  const double beta = config.effective_beta();
  ComplexMatrix v = state.weighted_x() + state.lambda2 / beta;
  chunk_shrink_inplace(v, layout, Granularity::element_chunk, config.reg.alpha2 / beta);
  return v;
}

std::pair<ComplexMatrix, ComplexMatrix> dual_update(const SolverState& state, const SolverConfig& config) {
  const double beta = config.effective_beta();
  const ComplexMatrix wx = state.weighted_x();
  return {state.lambda1 - beta * (state.z - wx), state.lambda2 - beta * (state.q - wx)};
}

InnerResult inner_solve(const ComplexMatrix& a, const ComplexMatrix& b, const Weights& weights,
                        const SolverConfig& config, const ChunkLayout& layout,
                        std::optional<SolverState> init, const IterationObserver& observer) {
  config.validate();
  layout.validate();
  layout.require_a(a);
  layout.require_b(b);
  layout.require_x(weights.w, "inner_solve weights");
  weights.validate();

  InnerResult out;
  out.state = init ? std::move(*init) : SolverState::initial(layout);
  out.state.weights = weights;
  require_state(out.state, layout);

  SolverState& s = out.state;
  const double beta = config.effective_beta();
  const ComplexMatrix a_h_b = a.adjoint() * b;
  const XUpdateSolver x_solver(a, weights.w, beta);

  for (int iter = 1; iter <= config.max_inner_iters; ++iter) {
    const ComplexMatrix x_prev = s.x;
    const ComplexMatrix d = x_update_rhs(s, a_h_b, beta);
    s.x = x_solver.solve(d);
    if (!all_finite(s.x))
      fail(ErrorKind::divergence, "admm: non-finite X at pass " + std::to_string(s.outer_iter) +
                                      ", inner iteration " + std::to_string(iter));
    if (observer) observer(s, d);

    // Z and Q read only X and their own multiplier, so their order is irrelevant.
    s.z = z_update(s, config, layout);
    s.q = q_update(s, config, layout);
    std::tie(s.lambda1, s.lambda2) = dual_update(s, config);
    s.inner_iter = iter;
    if (!all_finite(s.lambda1) || !all_finite(s.lambda2))
      fail(ErrorKind::divergence, "admm: non-finite multipliers at pass " + std::to_string(s.outer_iter) +
                                      ", inner iteration " + std::to_string(iter));

    const ComplexMatrix wx = s.weighted_x();
    const double scale = std::max(1.0, frobenius_norm(wx));
    IterationRecord rec;
    rec.outer_pass = s.outer_iter;
    rec.inner_iter = iter;
    rec.objective = objective(s.x, a, b, weights, config.reg, layout);
    rec.primal_residual_z = frobenius_norm(s.z - wx) / scale;
    rec.primal_residual_q = frobenius_norm(s.q - wx) / scale;
    rec.dx_rel = relative_change(s.x, x_prev);
    out.history.push_back(rec);

    if (std::max(rec.primal_residual_z, rec.primal_residual_q) <= config.tol_primal &&
        rec.dx_rel <= config.tol_change) {
      out.converged = true;
      break;
    }
  }
  return out;
}

ComplexMatrix support_projection(const SolverState& state, const SolverConfig& config,
                                 const ChunkLayout& layout) {
  ComplexMatrix x = state.x;
  const ComplexMatrix wx = state.weighted_x();
  // Chunks below the primal tolerance are not resolved by the iteration.
  const double floor = config.tol_primal * std::max(1.0, frobenius_norm(wx));
  const Index n = layout.user_antennas;
  const Index m = layout.rrh_antennas;
  for (Index i = 0; i < layout.users; ++i) {
    if (config.reg.alpha1 > 0.0 &&
        (state.z.middleRows(i * n, n).isZero(0.0) || frobenius_norm(wx.middleRows(i * n, n)) <= floor)) {
      x.middleRows(i * n, n).setZero();
      continue;
    }
    if (config.reg.alpha2 > 0.0) {
      for (Index j = 0; j < layout.rrhs; ++j)
        if (state.q.block(i * n, j * m, n, m).isZero(0.0) ||
            frobenius_norm(wx.block(i * n, j * m, n, m)) <= floor)
          x.block(i * n, j * m, n, m).setZero();
    }
  }
  return x;
}

SolveReport solve(const ComplexMatrix& a, const ComplexMatrix& b, const SolverConfig& config,
                  const ChunkLayout& layout, const IterationObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  layout.validate();
  layout.require_a(a);
  layout.require_b(b);

  SolveReport report;
  if (config.reg.is_plain_least_squares())
    report.warnings.push_back("alpha1 = alpha2 = 0: solving plain least squares");

  Weights weights = Weights::ones(layout);
  weights.epsilon = config.epsilon;
  std::optional<SolverState> warm;
  for (int pass = 1; pass <= config.max_count; ++pass) {
    if (pass > 1) {
      weights = weight_update(report.x_hat, config.epsilon);
      SolverState next = std::move(report.final_state);
      next.x = report.x_hat;
      next.weights = weights;
      next.z = next.weighted_x();
      next.q = next.z;
      next.lambda1.setZero();
      next.lambda2.setZero();
      warm = std::move(next);
    }
    const TuningBounds bounds = tuning_bounds(a, b, weights, layout);
    if ((config.reg.alpha1 > 0.0 && config.reg.alpha1 >= bounds.alpha1_star) ||
        (config.reg.alpha2 > 0.0 && config.reg.alpha2 >= bounds.alpha2_star))
      report.warnings.push_back("pass " + std::to_string(pass) +
                                ": penalty at or above the zero-solution bound; estimate will be zero");

    SolverState seed = warm ? std::move(*warm) : SolverState::initial(layout);
    seed.outer_iter = pass;
    InnerResult inner = inner_solve(a, b, weights, config, layout, std::move(seed), observer);
    report.history.insert(report.history.end(), inner.history.begin(), inner.history.end());
    report.inner_iterations_used.push_back(static_cast<int>(inner.history.size()));
    report.pass_converged.push_back(inner.converged);
    if (!inner.converged)
      report.warnings.push_back("pass " + std::to_string(pass) + ": stopped at max_inner_iters without meeting tolerances");
    report.final_state = std::move(inner.state);
    report.x_hat = support_projection(report.final_state, config, layout);
    warm.reset();
  }
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace cranest
