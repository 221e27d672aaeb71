#include "cranest/oracle.hpp"

#include <cmath>

#include "cranest/rng.hpp"
#include "cranest/shrinkage.hpp"

namespace cranest {

void OracleConfig::validate() const {
  require(max_iters >= 1, ErrorKind::domain, "oracle: max_iters must be >= 1");
  require(tol_grad > 0.0, ErrorKind::domain, "oracle: tol_grad must be > 0");
  require(power_iters >= 1 && lipschitz_inflation >= 1.0, ErrorKind::domain,
          "oracle: invalid power iterations or inflation");
}

double lipschitz_estimate(const ComplexMatrix& a, const RealMatrix& w, int iterations) {
  const Eigen::MatrixXcd op = a;
  double largest = 0.0;
  RngStream rng(0x5eed);
  for (Index col = 0; col < w.cols(); ++col) {
    const Eigen::VectorXd inv_w = w.col(col).cwiseInverse();
    Eigen::VectorXcd v(op.cols());
    for (Index k = 0; k < v.size(); ++k) v[k] = rng.complex_normal();
    v.normalize();
    double estimate = 0.0;
    for (int it = 0; it < iterations; ++it) {
      Eigen::VectorXcd next = inv_w.cwiseProduct(op.adjoint() * (op * inv_w.cwiseProduct(v)));
      estimate = next.norm();
      if (estimate == 0.0) break;
      v = next / estimate;
    }
    largest = std::max(largest, estimate);
  }
  return largest;
}

OracleResult prox_grad_solve(const ComplexMatrix& a, const ComplexMatrix& b, const Weights& weights,
                             const Regularization& reg, const ChunkLayout& layout,
                             const OracleConfig& config) {
  config.validate();
  reg.validate();
  layout.validate();
  layout.require_a(a);
  layout.require_b(b);
  layout.require_x(weights.w, "oracle weights");
  weights.validate();

  const RealMatrix inv_w = weights.w.cwiseInverse();
  const auto to_x = [&](const ComplexMatrix& y) -> ComplexMatrix { return (inv_w.array() * y.array()).matrix(); };
  const auto value = [&](const ComplexMatrix& y) { return objective(to_x(y), a, b, weights, reg, layout); };

  OracleResult out;
  out.lipschitz = config.lipschitz_inflation * lipschitz_estimate(a, weights.w, config.power_iters);
  const ComplexMatrix zero = ComplexMatrix::Zero(layout.x_rows(), layout.x_cols());
  if (out.lipschitz == 0.0) {
    out.x = zero;
    out.objective = value(zero);
    return out;
  }
  const double step = 1.0 / out.lipschitz;
  const double stop = config.tol_grad * std::max(1.0, frobenius_norm(a.adjoint() * b));

  ComplexMatrix y_cur = zero;       // accepted iterate (W-scaled)
  ComplexMatrix y_prev = zero;
  ComplexMatrix extrapolated = zero;
  double f_cur = value(y_cur);
  double t = 1.0;
  out.objective_history.reserve(static_cast<std::size_t>(std::min(config.max_iters, 100000)));

  for (int iter = 1; iter <= config.max_iters; ++iter) {
    const ComplexMatrix residual = a * to_x(extrapolated) - b;
    const ComplexMatrix grad = (inv_w.array() * (a.adjoint() * residual).array()).matrix();
    ComplexMatrix candidate = extrapolated - step * grad;
    chunk_shrink_inplace(candidate, layout, Granularity::element_chunk, step * reg.alpha2);
    chunk_shrink_inplace(candidate, layout, Granularity::row_chunk, step * reg.alpha1);
    const double f_candidate = value(candidate);
    for (Index k = 0; k < candidate.size(); ++k) {
      const Complex v = candidate.data()[k];
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        fail(ErrorKind::divergence, "oracle: non-finite iterate at iteration " + std::to_string(iter));
    }

    const double mapping = frobenius_norm(extrapolated - candidate) / step;

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y_prev = y_cur;
    if (f_candidate <= f_cur) {
      y_cur = candidate;
      f_cur = f_candidate;
      extrapolated = y_cur + ((t - 1.0) / t_next) * (y_cur - y_prev);
      t = t_next;
    } else {
      // Monotone step: keep the previous point, pull the momentum toward the candidate, restart.
      extrapolated = y_cur + (t / t_next) * (candidate - y_cur);
      t = 1.0;
    }
    out.objective_history.push_back(f_cur);
    out.iterations = iter;

    if (mapping <= stop) break;
  }
  out.x = to_x(y_cur);
  out.objective = f_cur;
  return out;
}

KktBreakdown kkt_breakdown(const ComplexMatrix& x, const ComplexMatrix& a, const ComplexMatrix& b,
                           const Weights& weights, const Regularization& reg, const ChunkLayout& layout) {
  layout.require_x(x, "kkt x");
  layout.require_a(a);
  layout.require_b(b);
  layout.require_x(weights.w, "kkt weights");

  const ComplexMatrix grad = a.adjoint() * (a * x - b);
  const double scale = std::max(1.0, frobenius_norm(a.adjoint() * b));
  const RealMatrix& w = weights.w;
  const Index n = layout.user_antennas;
  const Index m = layout.rrh_antennas;

  double stationarity_sq = 0.0;
  double dual = 0.0;
  for (Index i = 0; i < layout.users; ++i) {
    const auto rows = Eigen::seqN(i * n, n);
    const ComplexMatrix wx = (w(rows, Eigen::all).array() * x(rows, Eigen::all).array()).matrix();
    const double row_norm = frobenius_norm(wx);
    if (row_norm == 0.0) {
      ComplexMatrix dual_row = (-grad(rows, Eigen::all).array() / w(rows, Eigen::all).array()).matrix();
      for (Index j = 0; j < layout.rrhs; ++j) shrink_block(dual_row.block(0, j * m, n, m), reg.alpha2);
      dual = std::max(dual, std::max(frobenius_norm(dual_row) - reg.alpha1, 0.0));
      continue;
    }
    const ComplexMatrix row_subgrad =
        (w(rows, Eigen::all).array().square() * x(rows, Eigen::all).array()).matrix() / row_norm;
    for (Index j = 0; j < layout.rrhs; ++j) {
      const auto cols = Eigen::seqN(j * m, m);
      const double elem_norm = frobenius_norm(wx(Eigen::all, cols));
      if (elem_norm == 0.0) {
        const ComplexMatrix scaled = (grad(rows, cols).array() / w(rows, cols).array()).matrix();
        dual = std::max(dual, std::max(frobenius_norm(scaled) - reg.alpha2, 0.0));
        continue;
      }
      ComplexMatrix r = grad(rows, cols) + reg.alpha1 * row_subgrad(Eigen::all, cols);
      r += reg.alpha2 * (w(rows, cols).array().square() * x(rows, cols).array()).matrix() / elem_norm;
      stationarity_sq += r.squaredNorm();
    }
  }
  return KktBreakdown{std::sqrt(stationarity_sq) / scale, dual / scale};
}

double kkt_residual(const ComplexMatrix& x, const ComplexMatrix& a, const ComplexMatrix& b,
                    const Weights& weights, const Regularization& reg, const ChunkLayout& layout) {
  return kkt_breakdown(x, a, b, weights, reg, layout).residual();
}

}  // namespace cranest
