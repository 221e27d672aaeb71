#include "cranest/functional.hpp"

#include <algorithm>
#include <cmath>

namespace cranest {

Weights Weights::ones(const ChunkLayout& layout) {
  return Weights{RealMatrix::Ones(layout.x_rows(), layout.x_cols()), 1e-8};
}

void Weights::validate() const {
  require(epsilon > 0.0, ErrorKind::domain, "weights: epsilon must be positive");
  for (Index k = 0; k < w.size(); ++k) {
    const double v = w.data()[k];
    require(std::isfinite(v) && v > 0.0, ErrorKind::domain, "weights: entries must be finite and > 0");
  }
}

void Regularization::validate() const {
  require(std::isfinite(alpha1) && alpha1 >= 0.0 && std::isfinite(alpha2) && alpha2 >= 0.0,
          ErrorKind::domain, "regularization: alpha1 and alpha2 must be finite and >= 0");
}

Preset parse_preset(const std::string& name) {
  if (name == "full") return Preset::full;
  if (name == "row" || name == "row_lasso") return Preset::row_lasso;
  if (name == "element" || name == "element_lasso") return Preset::element_lasso;
  fail(ErrorKind::parse, "unknown preset '" + name + "' (expected full, row_lasso or element_lasso)");
}

std::string preset_name(Preset kind) {
  switch (kind) {
    case Preset::full: return "full";
    case Preset::row_lasso: return "row_lasso";
    case Preset::element_lasso: return "element_lasso";
  }
  return "full";
}

double objective(const ComplexMatrix& x, const ComplexMatrix& a, const ComplexMatrix& b,
                 const Weights& weights, const Regularization& reg, const ChunkLayout& layout) {
  layout.require_x(x, "objective");
  layout.require_a(a);
  layout.require_b(b);
  const ChunkNorms norms = chunk_norm_map(x, weights.w, layout);
  double rows = 0.0;
  for (double v : norms.row) rows += v;
  const double elements = norms.element.sum();
  const double fit = frobenius_norm(a * x - b);
  return reg.alpha1 * rows + reg.alpha2 * elements + 0.5 * fit * fit;
}

Weights weight_update(const ComplexMatrix& x_prev, double epsilon) {
  require(epsilon > 0.0 && std::isfinite(epsilon), ErrorKind::domain, "weight_update: epsilon must be > 0");
  Weights out{RealMatrix(x_prev.rows(), x_prev.cols()), epsilon};
  for (Index k = 0; k < x_prev.size(); ++k) out.w.data()[k] = 1.0 / (std::abs(x_prev.data()[k]) + epsilon);
  return out;
}

TuningBounds tuning_bounds(const ComplexMatrix& a, const ComplexMatrix& b, const Weights& weights,
                           const ChunkLayout& layout) {
  layout.require_a(a);
  layout.require_b(b);
  layout.require_x(weights.w, "tuning_bounds weights");
  const ComplexMatrix correlation = a.adjoint() * b;  // stacked A_i^H B, KN x GM
  const RealMatrix inverse_w = weights.w.cwiseInverse();
  const ChunkNorms norms = chunk_norm_map(correlation, inverse_w, layout);
  TuningBounds out;
  out.alpha1_star = *std::max_element(norms.row.begin(), norms.row.end());
  out.alpha2_star = norms.element.maxCoeff();
  return out;
}

Regularization preset(Preset kind, const TuningBounds& bounds, double fraction) {
  require(fraction > 0.0 && fraction < 1.0, ErrorKind::domain, "preset: fraction must lie in (0, 1)");
  switch (kind) {
    case Preset::full: return {fraction * bounds.alpha1_star, fraction * bounds.alpha2_star};
    case Preset::row_lasso: return {fraction * bounds.alpha1_star, 0.0};
    case Preset::element_lasso: return {0.0, fraction * bounds.alpha2_star};
  }
  return {};
}

}  // namespace cranest
