#pragma once

#include <string>

#include "cranest/matcore.hpp"

namespace cranest {

/// Positive real re-weighting matrix, same shape as X.
struct Weights {
  RealMatrix w;
  double epsilon = 1e-8;

  static Weights ones(const ChunkLayout& layout);
  void validate() const;
};

struct Regularization {
  double alpha1 = 0.0;  // row-chunk (user activity) penalty
  double alpha2 = 0.0;  // element-chunk (user-RRH link) penalty

  void validate() const;
  bool is_plain_least_squares() const { return alpha1 == 0.0 && alpha2 == 0.0; }
};

/// Penalty levels at and above which the minimizer is identically zero.
struct TuningBounds {
  double alpha1_star = 0.0;
  double alpha2_star = 0.0;
};

enum class Preset { full, row_lasso, element_lasso };

Preset parse_preset(const std::string& name);
std::string preset_name(Preset kind);

/// alpha1 * sum_i ||W_i o X_i|| + alpha2 * sum_ij ||W_ij o X_ij|| + 0.5 ||A X - B||^2.
double objective(const ComplexMatrix& x, const ComplexMatrix& a, const ComplexMatrix& b,
                 const Weights& weights, const Regularization& reg, const ChunkLayout& layout);

/// W[r,c] = 1 / (|x_prev[r,c]| + epsilon).
Weights weight_update(const ComplexMatrix& x_prev, double epsilon);

TuningBounds tuning_bounds(const ComplexMatrix& a, const ComplexMatrix& b, const Weights& weights,
                           const ChunkLayout& layout);

/// Fraction of the zero-solution bounds. The recommended band is 0.01 to 0.05.
Regularization preset(Preset kind, const TuningBounds& bounds, double fraction);

inline constexpr double kDefaultPresetFraction = 0.03;

}  // namespace cranest
