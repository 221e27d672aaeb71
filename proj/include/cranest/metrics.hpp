#pragma once

#include <vector>

#include "cranest/matcore.hpp"

namespace cranest {

/// Exact recovery is reported as this value instead of -inf.
inline constexpr double kNmseFloorDb = -300.0;

/// 10 log10(||x_hat - truth||^2 / ||truth||^2), clamped below at kNmseFloorDb.
double nmse_db(const ComplexMatrix& x_hat, const ComplexMatrix& truth);

struct DetectionResult {
  std::vector<Index> estimated_active;  // sorted, 0-based
  std::vector<double> row_energies;     // ||X_i||_F per user
  double threshold_used = 0.0;          // absolute energy threshold
};

inline constexpr double kDefaultDetectionThreshold = 0.1;

/// User i is active iff ||X_i|| > rel_threshold * max_k ||X_k||.
DetectionResult detect_active(const ComplexMatrix& x_hat, const ChunkLayout& layout,
                              double rel_threshold = kDefaultDetectionThreshold);

/// Size of the symmetric difference (misses plus false alarms).
Index detection_errors(const std::vector<Index>& estimated, const std::vector<Index>& truth);

}  // namespace cranest
