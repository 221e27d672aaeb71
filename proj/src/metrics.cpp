#include "cranest/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace cranest {

double nmse_db(const ComplexMatrix& x_hat, const ComplexMatrix& truth) {
  require(x_hat.rows() == truth.rows() && x_hat.cols() == truth.cols(), ErrorKind::dimension,
          "nmse: shape mismatch");
  const double signal = frobenius_norm(truth);
  require(signal > 0.0, ErrorKind::domain, "nmse: reference matrix is zero");
  const double err = frobenius_norm(x_hat - truth);
  if (err == 0.0) return kNmseFloorDb;
  return std::max(kNmseFloorDb, 20.0 * std::log10(err / signal));
}

DetectionResult detect_active(const ComplexMatrix& x_hat, const ChunkLayout& layout, double rel_threshold) {
  layout.require_x(x_hat, "detect_active");
  require(rel_threshold > 0.0 && rel_threshold < 1.0, ErrorKind::domain,
          "detect_active: relative threshold must lie in (0, 1)");
  DetectionResult out;
  const Index n = layout.user_antennas;
  out.row_energies.reserve(static_cast<std::size_t>(layout.users));
  for (Index i = 0; i < layout.users; ++i) out.row_energies.push_back(x_hat.middleRows(i * n, n).norm());
  const double peak = *std::max_element(out.row_energies.begin(), out.row_energies.end());
  out.threshold_used = rel_threshold * peak;
  if (peak == 0.0) return out;
  for (Index i = 0; i < layout.users; ++i)
    if (out.row_energies[static_cast<std::size_t>(i)] > out.threshold_used) out.estimated_active.push_back(i);
  return out;
}

Index detection_errors(const std::vector<Index>& estimated, const std::vector<Index>& truth) {
  std::vector<Index> e = estimated, t = truth, diff;
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  std::set_symmetric_difference(e.begin(), e.end(), t.begin(), t.end(), std::back_inserter(diff));
  return static_cast<Index>(diff.size());
}

}  // namespace cranest
