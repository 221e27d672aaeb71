#include "cranest/shrinkage.hpp"

#include <cmath>

namespace cranest {

namespace {

void require_tau(double tau) {
  require(tau >= 0.0 && !std::isnan(tau), ErrorKind::domain, "shrinkage: threshold must be >= 0");
}

}  // namespace

bool shrink_block(Eigen::Ref<ComplexMatrix> block, double tau) {
  double sq = 0.0;
  for (Index r = 0; r < block.rows(); ++r)
    for (Index c = 0; c < block.cols(); ++c) sq += std::norm(block(r, c));
  const double norm = std::sqrt(sq);
  // Equality maps to zero; a zero block never reaches the division.
  if (norm <= tau) {
    block.setZero();
    return true;
  }
  block *= (1.0 - tau / norm);
  return false;
}

ComplexMatrix matrix_shrink(const ComplexMatrix& b, double tau) {
  require_tau(tau);
  ComplexMatrix out = b;
  shrink_block(out, tau);
  return out;
}

void chunk_shrink_inplace(ComplexMatrix& m, const ChunkLayout& layout, Granularity granularity, double tau) {
  require_tau(tau);
  layout.require_x(m, "chunk_shrink");
  const Index n = layout.user_antennas;
  for (Index i = 0; i < layout.users; ++i) {
    if (granularity == Granularity::row_chunk) {
      shrink_block(m.middleRows(i * n, n), tau);
    } else {
      const Index cols = layout.rrh_antennas;
      for (Index j = 0; j < layout.rrhs; ++j) shrink_block(m.block(i * n, j * cols, n, cols), tau);
    }
  }
}

ComplexMatrix chunk_shrink(const ComplexMatrix& m, const ChunkLayout& layout, Granularity granularity,
                           double tau) {
  ComplexMatrix out = m;
  chunk_shrink_inplace(out, layout, granularity, tau);
  return out;
}

}  // namespace cranest
