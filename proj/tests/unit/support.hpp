#pragma once

#include <cstdint>

#include "cranest/matcore.hpp"
#include "cranest/rng.hpp"

namespace cranest::testing {

inline ComplexMatrix random_matrix(Index rows, Index cols, RngStream& rng, double variance = 1.0) {
  ComplexMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = rng.complex_normal(variance);
  return m;
}

inline RealMatrix random_weights(Index rows, Index cols, RngStream& rng) {
  RealMatrix w(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) w(r, c) = 0.2 + 2.0 * rng.uniform();
  return w;
}

inline bool bit_equal(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Index r = 0; r < a.rows(); ++r)
    for (Index c = 0; c < a.cols(); ++c)
      if (a(r, c).real() != b(r, c).real() || a(r, c).imag() != b(r, c).imag()) return false;
  return true;
}

}  // namespace cranest::testing

#include "cranest/scenario.hpp"

namespace cranest::testing {

/// Small instance of the oracle-comparison scale: K=20, G=4, M=2, N=1, L=12, three active users, 10 dB.
inline ProblemInstance small_instance(std::uint64_t seed) {
  ScenarioSpec spec;
  spec.layout = {20, 4, 2, 1, 12};
  spec.active_count = 3;
  spec.snr_db = 10.0;
  spec.seed = seed;
  return generate_instance(spec);
}

}  // namespace cranest::testing
