#pragma once

#include "cranest/matcore.hpp"

namespace cranest {

enum class Granularity { row_chunk, element_chunk };

/// Block soft threshold: 0 if ||b||_F <= tau, else (1 - tau / ||b||_F) b.
/// This is the minimizer of tau ||X||_F + 0.5 ||X - b||_F^2.
ComplexMatrix matrix_shrink(const ComplexMatrix& b, double tau);

/// In-place variant on a sub-block. Returns true if the block was zeroed.
bool shrink_block(Eigen::Ref<ComplexMatrix> block, double tau);

/// Applies matrix_shrink to every row chunk (N x GM) or element chunk (N x M).
ComplexMatrix chunk_shrink(const ComplexMatrix& m, const ChunkLayout& layout, Granularity granularity,
                           double tau);
void chunk_shrink_inplace(ComplexMatrix& m, const ChunkLayout& layout, Granularity granularity, double tau);

}  // namespace cranest
