#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cranest/errors.hpp"

namespace cranest {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;

/// Dimensions of the joint channel/activity unknown.
///
/// The unknown X has `users * user_antennas` rows and `rrhs * rrh_antennas`
/// columns. Row chunk i spans rows [i*N, (i+1)*N) across all columns; element
/// chunk (i, j) further restricts to columns [j*M, (j+1)*M). Indices in this
/// C++ API are 0-based; the C API and the CLI are 1-based.
struct ChunkLayout {
  Index users = 1;          // K
  Index rrhs = 1;           // G
  Index rrh_antennas = 1;   // M
  Index user_antennas = 1;  // N
  Index pilot_length = 1;   // L

  void validate() const;

  Index x_rows() const { return users * user_antennas; }
  Index x_cols() const { return rrhs * rrh_antennas; }

  bool conforms_x(Index rows, Index cols) const { return rows == x_rows() && cols == x_cols(); }
  bool conforms_a(Index rows, Index cols) const { return rows == pilot_length && cols == x_rows(); }
  bool conforms_b(Index rows, Index cols) const { return rows == pilot_length && cols == x_cols(); }

  template <class M>
  void require_x(const M& m, const char* what) const {
    require(conforms_x(m.rows(), m.cols()), ErrorKind::dimension,
            std::string(what) + ": expected " + shape_string(x_rows(), x_cols()) + ", got " +
                shape_string(m.rows(), m.cols()));
  }
  void require_a(const ComplexMatrix& a) const;
  void require_b(const ComplexMatrix& b) const;

  static std::string shape_string(Index rows, Index cols);

  friend bool operator==(const ChunkLayout&, const ChunkLayout&) = default;
};

double frobenius_norm(const ComplexMatrix& m);

/// Element-wise product; throws on shape mismatch.
ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix hadamard(const RealMatrix& w, const ComplexMatrix& x);

/// Copies the row chunk of `user` (N x GM), or the element chunk (user, rrh) (N x M).
ComplexMatrix chunk_extract(const ComplexMatrix& x, const ChunkLayout& layout, Index user,
                            std::optional<Index> rrh = std::nullopt);

/// Inverse of chunk_extract: writes `block` back into its place in `x`.
void chunk_assign(ComplexMatrix& x, const ChunkLayout& layout, Index user, std::optional<Index> rrh,
                  const ComplexMatrix& block);

struct ChunkNorms {
  std::vector<double> row;  // K entries: ||W_i o X_i||_F
  RealMatrix element;       // K x G: ||W_ij o X_ij||_F
};

ChunkNorms chunk_norm_map(const ComplexMatrix& x, const RealMatrix& w, const ChunkLayout& layout);

// Text format: "rows cols" then one line per row of interleaved "re im" pairs,
// each value in shortest round-trip decimal form.
void write_matrix(std::ostream& os, const ComplexMatrix& m);
ComplexMatrix read_matrix(std::istream& is);
void save_matrix(const std::string& path, const ComplexMatrix& m);
ComplexMatrix load_matrix(const std::string& path);

/// Shortest decimal that parses back to exactly `v`.
std::string format_double(double v);
double parse_double(const std::string& token);

}  // namespace cranest
