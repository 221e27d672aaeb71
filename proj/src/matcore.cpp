#include "cranest/matcore.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace cranest {

void ChunkLayout::validate() const {
  require(users >= 1 && rrhs >= 1 && rrh_antennas >= 1 && user_antennas >= 1 && pilot_length >= 1,
          ErrorKind::domain, "chunk layout: all dimensions must be >= 1");
}

void ChunkLayout::require_a(const ComplexMatrix& a) const {
  require(conforms_a(a.rows(), a.cols()), ErrorKind::dimension,
          "sensing matrix: expected " + shape_string(pilot_length, x_rows()) + ", got " +
              shape_string(a.rows(), a.cols()));
}

void ChunkLayout::require_b(const ComplexMatrix& b) const {
  require(conforms_b(b.rows(), b.cols()), ErrorKind::dimension,
          "observation: expected " + shape_string(pilot_length, x_cols()) + ", got " +
              shape_string(b.rows(), b.cols()));
}

std::string ChunkLayout::shape_string(Index rows, Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

double frobenius_norm(const ComplexMatrix& m) {
  double sum = 0.0;
  for (Index k = 0; k < m.size(); ++k) sum += std::norm(m.data()[k]);
  return std::sqrt(sum);
}

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::dimension,
          "hadamard: shape mismatch " + ChunkLayout::shape_string(a.rows(), a.cols()) + " vs " +
              ChunkLayout::shape_string(b.rows(), b.cols()));
  return a.cwiseProduct(b);
}

ComplexMatrix hadamard(const RealMatrix& w, const ComplexMatrix& x) {
  require(w.rows() == x.rows() && w.cols() == x.cols(), ErrorKind::dimension,
          "hadamard: shape mismatch " + ChunkLayout::shape_string(w.rows(), w.cols()) + " vs " +
              ChunkLayout::shape_string(x.rows(), x.cols()));
  return (w.array() * x.array()).matrix();
}

namespace {

void require_chunk_index(const ChunkLayout& layout, Index user, std::optional<Index> rrh) {
  require(user >= 0 && user < layout.users, ErrorKind::index,
          "chunk index: user " + std::to_string(user) + " out of range [0, " +
              std::to_string(layout.users) + ")");
  if (rrh) {
    require(*rrh >= 0 && *rrh < layout.rrhs, ErrorKind::index,
            "chunk index: rrh " + std::to_string(*rrh) + " out of range [0, " +
                std::to_string(layout.rrhs) + ")");
  }
}

}  // namespace

ComplexMatrix chunk_extract(const ComplexMatrix& x, const ChunkLayout& layout, Index user,
                            std::optional<Index> rrh) {
  layout.require_x(x, "chunk_extract");
  require_chunk_index(layout, user, rrh);
  const Index n = layout.user_antennas;
  if (!rrh) return x.middleRows(user * n, n);
  const Index m = layout.rrh_antennas;
  return x.block(user * n, *rrh * m, n, m);
}

void chunk_assign(ComplexMatrix& x, const ChunkLayout& layout, Index user, std::optional<Index> rrh,
                  const ComplexMatrix& block) {
  layout.require_x(x, "chunk_assign");
  require_chunk_index(layout, user, rrh);
  const Index n = layout.user_antennas;
  const Index cols = rrh ? layout.rrh_antennas : layout.x_cols();
  require(block.rows() == n && block.cols() == cols, ErrorKind::dimension,
          "chunk_assign: block shape " + ChunkLayout::shape_string(block.rows(), block.cols()));
  const Index col0 = rrh ? *rrh * layout.rrh_antennas : 0;
  x.block(user * n, col0, n, cols) = block;
}

ChunkNorms chunk_norm_map(const ComplexMatrix& x, const RealMatrix& w, const ChunkLayout& layout) {
  layout.require_x(x, "chunk_norm_map");
  layout.require_x(w, "chunk_norm_map weights");
  const Index n = layout.user_antennas;
  const Index m = layout.rrh_antennas;
  ChunkNorms out;
  out.row.assign(static_cast<std::size_t>(layout.users), 0.0);
  out.element = RealMatrix::Zero(layout.users, layout.rrhs);
  for (Index i = 0; i < layout.users; ++i) {
    double row_sq = 0.0;
    for (Index j = 0; j < layout.rrhs; ++j) {
      double sq = 0.0;
      for (Index r = i * n; r < (i + 1) * n; ++r)
        for (Index c = j * m; c < (j + 1) * m; ++c) sq += std::norm(w(r, c) * x(r, c));
      out.element(i, j) = std::sqrt(sq);
      row_sq += sq;
    }
    out.row[static_cast<std::size_t>(i)] = std::sqrt(row_sq);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  require(res.ec == std::errc() && res.ptr == last, ErrorKind::parse,
          "cannot parse number '" + token + "'");
  return v;
}

void write_matrix(std::ostream& os, const ComplexMatrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      os << format_double(m(r, c).real()) << ' ' << format_double(m(r, c).imag());
    }
    os << '\n';
  }
}

ComplexMatrix read_matrix(std::istream& is) {
  long long rows = 0, cols = 0;
  require(static_cast<bool>(is >> rows >> cols), ErrorKind::parse, "matrix: missing 'rows cols' header");
  require(rows >= 1 && cols >= 1, ErrorKind::parse, "matrix: dimensions must be positive");
  ComplexMatrix m(rows, cols);
  std::string re, im;
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      require(static_cast<bool>(is >> re >> im), ErrorKind::parse,
              "matrix: truncated data at row " + std::to_string(r) + ", column " + std::to_string(c));
      m(r, c) = Complex(parse_double(re), parse_double(im));
    }
  }
  std::string extra;
  require(!(is >> extra), ErrorKind::parse, "matrix: trailing data '" + extra + "'");
  return m;
}

void save_matrix(const std::string& path, const ComplexMatrix& m) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorKind::io, "cannot open '" + path + "' for writing");
  write_matrix(os, m);
  require(static_cast<bool>(os), ErrorKind::io, "write to '" + path + "' failed");
}

ComplexMatrix load_matrix(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorKind::io, "cannot open '" + path + "'");
  return read_matrix(is);
}

}  // namespace cranest
