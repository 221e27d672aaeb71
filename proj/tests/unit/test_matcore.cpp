#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "cranest/matcore.hpp"
#include "support.hpp"

using namespace cranest;
using cranest::testing::bit_equal;
using cranest::testing::random_matrix;
using cranest::testing::random_weights;

TEST_CASE("frobenius norm examples") {
  ComplexMatrix m(1, 2);
  m << Complex(3, 0), Complex(4, 0);
  CHECK(frobenius_norm(m) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(frobenius_norm(ComplexMatrix::Zero(2, 3)) == 0.0);
  ComplexMatrix s(1, 1);
  s << Complex(1, 1);
  CHECK(frobenius_norm(s) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("frobenius norm: positivity and triangle inequality") {
  RngStream rng(11);
  for (int t = 0; t < 200; ++t) {
    const ComplexMatrix a = random_matrix(3, 4, rng);
    const ComplexMatrix b = random_matrix(3, 4, rng);
    CHECK(frobenius_norm(a) > 0.0);
    CHECK(frobenius_norm(a + b) <= frobenius_norm(a) + frobenius_norm(b) + 1e-12);
  }
}

TEST_CASE("hadamard examples") {
  RngStream rng(3);
  const ComplexMatrix x = random_matrix(2, 3, rng);
  CHECK(bit_equal(hadamard(ComplexMatrix(ComplexMatrix::Ones(2, 3)), x), x));
  CHECK(bit_equal(hadamard(x, ComplexMatrix(ComplexMatrix::Zero(2, 3))), ComplexMatrix::Zero(2, 3)));
  ComplexMatrix a(1, 1), b(1, 1);
  a << Complex(2, 0);
  b << Complex(3, 1);
  const ComplexMatrix p = hadamard(a, b);
  CHECK(p(0, 0) == Complex(6, 2));
  const ComplexMatrix y = random_matrix(2, 3, rng);
  CHECK(bit_equal(hadamard(x, y), hadamard(y, x)));
  CHECK_THROWS_AS(hadamard(x, ComplexMatrix(ComplexMatrix::Zero(3, 2))), Error);
}

TEST_CASE("chunk_extract examples") {
  const ChunkLayout lay{2, 2, 1, 1, 1};
  ComplexMatrix x(2, 2);
  x << Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0);
  const ComplexMatrix e = chunk_extract(x, lay, 1, 0);
  REQUIRE(e.rows() == 1);
  REQUIRE(e.cols() == 1);
  CHECK(e(0, 0) == Complex(3, 0));

  const ChunkLayout lay2{3, 2, 2, 2, 1};
  RngStream rng(5);
  const ComplexMatrix y = random_matrix(6, 4, rng);
  CHECK(bit_equal(chunk_extract(y, lay2, 0), y.topRows(2)));
}

TEST_CASE("chunk blocks tile x exactly") {
  const ChunkLayout lay{3, 4, 2, 2, 1};
  RngStream rng(7);
  const ComplexMatrix x = random_matrix(lay.x_rows(), lay.x_cols(), rng);
  ComplexMatrix rebuilt = ComplexMatrix::Constant(x.rows(), x.cols(), Complex(-99, 0));
  for (Index i = 0; i < lay.users; ++i)
    for (Index j = 0; j < lay.rrhs; ++j) chunk_assign(rebuilt, lay, i, j, chunk_extract(x, lay, i, j));
  CHECK(bit_equal(rebuilt, x));

  ComplexMatrix rows = ComplexMatrix::Zero(x.rows(), x.cols());
  for (Index i = 0; i < lay.users; ++i) chunk_assign(rows, lay, i, std::nullopt, chunk_extract(x, lay, i));
  CHECK(bit_equal(rows, x));
}

TEST_CASE("chunk_extract index errors") {
  const ChunkLayout lay{2, 2, 1, 1, 1};
  const ComplexMatrix x = ComplexMatrix::Zero(2, 2);
  CHECK_THROWS_AS(chunk_extract(x, lay, 2), Error);
  CHECK_THROWS_AS(chunk_extract(x, lay, -1), Error);
  CHECK_THROWS_AS(chunk_extract(x, lay, 0, 2), Error);
  CHECK_THROWS_AS(chunk_extract(ComplexMatrix::Zero(3, 2), lay, 0), Error);
}

TEST_CASE("chunk_norm_map examples") {
  const ChunkLayout lay{2, 3, 2, 2, 1};
  const auto zero = chunk_norm_map(ComplexMatrix::Zero(4, 6), RealMatrix::Ones(4, 6), lay);
  for (double v : zero.row) CHECK(v == 0.0);
  CHECK(zero.element.maxCoeff() == 0.0);

  const ChunkLayout unit{1, 1, 1, 1, 1};
  ComplexMatrix x(1, 1);
  x << Complex(3, 4);
  const auto n = chunk_norm_map(x, RealMatrix::Ones(1, 1), unit);
  CHECK(n.row[0] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(n.element(0, 0) == doctest::Approx(5.0).epsilon(1e-15));

  CHECK_THROWS_AS(chunk_norm_map(ComplexMatrix::Zero(4, 6), RealMatrix::Ones(4, 5), lay), Error);
}

TEST_CASE("row chunk norm squared is the sum of its element chunk norms squared") {
  RngStream rng(13);
  for (const ChunkLayout lay : {ChunkLayout{2, 2, 2, 2, 1}, ChunkLayout{5, 3, 2, 3, 1}, ChunkLayout{4, 10, 3, 2, 1}}) {
    for (int t = 0; t < 20; ++t) {
      const ComplexMatrix x = random_matrix(lay.x_rows(), lay.x_cols(), rng);
      const RealMatrix w = random_weights(lay.x_rows(), lay.x_cols(), rng);
      const auto n = chunk_norm_map(x, w, lay);
      for (Index i = 0; i < lay.users; ++i) {
        // Independent evaluation by direct summation over the entries.
        double direct = 0.0, by_elements = 0.0;
        for (Index r = i * lay.user_antennas; r < (i + 1) * lay.user_antennas; ++r)
          for (Index c = 0; c < lay.x_cols(); ++c) direct += std::norm(w(r, c) * x(r, c));
        for (Index j = 0; j < lay.rrhs; ++j) by_elements += n.element(i, j) * n.element(i, j);
        CHECK(std::abs(n.row[i] * n.row[i] - by_elements) <= 1e-12 * by_elements);
        CHECK(std::abs(n.row[i] * n.row[i] - direct) <= 1e-12 * direct);
      }
    }
  }
}

TEST_CASE("matrix text format round trips bit-exactly") {
  RngStream rng(17);
  ComplexMatrix x = random_matrix(5, 3, rng);
  x(0, 0) = Complex(0.1, -0.0);
  x(1, 1) = Complex(1e-300, 1e300);
  std::stringstream ss;
  write_matrix(ss, x);
  CHECK(bit_equal(read_matrix(ss), x));

  const auto path = std::filesystem::temp_directory_path() / "cranest_test_matcore.mat";
  save_matrix(path.string(), x);
  CHECK(bit_equal(load_matrix(path.string()), x));
  std::filesystem::remove(path);

  std::stringstream bad("2 2\n1 0 2 0\n");
  CHECK_THROWS_AS(read_matrix(bad), Error);
  CHECK_THROWS_AS(load_matrix("/nonexistent/dir/x.mat"), Error);
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  for (double v : {1.0 / 3.0, 2.5e-17, -7.125, 6.02214076e23}) CHECK(parse_double(format_double(v)) == v);
}
