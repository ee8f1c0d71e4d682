#include <doctest.h>

#include "gapscreen/linalg.hpp"
#include "gapscreen/rng.hpp"

using namespace gapscreen;

namespace {

column_matrix two_col_dense() {
  dense_matrix m(2, 2);
  m << 1, 1, 0, 1;  // columns (1,0) and (1,1)
  return column_matrix::dense(m);
}

column_matrix random_dense(index_t d, index_t n, std::uint64_t seed) {
  rng gen(seed);
  dense_matrix m(d, n);
  for (index_t j = 0; j < n; ++j)
    for (index_t i = 0; i < d; ++i) m(i, j) = gen.next_normal();
  return column_matrix::dense(m);
}

column_matrix sparsify(const column_matrix& a) {
  const dense_matrix& m = a.dense_storage();
  sparse_matrix s = m.sparseView();
  return column_matrix::sparse(s);
}

vec make_vec(std::initializer_list<double> vals) {
  vec v(static_cast<index_t>(vals.size()));
  index_t i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("mat_vec identity and hand expansion") {
  column_matrix I = column_matrix::identity(2);
  CHECK(I.multiply(make_vec({3, -1})).isApprox(make_vec({3, -1})));

  column_matrix A = two_col_dense();
  CHECK(A.multiply(make_vec({1, 2})).isApprox(make_vec({3, 2})));

  vec zero = vec::Zero(2);
  CHECK(A.multiply(zero).norm() == 0.0);
}

TEST_CASE("mat_t_vec identity and per-column dots") {
  column_matrix I = column_matrix::identity(2);
  CHECK(I.multiply_transpose(make_vec({3, -1})).isApprox(make_vec({3, -1})));

  column_matrix A = two_col_dense();
  CHECK(A.multiply_transpose(make_vec({2, 5})).isApprox(make_vec({2, 7})));
  CHECK(A.multiply_transpose(vec::Zero(2)).norm() == 0.0);
}

TEST_CASE("dimension mismatches are reported with both sizes") {
  column_matrix A = two_col_dense();
  CHECK_THROWS_WITH_AS(A.multiply(vec::Zero(3)),
                       doctest::Contains("3"), std::invalid_argument);
  CHECK_THROWS_AS(A.multiply_transpose(vec::Zero(5)), std::invalid_argument);
}

TEST_CASE("group_frobenius block norms") {
  column_matrix I = column_matrix::identity(2);
  CHECK(I.group_frobenius(0, 2) == doctest::Approx(std::sqrt(2.0)));

  dense_matrix m(2, 2);
  m << 3, 0, 0, 4;
  column_matrix A = column_matrix::dense(m);
  CHECK(A.group_frobenius(0, 2) == doctest::Approx(5.0));
  CHECK(A.group_frobenius(1, 1) == doctest::Approx(A.col_norm(1)));
  CHECK_THROWS_AS(A.group_frobenius(0, 0), std::invalid_argument);
}

TEST_CASE("hstack_neg doubles the columns with sign copies") {
  dense_matrix m(2, 1);
  m << 1, 2;
  column_matrix A = column_matrix::dense(m);
  column_matrix H = A.hstack_neg();
  REQUIRE(H.cols() == 2);
  CHECK(H.col(0).isApprox(make_vec({1, 2})));
  CHECK(H.col(1).isApprox(make_vec({-1, -2})));
  CHECK(H.col_norm(0) == doctest::Approx(H.col_norm(1)));

  // linearity: hstack(A) * (x+, x-) = A * (x+ - x-)
  column_matrix B = random_dense(5, 4, 7);
  column_matrix HB = B.hstack_neg();
  rng gen(8);
  vec xp = gen.normal_vector(4);
  vec xm = gen.normal_vector(4);
  vec xx(8);
  xx << xp, xm;
  CHECK(HB.multiply(xx).isApprox(B.multiply(xp - xm), 1e-12));
}

TEST_CASE("cached column norms match a_i^T A e_i") {
  column_matrix A = random_dense(30, 12, 42);
  for (index_t i = 0; i < A.cols(); ++i) {
    vec ei = vec::Zero(12);
    ei[i] = 1.0;
    double norm_sq = A.multiply_transpose(A.multiply(ei))[i];
    CHECK(norm_sq ==
          doctest::Approx(A.col_norm(i) * A.col_norm(i)).epsilon(1e-10));
  }
}

TEST_CASE("dense and sparse storage agree") {
  column_matrix A = random_dense(20, 9, 3);
  column_matrix S = sparsify(A);
  rng gen(4);
  for (int t = 0; t < 10; ++t) {
    vec x = gen.normal_vector(9);
    vec v = gen.normal_vector(20);
    CHECK(A.multiply(x).isApprox(S.multiply(x), 1e-12));
    CHECK(A.multiply_transpose(v).isApprox(S.multiply_transpose(v), 1e-12));
  }
  for (index_t j = 0; j < 9; ++j)
    CHECK(A.col_norm(j) == doctest::Approx(S.col_norm(j)).epsilon(1e-12));
  CHECK(A.group_frobenius(2, 4) ==
        doctest::Approx(S.group_frobenius(2, 4)).epsilon(1e-12));
}

TEST_CASE("full-range group frobenius equals the entrywise norm") {
  column_matrix A = random_dense(11, 6, 99);
  double by_entries = A.dense_storage().norm();
  CHECK(A.group_frobenius(0, 6) == doctest::Approx(by_entries).epsilon(1e-12));
}

TEST_CASE("select_columns keeps the requested columns in order") {
  column_matrix A = random_dense(6, 5, 13);
  column_matrix S = A.select_columns({0, 2, 4});
  REQUIRE(S.cols() == 3);
  CHECK(S.col(0).isApprox(A.col(0)));
  CHECK(S.col(1).isApprox(A.col(2)));
  CHECK(S.col(2).isApprox(A.col(4)));
}

TEST_CASE("sparse construction validates row order and finiteness") {
  sparse_matrix ok(3, 1);
  ok.insert(0, 0) = 1.0;
  ok.insert(2, 0) = 2.0;
  CHECK_NOTHROW(column_matrix::sparse(ok));

  dense_matrix bad(2, 2);
  bad << 1, 2, std::nan(""), 3;
  CHECK_THROWS_AS(column_matrix::dense(bad), std::invalid_argument);
}

TEST_CASE("operator norm estimate bounds the true spectral norm") {
  column_matrix A = random_dense(25, 10, 21);
  Eigen::JacobiSVD<dense_matrix> svd(A.dense_storage());
  double truth = svd.singularValues()[0];
  double est = A.operator_norm_estimate();
  CHECK(est >= truth * (1.0 - 1e-9));
  CHECK(est <= truth * 1.05);
}
