#include "gapscreen/linalg.hpp"

#include <cmath>

namespace gapscreen {

namespace {

void check_dims(index_t got, index_t want, const char* op) {
  if (got != want) {
    throw std::invalid_argument(std::string(op) + ": length " +
                                std::to_string(got) + " does not match " +
                                std::to_string(want));
  }
}

}  // namespace

column_matrix column_matrix::dense(dense_matrix m) {
  require(m.rows() >= 1 && m.cols() >= 1, "column_matrix: empty matrix");
  require(m.allFinite(), "column_matrix: non-finite entries");
  column_matrix a;
  a.rows_ = m.rows();
  a.cols_ = m.cols();
  a.dense_ = std::make_shared<const dense_matrix>(std::move(m));
  return a;
}

column_matrix column_matrix::sparse(sparse_matrix m) {
  require(m.rows() >= 1 && m.cols() >= 1, "column_matrix: empty matrix");
  m.makeCompressed();
  for (index_t j = 0; j < m.outerSize(); ++j) {
    index_t prev = -1;
    for (sparse_matrix::InnerIterator it(m, j); it; ++it) {
      require(it.row() > prev, "column_matrix: row indices not increasing");
      require(std::isfinite(it.value()), "column_matrix: non-finite entry");
      prev = it.row();
    }
  }
  column_matrix a;
  a.rows_ = m.rows();
  a.cols_ = m.cols();
  a.sparse_ = std::make_shared<const sparse_matrix>(std::move(m));
  return a;
}

column_matrix column_matrix::identity(index_t n) {
  sparse_matrix m(n, n);
  m.setIdentity();
  return sparse(std::move(m));
}

vec column_matrix::multiply(const vec& x) const {
  check_dims(x.size(), cols_, "mat_vec");
  if (sparse_) return *sparse_ * x;
  return *dense_ * x;
}

vec column_matrix::multiply_transpose(const vec& v) const {
  check_dims(v.size(), rows_, "mat_t_vec");
  if (sparse_) return sparse_->transpose() * v;
  return dense_->transpose() * v;
}

double column_matrix::col_dot(index_t i, const vec& v) const {
  check_dims(v.size(), rows_, "col_dot");
  require(i >= 0 && i < cols_, "col_dot: column out of range");
  if (sparse_) {
    double s = 0.0;
    for (sparse_matrix::InnerIterator it(*sparse_, i); it; ++it)
      s += it.value() * v[it.row()];
    return s;
  }
  return dense_->col(i).dot(v);
}

void column_matrix::add_col_to(index_t i, double s, vec& y) const {
  check_dims(y.size(), rows_, "add_col_to");
  require(i >= 0 && i < cols_, "add_col_to: column out of range");
  if (sparse_) {
    for (sparse_matrix::InnerIterator it(*sparse_, i); it; ++it)
      y[it.row()] += s * it.value();
    return;
  }
  y += s * dense_->col(i);
}

vec column_matrix::col(index_t i) const {
  require(i >= 0 && i < cols_, "col: column out of range");
  if (sparse_) {
    vec c = vec::Zero(rows_);
    for (sparse_matrix::InnerIterator it(*sparse_, i); it; ++it)
      c[it.row()] = it.value();
    return c;
  }
  return dense_->col(i);
}

const vec& column_matrix::col_norms() const {
  std::call_once(norms_->once, [this] {
    vec n(cols_);
    if (sparse_) {
      for (index_t j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (sparse_matrix::InnerIterator it(*sparse_, j); it; ++it)
          s += it.value() * it.value();
        n[j] = std::sqrt(s);
      }
    } else {
      for (index_t j = 0; j < cols_; ++j) n[j] = dense_->col(j).norm();
    }
    norms_->norms = std::move(n);
  });
  return norms_->norms;
}

double column_matrix::col_norm(index_t i) const {
  require(i >= 0 && i < cols_, "col_norm: column out of range");
  return col_norms()[i];
}

double column_matrix::group_frobenius(index_t start, index_t len) const {
  require(len >= 1, "group_frobenius: empty group");
  require(start >= 0 && start + len <= cols_,
          "group_frobenius: group out of range");
  const vec& n = col_norms();
  double s = 0.0;
  for (index_t j = start; j < start + len; ++j) s += n[j] * n[j];
  return std::sqrt(s);
}

column_matrix column_matrix::hstack_neg() const {
  if (sparse_) {
    sparse_matrix m(rows_, 2 * cols_);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(2 * static_cast<std::size_t>(sparse_->nonZeros()));
    for (index_t j = 0; j < cols_; ++j) {
      for (sparse_matrix::InnerIterator it(*sparse_, j); it; ++it) {
        trip.emplace_back(it.row(), j, it.value());
        trip.emplace_back(it.row(), cols_ + j, -it.value());
      }
    }
    m.setFromTriplets(trip.begin(), trip.end());
    return sparse(std::move(m));
  }
  dense_matrix m(rows_, 2 * cols_);
  m.leftCols(cols_) = *dense_;
  m.rightCols(cols_) = -(*dense_);
  return dense(std::move(m));
}

column_matrix column_matrix::scaled(double s) const {
  require(std::isfinite(s), "scaled: non-finite scale");
  if (sparse_) {
    sparse_matrix m = *sparse_ * s;
    return sparse(std::move(m));
  }
  return dense(*dense_ * s);
}

column_matrix column_matrix::select_columns(
    const std::vector<index_t>& keep) const {
  require(!keep.empty(), "select_columns: no columns selected");
  for (index_t j : keep)
    require(j >= 0 && j < cols_, "select_columns: column out of range");
  if (sparse_) {
    sparse_matrix m(rows_, static_cast<index_t>(keep.size()));
    std::vector<Eigen::Triplet<double>> trip;
    for (index_t k = 0; k < static_cast<index_t>(keep.size()); ++k) {
      for (sparse_matrix::InnerIterator it(*sparse_, keep[k]); it; ++it)
        trip.emplace_back(it.row(), k, it.value());
    }
    m.setFromTriplets(trip.begin(), trip.end());
    return sparse(std::move(m));
  }
  dense_matrix m(rows_, static_cast<index_t>(keep.size()));
  for (index_t k = 0; k < static_cast<index_t>(keep.size()); ++k)
    m.col(k) = dense_->col(keep[k]);
  return dense(std::move(m));
}

double column_matrix::operator_norm_estimate() const {
  vec v(cols_);
  for (index_t i = 0; i < cols_; ++i)
    v[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
  v /= v.norm();
  double sigma = 0.0;
  for (int it = 0; it < 60; ++it) {
    vec u = multiply(v);
    double nu = u.norm();
    if (nu == 0.0) return 0.0;
    v = multiply_transpose(u / nu);
    sigma = v.norm();
    if (sigma == 0.0) return 0.0;
    v /= sigma;
  }
  return 1.01 * sigma;
}

const dense_matrix& column_matrix::dense_storage() const {
  require(dense_ != nullptr, "dense_storage: matrix is sparse");
  return *dense_;
}

const sparse_matrix& column_matrix::sparse_storage() const {
  require(sparse_ != nullptr, "sparse_storage: matrix is dense");
  return *sparse_;
}

}  // namespace gapscreen
