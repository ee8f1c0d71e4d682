#ifndef GAPSCREEN_LINALG_HPP
#define GAPSCREEN_LINALG_HPP

#include <memory>
#include <mutex>
#include <vector>

#include "gapscreen/common.hpp"

namespace gapscreen {

// Column-oriented data matrix with cached per-column Euclidean norms.
// Immutable after construction; safe for concurrent reads.
class column_matrix {
 public:
  static column_matrix dense(dense_matrix m);
  static column_matrix sparse(sparse_matrix m);
  static column_matrix identity(index_t n);

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }
  bool is_sparse() const { return sparse_ != nullptr; }

  // y = A x  (sparse-aware: zero entries of x contribute nothing)
  vec multiply(const vec& x) const;
  // d = A^T v, d[i] = a_i^T v
  vec multiply_transpose(const vec& v) const;
  // a_i^T v
  double col_dot(index_t i, const vec& v) const;
  // y += s * a_i
  void add_col_to(index_t i, double s, vec& y) const;
  // dense copy of column i
  vec col(index_t i) const;

  double col_norm(index_t i) const;
  const vec& col_norms() const;

  // sqrt of the sum of squared entries of columns [start, start+len)
  double group_frobenius(index_t start, index_t len) const;

  // [A | -A]
  column_matrix hstack_neg() const;
  // s * A
  column_matrix scaled(double s) const;
  // copy of the columns listed in `keep`, in that order
  column_matrix select_columns(const std::vector<index_t>& keep) const;

  const dense_matrix& dense_storage() const;
  const sparse_matrix& sparse_storage() const;

  // upper estimate of the spectral norm ||A||_2 via power iteration,
  // inflated by a small factor so step sizes derived from it stay safe
  double operator_norm_estimate() const;

 private:
  column_matrix() = default;

  index_t rows_ = 0;
  index_t cols_ = 0;
  std::shared_ptr<const dense_matrix> dense_;
  std::shared_ptr<const sparse_matrix> sparse_;

  struct norm_cache {
    std::once_flag once;
    vec norms;
  };
  std::shared_ptr<norm_cache> norms_ = std::make_shared<norm_cache>();
};

}  // namespace gapscreen

#endif  // GAPSCREEN_LINALG_HPP
