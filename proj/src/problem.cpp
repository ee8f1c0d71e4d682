#include "gapscreen/problem.hpp"

namespace gapscreen {

namespace {

void check_shapes(const column_matrix& A, const smooth_objective& f,
                  index_t g_dim) {
  require(f.dim() == A.rows(),
          "problem_spec: objective dimension must match matrix rows");
  require(g_dim == A.cols(),
          "problem_spec: g dimension must match matrix columns");
}

}  // namespace

problem_spec::problem_spec(column_matrix A, smooth_objective f,
                           constraint_spec g)
    : A_(std::move(A)), f_(std::move(f)), g_(std::move(g)) {
  check_shapes(A_, f_, constraint().dim());
}

problem_spec::problem_spec(column_matrix A, smooth_objective f,
                           regularizer_spec g)
    : A_(std::move(A)), f_(std::move(f)), g_(std::move(g)) {
  check_shapes(A_, f_, regularizer().dim());
}

problem_spec problem_spec::with_view_terms(vec y_offset,
                                           double primal_shift) const {
  require(y_offset.size() == 0 || y_offset.size() == A_.rows(),
          "with_view_terms: offset length mismatch");
  problem_spec p = *this;
  p.y_offset_ = std::move(y_offset);
  p.primal_shift_ = primal_shift;
  return p;
}

vec problem_spec::map_to_image(const vec& x) const {
  vec y = A_.multiply(x);
  if (y_offset_.size() > 0) y += y_offset_;
  return y;
}

double problem_spec::primal_value(const vec& x, const vec& y) const {
  double v = f_.value(y) + primal_shift_;
  if (constrained()) {
    v += constraint().linear_value(x);
  } else {
    v += regularizer().penalty_value(x);
  }
  return v;
}

}  // namespace gapscreen
