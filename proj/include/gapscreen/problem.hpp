#ifndef GAPSCREEN_PROBLEM_HPP
#define GAPSCREEN_PROBLEM_HPP

#include <optional>
#include <variant>

#include "gapscreen/geometry.hpp"
#include "gapscreen/linalg.hpp"
#include "gapscreen/objectives.hpp"

namespace gapscreen {

// A primal problem min_x f(Ax + y_offset) + g(x) + primal_shift, where g is
// either a constraint indicator (plus optional linear term) or a penalty.
// y_offset and primal_shift are zero for full problems; compressed views
// produced by screening carry the fixed-variable contributions there.
class problem_spec {
 public:
  problem_spec(column_matrix A, smooth_objective f, constraint_spec g);
  problem_spec(column_matrix A, smooth_objective f, regularizer_spec g);

  const column_matrix& matrix() const { return A_; }
  const smooth_objective& objective() const { return f_; }

  bool constrained() const {
    return std::holds_alternative<constraint_spec>(g_);
  }
  const constraint_spec& constraint() const {
    return std::get<constraint_spec>(g_);
  }
  const regularizer_spec& regularizer() const {
    return std::get<regularizer_spec>(g_);
  }

  index_t n_rows() const { return A_.rows(); }
  index_t n_cols() const { return A_.cols(); }

  bool has_offset() const { return y_offset_.size() > 0; }
  const vec& y_offset() const { return y_offset_; }
  double primal_shift() const { return primal_shift_; }

  problem_spec with_view_terms(vec y_offset, double primal_shift) const;

  // y = A x + y_offset
  vec map_to_image(const vec& x) const;
  // f(Ax) + g(x) (+ linear term, + primal_shift)
  double primal_value(const vec& x, const vec& y) const;

 private:
  column_matrix A_;
  smooth_objective f_;
  std::variant<constraint_spec, regularizer_spec> g_;
  vec y_offset_;
  double primal_shift_ = 0.0;
};

}  // namespace gapscreen

#endif  // GAPSCREEN_PROBLEM_HPP
