#ifndef GAPSCREEN_OBJECTIVES_HPP
#define GAPSCREEN_OBJECTIVES_HPP

#include <optional>

#include "gapscreen/common.hpp"

namespace gapscreen {

enum class objective_kind {
  squared_error,    // 1/2 ||y - b||^2
  pure_quadratic,   // 1/2 ||y||^2
  meb_quadratic,    // ||y||^2
  linear_quadratic, // 1/2 ||y||^2 (SVM-dual f part; the -1^T x lives in g)
  logistic          // sum_i log(1 + exp(y_i))
};

// Smooth convex f as a function of y = Ax, together with its gradient,
// conjugate and the smoothness / strong-convexity constants the screening
// rules consume. Values are immutable and shareable.
class smooth_objective {
 public:
  static smooth_objective squared_error(vec b);
  static smooth_objective pure_quadratic(index_t d);
  static smooth_objective meb_quadratic(index_t d);
  static smooth_objective linear_quadratic(index_t d);
  static smooth_objective logistic(index_t d);

  double value(const vec& y) const;
  vec gradient(const vec& y) const;
  // f*(w); throws dual_infeasible_error if w is outside dom(f*)
  double conjugate_value(const vec& w) const;

  double smoothness() const { return smoothness_; }
  std::optional<double> strong_convexity() const { return strong_convexity_; }

  objective_kind kind() const { return kind_; }
  index_t dim() const { return dim_; }
  const vec& target() const;

  // second derivative of the scalar map t -> f(y + t u) at t = 0 divided by
  // ||u||^2 upper bound; exact for the quadratic kinds (used by line search)
  double quadratic_curvature() const;

 private:
  smooth_objective(objective_kind kind, index_t d, vec b, double smoothness,
                   std::optional<double> strong_convexity);

  objective_kind kind_;
  index_t dim_;
  vec b_;
  double smoothness_;
  std::optional<double> strong_convexity_;
};

}  // namespace gapscreen

#endif  // GAPSCREEN_OBJECTIVES_HPP
