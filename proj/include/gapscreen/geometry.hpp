#ifndef GAPSCREEN_GEOMETRY_HPP
#define GAPSCREEN_GEOMETRY_HPP

#include <utility>
#include <vector>

#include "gapscreen/common.hpp"

namespace gapscreen {

// Result of a linear minimization min_{z in C} direction^T z: the attained
// value and the minimizer as a sparse list of (index, value) entries.
struct lmo_point {
  double value = 0.0;
  std::vector<std::pair<index_t, double>> entries;

  vec to_dense(index_t n) const;
};

enum class constraint_kind { simplex, l1_ball, elastic_ball, box };

// Constraint set C together with an optional separable linear term q, so the
// non-smooth part reads g(x) = indicator_C(x) + q^T x. The linear term houses
// the MEB c^T x and the SVM-dual -1^T x.
class constraint_spec {
 public:
  static constraint_spec simplex(index_t n);
  static constraint_spec l1_ball(index_t n, double radius);
  static constraint_spec elastic_ball(index_t n, double alpha, double scale);
  static constraint_spec box(index_t n, double upper);

  constraint_spec with_linear_term(vec q) const;

  constraint_kind kind() const { return kind_; }
  index_t dim() const { return n_; }
  double radius() const { return radius_; }
  double alpha() const { return alpha_; }
  double scale() const { return scale_; }
  double upper() const { return upper_; }
  bool has_linear_term() const { return linear_.size() > 0; }
  const vec& linear_term() const { return linear_; }
  double linear_value(const vec& x) const;

  // min_{z in C} direction^T z (the linear term is NOT included; callers
  // fold it into `direction` when screening or computing Wolfe gaps)
  lmo_point lmo(const vec& direction) const;

  bool contains(const vec& x) const;

  // support function sigma_C(v) = max_{z in C} v^T z
  double support_value(const vec& v) const;

  // g*(v) = sigma_C(v - q)
  double conjugate_value(const vec& v) const;

  // A scaled elastic ball equals s * E(alpha', 1); returns (s, alpha').
  // For the other kinds returns (radius-or-upper, alpha) trivially.
  std::pair<double, double> elastic_unit_normalization() const;

  // restriction of the set to a subset of the coordinates (same kind and
  // parameters; linear term restricted)
  constraint_spec restrict(const std::vector<index_t>& keep) const;

 private:
  constraint_spec(constraint_kind kind, index_t n);

  constraint_kind kind_;
  index_t n_;
  double radius_ = 0.0;
  double alpha_ = 0.0;
  double scale_ = 0.0;
  double upper_ = 0.0;
  vec linear_;
};

// Disjoint contiguous column groups covering [0, n).
class group_layout {
 public:
  static group_layout contiguous(const std::vector<index_t>& lengths);
  static group_layout singletons(index_t n);

  index_t groups() const { return static_cast<index_t>(ranges_.size()); }
  index_t cols() const { return cols_; }
  std::pair<index_t, index_t> range(index_t g) const { return ranges_[g]; }
  index_t group_of(index_t col) const;

 private:
  std::vector<std::pair<index_t, index_t>> ranges_;  // (start, len)
  std::vector<index_t> lookup_;
  index_t cols_ = 0;
};

enum class regularizer_kind { l1, elastic_net, elastic_net_unit, group_l2l1 };

// Separable or group-separable penalty g.
//   l1:               lambda * ||x||_1
//   elastic_net:      lambda2 * ||x||_2^2 + lambda1 * ||x||_1
//   elastic_net_unit: (1-alpha)/2 * ||x||_2^2 + alpha * ||x||_1
//   group_l2l1:       sum_g weight_g * ||x_g||_2
class regularizer_spec {
 public:
  static regularizer_spec l1(index_t n, double lambda);
  static regularizer_spec elastic_net(index_t n, double lambda1,
                                      double lambda2);
  static regularizer_spec elastic_net_unit(index_t n, double alpha);
  static regularizer_spec group_l2l1(group_layout layout, vec weights);

  regularizer_kind kind() const { return kind_; }
  index_t dim() const { return n_; }
  double lambda() const { return lambda1_; }
  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }
  double alpha() const { return alpha_; }
  const group_layout& groups() const { return layout_; }
  const vec& group_weights() const { return weights_; }

  vec prox(const vec& v, double step) const;
  double penalty_value(const vec& x) const;

  // largest s in (0,1] such that s * atw is feasible for the indicator-type
  // conjugate; 1 for the elastic-net kinds whose conjugate is finite
  double dual_feasibility_scale(const vec& atw) const;

  // g*(v); throws dual_infeasible_error when an indicator-type conjugate is
  // evaluated at an infeasible point (caller must rescale first)
  double conjugate_value(const vec& v) const;

  regularizer_spec restrict(const std::vector<index_t>& keep) const;

 private:
  regularizer_spec(regularizer_kind kind, index_t n);

  regularizer_kind kind_;
  index_t n_;
  double lambda1_ = 0.0;
  double lambda2_ = 0.0;
  double alpha_ = 0.0;
  group_layout layout_;
  vec weights_;
};

double soft_threshold(double v, double t);

}  // namespace gapscreen

#endif  // GAPSCREEN_GEOMETRY_HPP
