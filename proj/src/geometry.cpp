#include "gapscreen/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gapscreen {

namespace {

constexpr double kFeasRelTol = 1e-9;
constexpr double kCoordTol = 1e-12;

}  // namespace

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

vec lmo_point::to_dense(index_t n) const {
  vec z = vec::Zero(n);
  for (const auto& [i, v] : entries) z[i] = v;
  return z;
}

// ---------------------------------------------------------------------------
// constraint_spec

constraint_spec::constraint_spec(constraint_kind kind, index_t n)
    : kind_(kind), n_(n) {
  require(n >= 1, "constraint_spec: dimension must be positive");
}

constraint_spec constraint_spec::simplex(index_t n) {
  return constraint_spec(constraint_kind::simplex, n);
}

constraint_spec constraint_spec::l1_ball(index_t n, double radius) {
  require(radius > 0, "l1_ball: radius must be positive");
  constraint_spec c(constraint_kind::l1_ball, n);
  c.radius_ = radius;
  return c;
}

constraint_spec constraint_spec::elastic_ball(index_t n, double alpha,
                                              double scale) {
  require(alpha > 0 && alpha <= 1, "elastic_ball: alpha must be in (0,1]");
  require(scale > 0, "elastic_ball: scale must be positive");
  constraint_spec c(constraint_kind::elastic_ball, n);
  c.alpha_ = alpha;
  c.scale_ = scale;
  return c;
}

constraint_spec constraint_spec::box(index_t n, double upper) {
  require(upper > 0, "box: upper bound must be positive");
  constraint_spec c(constraint_kind::box, n);
  c.upper_ = upper;
  return c;
}

constraint_spec constraint_spec::with_linear_term(vec q) const {
  require(q.size() == n_ && q.allFinite(), "with_linear_term: bad q");
  constraint_spec c = *this;
  c.linear_ = std::move(q);
  return c;
}

double constraint_spec::linear_value(const vec& x) const {
  if (linear_.size() == 0) return 0.0;
  return linear_.dot(x);
}

lmo_point constraint_spec::lmo(const vec& direction) const {
  require(direction.size() == n_, "lmo: direction length mismatch");
  lmo_point out;
  switch (kind_) {
    case constraint_kind::simplex: {
      index_t best = 0;
      for (index_t i = 1; i < n_; ++i)
        if (direction[i] < direction[best]) best = i;
      out.value = direction[best];
      out.entries.emplace_back(best, 1.0);
      return out;
    }
    case constraint_kind::l1_ball: {
      index_t best = 0;
      for (index_t i = 1; i < n_; ++i)
        if (std::abs(direction[i]) > std::abs(direction[best])) best = i;
      double v = direction[best] > 0 ? -radius_ : radius_;
      if (direction[best] == 0.0) v = radius_;
      out.value = v * direction[best];
      out.entries.emplace_back(best, v);
      return out;
    }
    case constraint_kind::box: {
      double val = 0.0;
      for (index_t i = 0; i < n_; ++i) {
        if (direction[i] < 0) {
          out.entries.emplace_back(i, upper_);
          val += upper_ * direction[i];
        }
      }
      out.value = val;
      return out;
    }
    case constraint_kind::elastic_ball: {
      if (alpha_ >= 1.0) {
        // degenerates to the L1 ball of radius `scale`
        constraint_spec l1 = l1_ball(n_, scale_);
        return l1.lmo(direction);
      }
      double dmax = direction.cwiseAbs().maxCoeff();
      if (dmax == 0.0) return out;  // z = 0, value 0
      // Minimizer shape z_i = -sign(d_i) [t|d_i| - alpha]_+ / (1-alpha) with
      // the multiplier t > 0 making the constraint tight. On the segment
      // where the active set S = {i : t|d_i| > alpha} is constant the
      // constraint value is (t^2 q_S - m_S alpha^2) / (2(1-alpha)), solved
      // for t in closed form; ties enter S together, lower index first.
      std::vector<index_t> order(n_);
      std::iota(order.begin(), order.end(), index_t{0});
      std::stable_sort(order.begin(), order.end(), [&](index_t a, index_t b) {
        return std::abs(direction[a]) > std::abs(direction[b]);
      });
      double q = 0.0;
      double target = 2.0 * (1.0 - alpha_) * scale_;
      double t = 0.0;
      std::size_t k = 0;
      while (k < order.size()) {
        std::size_t k2 = k;
        double mag = std::abs(direction[order[k]]);
        if (mag == 0.0) break;
        while (k2 < order.size() &&
               std::abs(direction[order[k2]]) == mag) {
          q += direction[order[k2]] * direction[order[k2]];
          ++k2;
        }
        double m = static_cast<double>(k2);
        double cand = std::sqrt((target + m * alpha_ * alpha_) / q);
        double seg_lo = alpha_ / mag;
        double seg_hi = (k2 < order.size() &&
                         std::abs(direction[order[k2]]) > 0.0)
                            ? alpha_ / std::abs(direction[order[k2]])
                            : std::numeric_limits<double>::infinity();
        if (cand >= seg_lo && cand <= seg_hi) {
          t = cand;
          break;
        }
        k = k2;
      }
      require(t > 0, "lmo: elastic ball multiplier not found");
      double val = 0.0;
      for (index_t i = 0; i < n_; ++i) {
        double u = t * std::abs(direction[i]) - alpha_;
        if (u <= 0) continue;
        double zi = (direction[i] > 0 ? -1.0 : 1.0) * u / (1.0 - alpha_);
        out.entries.emplace_back(i, zi);
        val += zi * direction[i];
      }
      out.value = val;
      return out;
    }
  }
  throw std::logic_error("lmo: unknown constraint kind");
}

bool constraint_spec::contains(const vec& x) const {
  require(x.size() == n_, "membership: length mismatch");
  switch (kind_) {
    case constraint_kind::simplex: {
      for (index_t i = 0; i < n_; ++i)
        if (x[i] < -kCoordTol) return false;
      return std::abs(x.sum() - 1.0) <= kFeasRelTol;
    }
    case constraint_kind::l1_ball:
      return x.lpNorm<1>() <= radius_ * (1.0 + kFeasRelTol);
    case constraint_kind::elastic_ball:
      return alpha_ * x.lpNorm<1>() +
                 0.5 * (1.0 - alpha_) * x.squaredNorm() <=
             scale_ * (1.0 + kFeasRelTol);
    case constraint_kind::box: {
      for (index_t i = 0; i < n_; ++i)
        if (x[i] < -kCoordTol || x[i] > upper_ + kCoordTol) return false;
      return true;
    }
  }
  throw std::logic_error("membership: unknown constraint kind");
}

double constraint_spec::support_value(const vec& v) const {
  require(v.size() == n_, "support_value: length mismatch");
  switch (kind_) {
    case constraint_kind::simplex:
      return v.maxCoeff();
    case constraint_kind::l1_ball:
      return radius_ * v.cwiseAbs().maxCoeff();
    case constraint_kind::box: {
      double s = 0.0;
      for (index_t i = 0; i < n_; ++i) s += upper_ * std::max(v[i], 0.0);
      return s;
    }
    case constraint_kind::elastic_ball: {
      if (alpha_ >= 1.0) return scale_ * v.cwiseAbs().maxCoeff();
      double vmax = v.cwiseAbs().maxCoeff();
      if (vmax == 0.0) return 0.0;
      // maximizer u_i = [t|v_i| - alpha]_+ / (1-alpha); bisect on the
      // multiplier t until the constraint is tight
      auto constraint_at = [&](double t) {
        double s = 0.0;
        for (index_t i = 0; i < n_; ++i) {
          double u = (t * std::abs(v[i]) - alpha_) / (1.0 - alpha_);
          if (u > 0) s += alpha_ * u + 0.5 * (1.0 - alpha_) * u * u;
        }
        return s;
      };
      double lo = alpha_ / vmax;
      double hi = lo > 0 ? 2.0 * lo : 1.0;
      while (constraint_at(hi) < scale_) hi *= 2.0;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (constraint_at(mid) < scale_ ? lo : hi) = mid;
      }
      double t = 0.5 * (lo + hi);
      double s = 0.0;
      for (index_t i = 0; i < n_; ++i) {
        double u = (t * std::abs(v[i]) - alpha_) / (1.0 - alpha_);
        if (u > 0) s += std::abs(v[i]) * u;
      }
      return s;
    }
  }
  throw std::logic_error("support_value: unknown constraint kind");
}

double constraint_spec::conjugate_value(const vec& v) const {
  if (linear_.size() == 0) return support_value(v);
  return support_value(v - linear_);
}

std::pair<double, double> constraint_spec::elastic_unit_normalization() const {
  if (kind_ != constraint_kind::elastic_ball)
    return {kind_ == constraint_kind::l1_ball ? radius_ : upper_, alpha_};
  if (alpha_ >= 1.0) return {scale_, 1.0};
  // s^2 (1 - alpha) + s alpha = scale
  double s = (-alpha_ + std::sqrt(alpha_ * alpha_ +
                                  4.0 * (1.0 - alpha_) * scale_)) /
             (2.0 * (1.0 - alpha_));
  return {s, s * alpha_ / scale_};
}

constraint_spec constraint_spec::restrict(
    const std::vector<index_t>& keep) const {
  require(!keep.empty(), "restrict: empty selection");
  constraint_spec c = *this;
  c.n_ = static_cast<index_t>(keep.size());
  if (linear_.size() > 0) {
    vec q(c.n_);
    for (index_t k = 0; k < c.n_; ++k) q[k] = linear_[keep[k]];
    c.linear_ = std::move(q);
  }
  return c;
}

// ---------------------------------------------------------------------------
// group_layout

group_layout group_layout::contiguous(const std::vector<index_t>& lengths) {
  require(!lengths.empty(), "group_layout: no groups");
  group_layout gl;
  index_t start = 0;
  for (index_t len : lengths) {
    require(len >= 1, "group_layout: empty group");
    gl.ranges_.emplace_back(start, len);
    for (index_t j = 0; j < len; ++j)
      gl.lookup_.push_back(static_cast<index_t>(gl.ranges_.size()) - 1);
    start += len;
  }
  gl.cols_ = start;
  return gl;
}

group_layout group_layout::singletons(index_t n) {
  return contiguous(std::vector<index_t>(n, 1));
}

index_t group_layout::group_of(index_t col) const {
  require(col >= 0 && col < cols_, "group_of: column out of range");
  return lookup_[col];
}

// ---------------------------------------------------------------------------
// regularizer_spec

regularizer_spec::regularizer_spec(regularizer_kind kind, index_t n)
    : kind_(kind), n_(n) {
  require(n >= 1, "regularizer_spec: dimension must be positive");
}

regularizer_spec regularizer_spec::l1(index_t n, double lambda) {
  require(lambda > 0, "l1: lambda must be positive");
  regularizer_spec r(regularizer_kind::l1, n);
  r.lambda1_ = lambda;
  return r;
}

regularizer_spec regularizer_spec::elastic_net(index_t n, double lambda1,
                                               double lambda2) {
  require(lambda1 > 0, "elastic_net: lambda1 must be positive");
  require(lambda2 >= 0, "elastic_net: lambda2 must be nonnegative");
  regularizer_spec r(regularizer_kind::elastic_net, n);
  r.lambda1_ = lambda1;
  r.lambda2_ = lambda2;
  return r;
}

regularizer_spec regularizer_spec::elastic_net_unit(index_t n, double alpha) {
  require(alpha > 0 && alpha < 1, "elastic_net_unit: alpha must be in (0,1)");
  regularizer_spec r(regularizer_kind::elastic_net_unit, n);
  r.alpha_ = alpha;
  return r;
}

regularizer_spec regularizer_spec::group_l2l1(group_layout layout,
                                              vec weights) {
  require(weights.size() == layout.groups(),
          "group_l2l1: one weight per group required");
  require((weights.array() > 0).all(), "group_l2l1: weights must be positive");
  regularizer_spec r(regularizer_kind::group_l2l1, layout.cols());
  r.layout_ = std::move(layout);
  r.weights_ = std::move(weights);
  return r;
}

vec regularizer_spec::prox(const vec& v, double step) const {
  require(v.size() == n_, "prox: length mismatch");
  require(step > 0, "prox: step must be positive");
  vec z(n_);
  switch (kind_) {
    case regularizer_kind::l1:
      for (index_t i = 0; i < n_; ++i)
        z[i] = soft_threshold(v[i], step * lambda1_);
      return z;
    case regularizer_kind::elastic_net: {
      double scale = 1.0 / (1.0 + 2.0 * step * lambda2_);
      for (index_t i = 0; i < n_; ++i)
        z[i] = scale * soft_threshold(v[i], step * lambda1_);
      return z;
    }
    case regularizer_kind::elastic_net_unit: {
      double scale = 1.0 / (1.0 + step * (1.0 - alpha_));
      for (index_t i = 0; i < n_; ++i)
        z[i] = scale * soft_threshold(v[i], step * alpha_);
      return z;
    }
    case regularizer_kind::group_l2l1: {
      for (index_t g = 0; g < layout_.groups(); ++g) {
        auto [start, len] = layout_.range(g);
        double norm = v.segment(start, len).norm();
        double shrink =
            norm > 0 ? std::max(0.0, 1.0 - step * weights_[g] / norm) : 0.0;
        z.segment(start, len) = shrink * v.segment(start, len);
      }
      return z;
    }
  }
  throw std::logic_error("prox: unknown regularizer kind");
}

double regularizer_spec::penalty_value(const vec& x) const {
  require(x.size() == n_, "penalty_value: length mismatch");
  switch (kind_) {
    case regularizer_kind::l1:
      return lambda1_ * x.lpNorm<1>();
    case regularizer_kind::elastic_net:
      return lambda2_ * x.squaredNorm() + lambda1_ * x.lpNorm<1>();
    case regularizer_kind::elastic_net_unit:
      return 0.5 * (1.0 - alpha_) * x.squaredNorm() + alpha_ * x.lpNorm<1>();
    case regularizer_kind::group_l2l1: {
      double s = 0.0;
      for (index_t g = 0; g < layout_.groups(); ++g) {
        auto [start, len] = layout_.range(g);
        s += weights_[g] * x.segment(start, len).norm();
      }
      return s;
    }
  }
  throw std::logic_error("penalty_value: unknown regularizer kind");
}

double regularizer_spec::dual_feasibility_scale(const vec& atw) const {
  require(atw.size() == n_, "dual_feasibility_scale: length mismatch");
  switch (kind_) {
    case regularizer_kind::l1: {
      double m = atw.cwiseAbs().maxCoeff();
      return m > lambda1_ ? lambda1_ / m : 1.0;
    }
    case regularizer_kind::elastic_net: {
      if (lambda2_ > 0) return 1.0;
      double m = atw.cwiseAbs().maxCoeff();
      return m > lambda1_ ? lambda1_ / m : 1.0;
    }
    case regularizer_kind::elastic_net_unit:
      return 1.0;
    case regularizer_kind::group_l2l1: {
      double s = 1.0;
      for (index_t g = 0; g < layout_.groups(); ++g) {
        auto [start, len] = layout_.range(g);
        double norm = atw.segment(start, len).norm();
        if (norm > weights_[g]) s = std::min(s, weights_[g] / norm);
      }
      return s;
    }
  }
  throw std::logic_error("dual_feasibility_scale: unknown regularizer kind");
}

double regularizer_spec::conjugate_value(const vec& v) const {
  require(v.size() == n_, "conjugate_value: length mismatch");
  switch (kind_) {
    case regularizer_kind::l1: {
      if (v.cwiseAbs().maxCoeff() > lambda1_ * (1.0 + kFeasRelTol))
        throw dual_infeasible_error(
            "conjugate_value: point outside the dual-norm ball; rescale");
      return 0.0;
    }
    case regularizer_kind::elastic_net: {
      if (lambda2_ == 0.0) {
        if (v.cwiseAbs().maxCoeff() > lambda1_ * (1.0 + kFeasRelTol))
          throw dual_infeasible_error(
              "conjugate_value: point outside the dual-norm ball; rescale");
        return 0.0;
      }
      double s = 0.0;
      for (index_t i = 0; i < n_; ++i) {
        double u = std::max(std::abs(v[i]) - lambda1_, 0.0);
        s += u * u / (4.0 * lambda2_);
      }
      return s;
    }
    case regularizer_kind::elastic_net_unit: {
      double s = 0.0;
      for (index_t i = 0; i < n_; ++i) {
        double u = std::max(std::abs(v[i]) - alpha_, 0.0);
        s += u * u / (2.0 * (1.0 - alpha_));
      }
      return s;
    }
    case regularizer_kind::group_l2l1: {
      for (index_t g = 0; g < layout_.groups(); ++g) {
        auto [start, len] = layout_.range(g);
        if (v.segment(start, len).norm() > weights_[g] * (1.0 + kFeasRelTol))
          throw dual_infeasible_error(
              "conjugate_value: group outside the dual-norm ball; rescale");
      }
      return 0.0;
    }
  }
  throw std::logic_error("conjugate_value: unknown regularizer kind");
}

regularizer_spec regularizer_spec::restrict(
    const std::vector<index_t>& keep) const {
  require(!keep.empty(), "restrict: empty selection");
  switch (kind_) {
    case regularizer_kind::l1:
      return l1(static_cast<index_t>(keep.size()), lambda1_);
    case regularizer_kind::elastic_net:
      return elastic_net(static_cast<index_t>(keep.size()), lambda1_,
                         lambda2_);
    case regularizer_kind::elastic_net_unit:
      return elastic_net_unit(static_cast<index_t>(keep.size()), alpha_);
    case regularizer_kind::group_l2l1: {
      // kept columns must form whole groups, in order
      std::vector<index_t> lengths;
      std::vector<double> w;
      std::size_t k = 0;
      while (k < keep.size()) {
        index_t g = layout_.group_of(keep[k]);
        auto [start, len] = layout_.range(g);
        for (index_t j = 0; j < len; ++j) {
          require(k + j < keep.size() && keep[k + j] == start + j,
                  "restrict: group lasso selection must keep whole groups");
        }
        lengths.push_back(len);
        w.push_back(weights_[g]);
        k += len;
      }
      vec weights(static_cast<index_t>(w.size()));
      for (index_t g = 0; g < weights.size(); ++g) weights[g] = w[g];
      return group_l2l1(group_layout::contiguous(lengths), std::move(weights));
    }
  }
  throw std::logic_error("restrict: unknown regularizer kind");
}

}  // namespace gapscreen
