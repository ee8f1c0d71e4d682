#include "gapscreen/objectives.hpp"

#include <cmath>

namespace gapscreen {

namespace {

void check_input(const vec& y, index_t d, const char* op) {
  if (y.size() != d)
    throw std::invalid_argument(std::string(op) + ": length " +
                                std::to_string(y.size()) +
                                " does not match objective dimension " +
                                std::to_string(d));
  if (!y.allFinite())
    throw std::invalid_argument(std::string(op) + ": non-finite input");
}

// log(1 + exp(t)) without overflow
double log1pexp(double t) {
  if (t > 0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

// w log w + (1-w) log(1-w) with the closure convention 0 log 0 = 0
double neg_entropy(double w) {
  double s = 0.0;
  if (w > 0) s += w * std::log(w);
  if (w < 1) s += (1.0 - w) * std::log(1.0 - w);
  return s;
}

}  // namespace

smooth_objective::smooth_objective(objective_kind kind, index_t d, vec b,
                                   double smoothness,
                                   std::optional<double> strong_convexity)
    : kind_(kind),
      dim_(d),
      b_(std::move(b)),
      smoothness_(smoothness),
      strong_convexity_(strong_convexity) {
  require(d >= 1, "smooth_objective: dimension must be positive");
}

smooth_objective smooth_objective::squared_error(vec b) {
  require(b.size() >= 1 && b.allFinite(), "squared_error: bad target");
  index_t d = b.size();
  return smooth_objective(objective_kind::squared_error, d, std::move(b), 1.0,
                          1.0);
}

smooth_objective smooth_objective::pure_quadratic(index_t d) {
  return smooth_objective(objective_kind::pure_quadratic, d, vec(), 1.0, 1.0);
}

smooth_objective smooth_objective::meb_quadratic(index_t d) {
  return smooth_objective(objective_kind::meb_quadratic, d, vec(), 2.0, 2.0);
}

smooth_objective smooth_objective::linear_quadratic(index_t d) {
  return smooth_objective(objective_kind::linear_quadratic, d, vec(), 1.0,
                          1.0);
}

smooth_objective smooth_objective::logistic(index_t d) {
  return smooth_objective(objective_kind::logistic, d, vec(), 1.0,
                          std::nullopt);
}

const vec& smooth_objective::target() const {
  require(kind_ == objective_kind::squared_error,
          "target: objective has no target vector");
  return b_;
}

double smooth_objective::value(const vec& y) const {
  check_input(y, dim_, "value");
  switch (kind_) {
    case objective_kind::squared_error:
      return 0.5 * (y - b_).squaredNorm();
    case objective_kind::pure_quadratic:
    case objective_kind::linear_quadratic:
      return 0.5 * y.squaredNorm();
    case objective_kind::meb_quadratic:
      return y.squaredNorm();
    case objective_kind::logistic: {
      double s = 0.0;
      for (index_t i = 0; i < y.size(); ++i) s += log1pexp(y[i]);
      return s;
    }
  }
  throw std::logic_error("value: unknown objective kind");
}

vec smooth_objective::gradient(const vec& y) const {
  check_input(y, dim_, "gradient");
  switch (kind_) {
    case objective_kind::squared_error:
      return y - b_;
    case objective_kind::pure_quadratic:
    case objective_kind::linear_quadratic:
      return y;
    case objective_kind::meb_quadratic:
      return 2.0 * y;
    case objective_kind::logistic: {
      vec w(y.size());
      for (index_t i = 0; i < y.size(); ++i) {
        // exp(y)/(exp(y)+1), computed stably
        w[i] = y[i] >= 0 ? 1.0 / (1.0 + std::exp(-y[i]))
                         : std::exp(y[i]) / (1.0 + std::exp(y[i]));
      }
      return w;
    }
  }
  throw std::logic_error("gradient: unknown objective kind");
}

double smooth_objective::conjugate_value(const vec& w) const {
  check_input(w, dim_, "conjugate_value");
  switch (kind_) {
    case objective_kind::squared_error:
      return 0.5 * w.squaredNorm() + b_.dot(w);
    case objective_kind::pure_quadratic:
    case objective_kind::linear_quadratic:
      return 0.5 * w.squaredNorm();
    case objective_kind::meb_quadratic:
      return 0.25 * w.squaredNorm();
    case objective_kind::logistic: {
      double s = 0.0;
      for (index_t i = 0; i < w.size(); ++i) {
        if (w[i] < 0.0 || w[i] > 1.0)
          throw dual_infeasible_error(
              "conjugate_value: logistic dual point outside [0,1]");
        s += neg_entropy(w[i]);
      }
      return s;
    }
  }
  throw std::logic_error("conjugate_value: unknown objective kind");
}

double smooth_objective::quadratic_curvature() const {
  switch (kind_) {
    case objective_kind::meb_quadratic:
      return 2.0;
    case objective_kind::logistic:
      return 0.25;  // sigma'(t) <= 1/4
    default:
      return 1.0;
  }
}

}  // namespace gapscreen
