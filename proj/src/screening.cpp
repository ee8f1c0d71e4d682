#include "gapscreen/screening.hpp"

#include <cmath>
#include <ostream>

namespace gapscreen {

namespace {

const char* status_name(var_status s) {
  switch (s) {
    case var_status::active:
      return "active";
    case var_status::fixed_zero:
      return "fixed_zero";
    case var_status::fixed_upper:
      return "fixed_upper";
  }
  return "?";
}

double norm_of_difference(double col_norm_sq, double col_dot_y,
                          double y_norm_sq) {
  return std::sqrt(
      std::max(0.0, col_norm_sq - 2.0 * col_dot_y + y_norm_sq));
}

double require_grad_radius(const screen_context& ctx, const char* rule) {
  if (!ctx.cert.grad_radius)
    throw rule_unavailable_error(std::string(rule) +
                                 ": certificate lacks the Wolfe-gap gradient "
                                 "radius (missing strong convexity)");
  return *ctx.cert.grad_radius;
}

bool is_active(const screen_context& ctx, index_t view_col) {
  return ctx.mask.status(ctx.to_original[view_col]) == var_status::active;
}

}  // namespace

// ---------------------------------------------------------------------------
// reports and mask

void write_reports_csv(std::ostream& os,
                       const std::vector<rule_report>& reports) {
  os << "rule_id,iter,index,status,lhs,rhs\n";
  char buf[64];
  for (const auto& rep : reports) {
    for (const auto& e : rep.newly_fixed) {
      os << rep.rule_id << ',' << rep.iter << ',' << e.index << ','
         << status_name(e.status) << ',';
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g", e.lhs, e.rhs);
      os << buf << '\n';
    }
  }
}

screen_mask::screen_mask(index_t n_original, index_t n_rows,
                         double upper_value)
    : status_(static_cast<std::size_t>(n_original), var_status::active),
      fixed_offset_(vec::Zero(n_rows)),
      upper_value_(upper_value),
      n_active_(n_original) {
  require(n_original >= 1 && n_rows >= 1, "screen_mask: bad dimensions");
  active_.resize(n_original);
  for (index_t i = 0; i < n_original; ++i) active_[i] = i;
}

var_status screen_mask::status(index_t i) const {
  require(i >= 0 && i < n_original(), "screen_mask: index out of range");
  return status_[static_cast<std::size_t>(i)];
}

void screen_mask::commit(const rule_report& report,
                         const column_matrix& full_matrix) {
  require(full_matrix.cols() == n_original(),
          "screen_mask: matrix does not match mask width");
  bool upper_added = false;
  for (const auto& e : report.newly_fixed) {
    require(e.index >= 0 && e.index < n_original(),
            "screen_mask: fixed index out of range");
    auto& s = status_[static_cast<std::size_t>(e.index)];
    if (s != var_status::active) {
      if (s == e.status) continue;  // same decision twice is harmless
      throw std::logic_error("screen_mask: attempt to change a fixed status");
    }
    require(e.status != var_status::active,
            "screen_mask: cannot fix a variable to active");
    if (e.status == var_status::fixed_upper) {
      require(upper_value_ > 0,
              "screen_mask: fixed_upper requires an upper value");
      upper_added = true;
      ++n_fixed_upper_;
    } else {
      ++n_fixed_zero_;
    }
    s = e.status;
    --n_active_;
  }
  active_.clear();
  for (index_t i = 0; i < n_original(); ++i)
    if (status_[static_cast<std::size_t>(i)] == var_status::active)
      active_.push_back(i);
  if (upper_added) {
    fixed_offset_.setZero();
    for (index_t i = 0; i < n_original(); ++i)
      if (status_[static_cast<std::size_t>(i)] == var_status::fixed_upper)
        full_matrix.add_col_to(i, upper_value_, fixed_offset_);
  }
}

vec screen_mask::embed(const vec& x_active) const {
  require(x_active.size() == n_active_, "embed: length mismatch");
  vec x = vec::Zero(n_original());
  for (index_t k = 0; k < n_active_; ++k) x[active_[k]] = x_active[k];
  for (index_t i = 0; i < n_original(); ++i)
    if (status_[static_cast<std::size_t>(i)] == var_status::fixed_upper)
      x[i] = upper_value_;
  return x;
}

// ---------------------------------------------------------------------------
// rules

rule_report screen_simplex(const screen_context& ctx) {
  const auto& p = ctx.problem;
  require(p.constrained() &&
              p.constraint().kind() == constraint_kind::simplex &&
              !p.constraint().has_linear_term(),
          "screen_simplex: problem is not plain simplex-constrained");
  double radius = require_grad_radius(ctx, "screen_simplex");

  rule_report rep;
  rep.rule_id = "simplex";
  rep.iter = ctx.iter;
  const column_matrix& A = p.matrix();
  vec d = A.multiply_transpose(ctx.it.w);
  vec aty = A.multiply_transpose(ctx.it.y);
  double xtd = ctx.it.x.dot(d);
  double y_sq = ctx.it.y.squaredNorm();
  const vec& norms = A.col_norms();
  for (index_t j = 0; j < A.cols(); ++j) {
    if (!is_active(ctx, j)) continue;
    double lhs = d[j] - xtd;
    double rhs =
        radius * norm_of_difference(norms[j] * norms[j], aty[j], y_sq);
    rep.tested_lhs.push_back(lhs);
    rep.tested_rhs.push_back(rhs);
    if (lhs - rhs > ctx.slack)
      rep.newly_fixed.push_back(
          {ctx.to_original[j], var_status::fixed_zero, lhs, rhs});
  }
  return rep;
}

rule_report screen_l1_constrained(const screen_context& ctx) {
  const auto& p = ctx.problem;
  require(p.constrained() &&
              p.constraint().kind() == constraint_kind::l1_ball &&
              !p.constraint().has_linear_term(),
          "screen_l1_constrained: problem is not L1-ball-constrained");
  double radius = require_grad_radius(ctx, "screen_l1_constrained");
  double r = p.constraint().radius();

  rule_report rep;
  rep.rule_id = "l1_constrained";
  rep.iter = ctx.iter;
  const column_matrix& A = p.matrix();
  vec d = A.multiply_transpose(ctx.it.w);
  double xtd = ctx.it.x.dot(d);
  double y_norm = ctx.it.y.norm();
  const vec& norms = A.col_norms();
  for (index_t j = 0; j < A.cols(); ++j) {
    if (!is_active(ctx, j)) continue;
    double lhs = r * std::abs(d[j]) + xtd;
    double rhs = -radius * (r * norms[j] + y_norm);
    rep.tested_lhs.push_back(lhs);
    rep.tested_rhs.push_back(rhs);
    if (rhs - lhs > ctx.slack)
      rep.newly_fixed.push_back(
          {ctx.to_original[j], var_status::fixed_zero, lhs, rhs});
  }
  return rep;
}

rule_report screen_elastic_constrained(const screen_context& ctx) {
  const auto& p = ctx.problem;
  require(p.constrained() &&
              p.constraint().kind() == constraint_kind::elastic_ball &&
              !p.constraint().has_linear_term(),
          "screen_elastic_constrained: problem is not elastic-ball-"
          "constrained");
  double radius = require_grad_radius(ctx, "screen_elastic_constrained");
  auto [s, alpha] = p.constraint().elastic_unit_normalization();
  double k = 2.0 * alpha / (3.0 - alpha);

  rule_report rep;
  rep.rule_id = "elastic_constrained";
  rep.iter = ctx.iter;
  const column_matrix& A = p.matrix();
  vec d = A.multiply_transpose(ctx.it.w);
  double xtd = ctx.it.x.dot(d);
  double y_norm = ctx.it.y.norm();
  const vec& norms = A.col_norms();
  for (index_t j = 0; j < A.cols(); ++j) {
    if (!is_active(ctx, j)) continue;
    double lhs = s * std::abs(d[j]) + k * xtd;
    double rhs = -radius * (s * norms[j] + k * y_norm);
    rep.tested_lhs.push_back(lhs);
    rep.tested_rhs.push_back(rhs);
    if (rhs - lhs > ctx.slack)
      rep.newly_fixed.push_back(
          {ctx.to_original[j], var_status::fixed_zero, lhs, rhs});
  }
  return rep;
}

namespace {

rule_report box_style_rule(const screen_context& ctx, const char* rule_id,
                           double radius_scale) {
  const auto& p = ctx.problem;
  require(p.constrained() && p.constraint().kind() == constraint_kind::box,
          std::string(rule_id) + ": problem is not box-constrained");
  rule_report rep;
  rep.rule_id = rule_id;
  rep.iter = ctx.iter;
  const column_matrix& A = p.matrix();
  const constraint_spec& c = p.constraint();
  vec d = A.multiply_transpose(ctx.it.w);
  if (c.has_linear_term()) d += c.linear_term();
  const vec& norms = A.col_norms();
  for (index_t j = 0; j < A.cols(); ++j) {
    if (!is_active(ctx, j)) continue;
    double z = d[j];
    double rhs = norms[j] * radius_scale;
    rep.tested_lhs.push_back(z);
    rep.tested_rhs.push_back(rhs);
    if (z - rhs > ctx.slack) {
      rep.newly_fixed.push_back(
          {ctx.to_original[j], var_status::fixed_zero, z, rhs});
    } else if (-z - rhs > ctx.slack) {
      rep.newly_fixed.push_back(
          {ctx.to_original[j], var_status::fixed_upper, z, -rhs});
    }
  }
  return rep;
}

}  // namespace

rule_report screen_box(const screen_context& ctx) {
  return box_style_rule(ctx, "box", ctx.cert.dual_radius);
}

rule_report screen_hinge_svm(const screen_context& ctx, bool improved) {
  const auto& p = ctx.problem;
  require(p.constrained() && p.constraint().has_linear_term(),
          "screen_hinge_svm: SVM dual requires the -1^T x linear term");
  auto kind = p.objective().kind();
  require(kind == objective_kind::linear_quadratic ||
              kind == objective_kind::pure_quadratic,
          "screen_hinge_svm: objective is not the SVM-dual quadratic");
  // the sqrt(2)-improved variant drops the factor 2 under the radicand
  double radius = improved ? std::sqrt(ctx.cert.duality_gap)
                           : ctx.cert.dual_radius;
  return box_style_rule(ctx, improved ? "hinge_svm_sqrt2" : "hinge_svm",
                        radius);
}

rule_report screen_sq_hinge_svm(const screen_context& ctx) {
  const auto& p = ctx.problem;
  require(p.constrained() &&
              p.constraint().kind() == constraint_kind::simplex &&
              !p.constraint().has_linear_term() &&
              p.objective().kind() == objective_kind::pure_quadratic,
          "screen_sq_hinge_svm: problem is not the squared-hinge SVM dual");
  require(ctx.cert.wolfe_gap.has_value(),
          "screen_sq_hinge_svm: certificate lacks the Wolfe gap");
  double root = std::sqrt(*ctx.cert.wolfe_gap);

  rule_report rep;
  rep.rule_id = "sq_hinge_svm";
  rep.iter = ctx.iter;
  const column_matrix& A = p.matrix();
  // w = grad f(Ax) = Ax, so A^T w doubles as the column-image inner products
  vec d = A.multiply_transpose(ctx.it.w);
  double xtd = ctx.it.x.dot(d);
  double y_sq = ctx.it.y.squaredNorm();
  const vec& norms = A.col_norms();
  for (index_t j = 0; j < A.cols(); ++j) {
    if (!is_active(ctx, j)) continue;
    double lhs = d[j] - xtd;
    double rhs = root * norm_of_difference(norms[j] * norms[j], d[j], y_sq);
    rep.tested_lhs.push_back(lhs);
    rep.tested_rhs.push_back(rhs);
    if (lhs - rhs > ctx.slack)
      rep.newly_fixed.push_back(
          {ctx.to_original[j], var_status::fixed_zero, lhs, rhs});
  }
  return rep;
}

rule_report screen_meb(const screen_context& ctx) {
  const auto& p = ctx.problem;
  require(p.constrained() &&
              p.constraint().kind() == constraint_kind::simplex &&
              p.constraint().has_linear_term() &&
              p.objective().kind() == objective_kind::meb_quadratic,
          "screen_meb: problem is not the MEB dual");
  require(ctx.cert.wolfe_gap.has_value(),
          "screen_meb: certificate lacks the Wolfe gap");
  double root = 2.0 * std::sqrt(0.5 * *ctx.cert.wolfe_gap);

  rule_report rep;
  rep.rule_id = "meb";
  rep.iter = ctx.iter;
  const column_matrix& A = p.matrix();
  // m = 2 A^T A x + c, assembled as A^T w + c with w = 2 Ax
  vec m = A.multiply_transpose(ctx.it.w) + p.constraint().linear_term();
  vec aty = A.multiply_transpose(ctx.it.y);
  double xtm = ctx.it.x.dot(m);
  double y_sq = ctx.it.y.squaredNorm();
  const vec& norms = A.col_norms();
  for (index_t j = 0; j < A.cols(); ++j) {
    if (!is_active(ctx, j)) continue;
    double lhs = m[j] - xtm;
    double rhs = root * norm_of_difference(norms[j] * norms[j], aty[j], y_sq);
    rep.tested_lhs.push_back(lhs);
    rep.tested_rhs.push_back(rhs);
    if (lhs - rhs > ctx.slack)
      rep.newly_fixed.push_back(
          {ctx.to_original[j], var_status::fixed_zero, lhs, rhs});
  }
  return rep;
}

rule_report screen_l1_penalized(const screen_context& ctx) {
  const auto& p = ctx.problem;
  require(!p.constrained(), "screen_l1_penalized: problem is constrained");
  const auto& r = p.regularizer();
  require(r.kind() == regularizer_kind::l1,
          "screen_l1_penalized: regularizer is not L1");
  double lambda = r.lambda();
  double radius = ctx.cert.dual_radius;

  rule_report rep;
  rep.rule_id = "l1_penalized";
  rep.iter = ctx.iter;
  const column_matrix& A = p.matrix();
  vec d = A.multiply_transpose(ctx.it.w);
  const vec& norms = A.col_norms();
  for (index_t j = 0; j < A.cols(); ++j) {
    if (!is_active(ctx, j)) continue;
    double lhs = std::abs(d[j]);
    double rhs = lambda - norms[j] * radius;
    rep.tested_lhs.push_back(lhs);
    rep.tested_rhs.push_back(rhs);
    if (rhs - lhs > ctx.slack)
      rep.newly_fixed.push_back(
          {ctx.to_original[j], var_status::fixed_zero, lhs, rhs});
  }
  return rep;
}

rule_report screen_elastic_penalized_unit(const screen_context& ctx) {
  const auto& p = ctx.problem;
  require(!p.constrained() &&
              p.regularizer().kind() == regularizer_kind::elastic_net_unit,
          "screen_elastic_penalized_unit: wrong regularizer");
  double alpha = p.regularizer().alpha();
  double radius = ctx.cert.dual_radius;

  rule_report rep;
  rep.rule_id = "elastic_penalized_unit";
  rep.iter = ctx.iter;
  const column_matrix& A = p.matrix();
  vec d = A.multiply_transpose(ctx.it.w);
  const vec& norms = A.col_norms();
  for (index_t j = 0; j < A.cols(); ++j) {
    if (!is_active(ctx, j)) continue;
    double lhs = std::abs(d[j]);
    double rhs = alpha - norms[j] * radius;
    rep.tested_lhs.push_back(lhs);
    rep.tested_rhs.push_back(rhs);
    if (rhs - lhs > ctx.slack)
      rep.newly_fixed.push_back(
          {ctx.to_original[j], var_status::fixed_zero, lhs, rhs});
  }
  return rep;
}

rule_report screen_elastic_penalized_regression(const screen_context& ctx) {
  const auto& p = ctx.problem;
  require(!p.constrained() &&
              p.regularizer().kind() == regularizer_kind::elastic_net,
          "screen_elastic_penalized_regression: wrong regularizer");
  require(p.objective().kind() == objective_kind::squared_error,
          "screen_elastic_penalized_regression: requires squared-error loss");
  double l1 = p.regularizer().lambda1();
  double l2 = p.regularizer().lambda2();
  double gap = ctx.cert.duality_gap;

  rule_report rep;
  rep.rule_id = "elastic_penalized_cor6";
  rep.iter = ctx.iter;
  const column_matrix& A = p.matrix();
  vec d = A.multiply_transpose(ctx.it.w);  // a_i^T (Ax - b)
  const vec& norms = A.col_norms();
  for (index_t j = 0; j < A.cols(); ++j) {
    if (!is_active(ctx, j)) continue;
    double lhs = std::abs(d[j] + 2.0 * l2 * ctx.it.x[j]);
    double rhs =
        l1 - std::sqrt(2.0 * (norms[j] * norms[j] + 2.0 * l2) * gap);
    rep.tested_lhs.push_back(lhs);
    rep.tested_rhs.push_back(rhs);
    if (rhs - lhs > ctx.slack)
      rep.newly_fixed.push_back(
          {ctx.to_original[j], var_status::fixed_zero, lhs, rhs});
  }
  return rep;
}

rule_report screen_group(const screen_context& ctx) {
  const auto& p = ctx.problem;
  require(!p.constrained() &&
              p.regularizer().kind() == regularizer_kind::group_l2l1,
          "screen_group: regularizer is not group L2/L1");
  const auto& r = p.regularizer();
  const auto& layout = r.groups();
  double radius = ctx.cert.dual_radius;

  rule_report rep;
  rep.rule_id = "group";
  rep.iter = ctx.iter;
  const column_matrix& A = p.matrix();
  vec d = A.multiply_transpose(ctx.it.w);
  for (index_t g = 0; g < layout.groups(); ++g) {
    auto [start, len] = layout.range(g);
    if (!is_active(ctx, start)) continue;  // groups fix atomically
    double lhs = d.segment(start, len).norm() +
                 radius * A.group_frobenius(start, len);
    double rhs = r.group_weights()[g];
    rep.tested_lhs.push_back(lhs);
    rep.tested_rhs.push_back(rhs);
    if (rhs - lhs > ctx.slack) {
      for (index_t j = start; j < start + len; ++j)
        rep.newly_fixed.push_back(
            {ctx.to_original[j], var_status::fixed_zero, lhs, rhs});
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// dispatch

const char* rule_name(rule_kind k) {
  switch (k) {
    case rule_kind::none: return "none";
    case rule_kind::simplex: return "simplex";
    case rule_kind::l1_constrained: return "l1_constrained";
    case rule_kind::elastic_constrained: return "elastic_constrained";
    case rule_kind::box: return "box";
    case rule_kind::hinge_svm: return "hinge_svm";
    case rule_kind::hinge_svm_improved: return "hinge_svm_sqrt2";
    case rule_kind::sq_hinge_svm: return "sq_hinge_svm";
    case rule_kind::meb: return "meb";
    case rule_kind::l1_penalized: return "l1_penalized";
    case rule_kind::elastic_penalized_unit: return "elastic_penalized_unit";
    case rule_kind::elastic_penalized_regression:
      return "elastic_penalized_cor6";
    case rule_kind::group: return "group";
  }
  return "?";
}

void validate_rule(rule_kind k, const problem_spec& p) {
  auto want_constraint = [&](constraint_kind ck, const char* what) {
    require(p.constrained() && p.constraint().kind() == ck,
            std::string("rule/problem mismatch: ") + what);
  };
  auto want_regularizer = [&](regularizer_kind rk, const char* what) {
    require(!p.constrained() && p.regularizer().kind() == rk,
            std::string("rule/problem mismatch: ") + what);
  };
  switch (k) {
    case rule_kind::none:
      return;
    case rule_kind::simplex:
      want_constraint(constraint_kind::simplex, "simplex rule needs a "
                      "simplex constraint");
      require(!p.constraint().has_linear_term(),
              "rule/problem mismatch: simplex rule needs a pure f");
      require(p.objective().strong_convexity().has_value(),
              "rule family unavailable for this objective");
      return;
    case rule_kind::l1_constrained:
      want_constraint(constraint_kind::l1_ball, "L1 rule needs an L1 ball");
      require(p.objective().strong_convexity().has_value(),
              "rule family unavailable for this objective");
      return;
    case rule_kind::elastic_constrained:
      want_constraint(constraint_kind::elastic_ball,
                      "elastic rule needs an elastic ball");
      require(p.objective().strong_convexity().has_value(),
              "rule family unavailable for this objective");
      return;
    case rule_kind::box:
      want_constraint(constraint_kind::box, "box rule needs a box");
      return;
    case rule_kind::hinge_svm:
    case rule_kind::hinge_svm_improved:
      want_constraint(constraint_kind::box, "hinge rule needs a box");
      require(p.constraint().has_linear_term(),
              "rule/problem mismatch: hinge rule needs the -1^T x term");
      return;
    case rule_kind::sq_hinge_svm:
      want_constraint(constraint_kind::simplex,
                      "squared-hinge rule needs a simplex");
      require(p.objective().kind() == objective_kind::pure_quadratic,
              "rule/problem mismatch: squared-hinge rule needs f = "
              "1/2 ||Ax||^2");
      return;
    case rule_kind::meb:
      want_constraint(constraint_kind::simplex, "MEB rule needs a simplex");
      require(p.objective().kind() == objective_kind::meb_quadratic &&
                  p.constraint().has_linear_term(),
              "rule/problem mismatch: MEB rule needs ||Ax||^2 + c^T x");
      return;
    case rule_kind::l1_penalized:
      want_regularizer(regularizer_kind::l1, "lasso rule needs an L1 penalty");
      return;
    case rule_kind::elastic_penalized_unit:
      want_regularizer(regularizer_kind::elastic_net_unit,
                       "unit elastic rule needs the unit-form penalty");
      return;
    case rule_kind::elastic_penalized_regression:
      want_regularizer(regularizer_kind::elastic_net,
                       "regression elastic rule needs the lambda1/lambda2 "
                       "penalty");
      require(p.objective().kind() == objective_kind::squared_error,
              "rule/problem mismatch: regression elastic rule needs squared "
              "error");
      return;
    case rule_kind::group:
      want_regularizer(regularizer_kind::group_l2l1,
                       "group rule needs the group penalty");
      return;
  }
  throw std::logic_error("validate_rule: unknown rule");
}

rule_report run_rule(rule_kind k, const screen_context& ctx) {
  switch (k) {
    case rule_kind::none: {
      rule_report rep;
      rep.rule_id = "none";
      rep.iter = ctx.iter;
      return rep;
    }
    case rule_kind::simplex: return screen_simplex(ctx);
    case rule_kind::l1_constrained: return screen_l1_constrained(ctx);
    case rule_kind::elastic_constrained: return screen_elastic_constrained(ctx);
    case rule_kind::box: return screen_box(ctx);
    case rule_kind::hinge_svm: return screen_hinge_svm(ctx, false);
    case rule_kind::hinge_svm_improved: return screen_hinge_svm(ctx, true);
    case rule_kind::sq_hinge_svm: return screen_sq_hinge_svm(ctx);
    case rule_kind::meb: return screen_meb(ctx);
    case rule_kind::l1_penalized: return screen_l1_penalized(ctx);
    case rule_kind::elastic_penalized_unit:
      return screen_elastic_penalized_unit(ctx);
    case rule_kind::elastic_penalized_regression:
      return screen_elastic_penalized_regression(ctx);
    case rule_kind::group: return screen_group(ctx);
  }
  throw std::logic_error("run_rule: unknown rule");
}

// ---------------------------------------------------------------------------
// compression

compressed_problem apply_mask(const problem_spec& full,
                              const screen_mask& mask) {
  require(mask.n_original() == full.n_cols(),
          "apply_mask: mask does not match problem width");
  compressed_problem out;
  out.to_original = mask.active_to_original();
  if (out.to_original.empty()) return out;  // fully solved by the mask

  if (mask.n_fixed_zero() == 0 && mask.n_fixed_upper() == 0) {
    out.problem = full;
    return out;
  }

  column_matrix A = full.matrix().select_columns(out.to_original);
  double shift = full.primal_shift();
  vec offset =
      full.has_offset() ? vec(full.y_offset()) : vec(vec::Zero(full.n_rows()));
  bool any_offset = full.has_offset();
  if (mask.n_fixed_upper() > 0) {
    offset += mask.fixed_offset();
    any_offset = true;
    if (full.constrained() && full.constraint().has_linear_term()) {
      const vec& q = full.constraint().linear_term();
      for (index_t i = 0; i < mask.n_original(); ++i)
        if (mask.status(i) == var_status::fixed_upper)
          shift += q[i] * mask.upper_value();
    }
  }

  if (full.constrained()) {
    problem_spec p(std::move(A), full.objective(),
                   full.constraint().restrict(out.to_original));
    out.problem =
        p.with_view_terms(any_offset ? std::move(offset) : vec(), shift);
  } else {
    problem_spec p(std::move(A), full.objective(),
                   full.regularizer().restrict(out.to_original));
    out.problem =
        p.with_view_terms(any_offset ? std::move(offset) : vec(), shift);
  }
  return out;
}

}  // namespace gapscreen
