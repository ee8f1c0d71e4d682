#include "gapscreen/gaps.hpp"

#include <cmath>

namespace gapscreen {

namespace {

constexpr double kNegGapTol = 1e-10;

double clamp_gap(double g, const char* what) {
  if (g < 0.0) {
    if (g < -kNegGapTol)
      throw std::logic_error(std::string(what) +
                             ": negative gap " + std::to_string(g) +
                             " violates weak duality");
    return 0.0;
  }
  if (!std::isfinite(g))
    throw std::logic_error(std::string(what) + ": non-finite gap");
  return g;
}

bool needs_strong_convexity(const constraint_spec& c) {
  switch (c.kind()) {
    case constraint_kind::simplex:
    case constraint_kind::l1_ball:
    case constraint_kind::elastic_ball:
      return true;
    case constraint_kind::box:
      return false;
  }
  return false;
}

}  // namespace

iterate make_iterate(const problem_spec& p, vec x) {
  require(x.size() == p.n_cols(), "make_iterate: x length mismatch");
  require(x.allFinite(), "make_iterate: non-finite x");
  iterate it;
  it.y = p.map_to_image(x);
  it.w = p.objective().gradient(it.y);
  it.primal_value = p.primal_value(x, it.y);
  it.x = std::move(x);
  return it;
}

double duality_gap(const problem_spec& p, const iterate& it) {
  const auto& f = p.objective();
  double primal = f.value(it.y);
  double offset_term =
      p.has_offset() ? it.w.dot(p.y_offset()) : 0.0;
  if (p.constrained()) {
    const constraint_spec& c = p.constraint();
    require(c.contains(it.x), "duality_gap: iterate is infeasible");
    primal += c.linear_value(it.x);
    vec neg_atw = -p.matrix().multiply_transpose(it.w);
    double dual = f.conjugate_value(it.w) + c.conjugate_value(neg_atw);
    return clamp_gap(primal + dual - offset_term, "duality_gap");
  }
  const regularizer_spec& r = p.regularizer();
  primal += r.penalty_value(it.x);
  vec atw = p.matrix().multiply_transpose(it.w);
  double s = r.dual_feasibility_scale(atw);
  vec w_scaled = s == 1.0 ? it.w : vec(s * it.w);
  double dual = f.conjugate_value(w_scaled) + r.conjugate_value(-s * atw);
  if (s != 1.0 && p.has_offset()) offset_term = w_scaled.dot(p.y_offset());
  return clamp_gap(primal + dual - offset_term, "duality_gap");
}

double wolfe_gap(const problem_spec& p, const iterate& it) {
  require(p.constrained(), "wolfe_gap: problem is not constrained");
  const constraint_spec& c = p.constraint();
  require(c.contains(it.x), "wolfe_gap: iterate is infeasible");
  vec direction = p.matrix().multiply_transpose(it.w);
  if (c.has_linear_term()) direction += c.linear_term();
  lmo_point best = c.lmo(direction);
  return clamp_gap(it.x.dot(direction) - best.value, "wolfe_gap");
}

gap_certificate certify(const problem_spec& p, const iterate& it,
                        std::uint64_t at_iterate) {
  const auto& f = p.objective();
  double L = f.smoothness();
  gap_certificate cert;
  cert.at_iterate = at_iterate;
  cert.duality_gap = duality_gap(p, it);
  cert.dual_radius = std::sqrt(2.0 * L * cert.duality_gap);
  if (p.constrained()) {
    cert.wolfe_gap = wolfe_gap(p, it);
    auto mu = f.strong_convexity();
    if (mu) {
      cert.image_radius = std::sqrt(*cert.wolfe_gap / *mu);
      cert.grad_radius = L * std::sqrt(*cert.wolfe_gap / *mu);
    } else if (needs_strong_convexity(p.constraint())) {
      throw rule_unavailable_error(
          "certify: rule family unavailable for this objective "
          "(no strong-convexity constant)");
    }
  }
  return cert;
}

}  // namespace gapscreen
