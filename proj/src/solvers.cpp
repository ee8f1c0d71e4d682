#include "gapscreen/solvers.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace gapscreen {

namespace {

index_t argmin_first(const vec& v) {
  index_t best = 0;
  for (index_t i = 1; i < v.size(); ++i)
    if (v[i] < v[best]) best = i;
  return best;
}

double upper_bound_of(const problem_spec& p) {
  if (p.constrained() && p.constraint().kind() == constraint_kind::box)
    return p.constraint().upper();
  return 0.0;
}

// backtracking step for the non-quadratic objectives
double armijo_step(const problem_spec& p, const vec& y, const vec& delta_y,
                   double linear_change, double dphi, double gamma_max) {
  const auto& f = p.objective();
  double f0 = f.value(y);
  double gamma = gamma_max;
  for (int halvings = 0; halvings < 60; ++halvings) {
    double trial = f.value(y + gamma * delta_y) + gamma * linear_change;
    if (trial <= f0 + 1e-4 * gamma * dphi) return gamma;
    gamma *= 0.5;
  }
  return gamma;
}

bool is_quadratic(objective_kind k) {
  return k == objective_kind::squared_error ||
         k == objective_kind::pure_quadratic ||
         k == objective_kind::linear_quadratic ||
         k == objective_kind::meb_quadratic;
}

}  // namespace

void solve_trace::write_csv(std::ostream& os, bool include_elapsed) const {
  os << "iter,elapsed_ms,primal,gap,wolfe_gap,n_active,n_fixed_zero,"
        "n_fixed_upper\n";
  char buf[160];
  for (const auto& r : rows) {
    os << r.iter << ',';
    if (include_elapsed) {
      std::snprintf(buf, sizeof(buf), "%.3f", r.elapsed_ms);
      os << buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,", r.primal, r.gap);
    os << buf;
    if (r.wolfe_gap) {
      std::snprintf(buf, sizeof(buf), "%.17g", *r.wolfe_gap);
      os << buf;
    }
    os << ',' << r.n_active << ',' << r.n_fixed_zero << ','
       << r.n_fixed_upper << '\n';
  }
}

solve_result dynamic_screening_driver(const problem_spec& full,
                                      rule_kind rule,
                                      const solver_config& cfg,
                                      solver_callbacks callbacks, vec x0) {
  require(cfg.gap_tol > 0, "solver_config: gap_tol must be positive");
  require(cfg.screening_period >= 1,
          "solver_config: screening_period must be >= 1");
  validate_rule(rule, full);

  auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  screen_mask mask(full.n_cols(), full.n_rows(), upper_bound_of(full));
  compressed_problem view = apply_mask(full, mask);
  vec x = std::move(x0);
  require(x.size() == full.n_cols(), "driver: x0 length mismatch");

  solve_trace trace;
  std::vector<rule_report> reports;
  bool all_fixed = false;

  // one certificate refresh: trace row, rules, mask commit, recompression
  auto event = [&](std::uint64_t iter, bool run_rules) -> bool {
    const problem_spec& p = *view.problem;
    iterate it = make_iterate(p, x);
    gap_certificate cert = certify(p, it, iter);
    trace.rows.push_back({iter, elapsed_ms(), it.primal_value,
                          cert.duality_gap, cert.wolfe_gap, mask.n_active(),
                          mask.n_fixed_zero(), mask.n_fixed_upper()});
    if (callbacks.observer) callbacks.observer(p, it, cert, iter);
    double stop_gap =
        p.constrained() ? *cert.wolfe_gap : cert.duality_gap;
    if (run_rules && cfg.screening_enabled && rule != rule_kind::none) {
      screen_context ctx{p,    it,   cert,           mask,
                         view.to_original, cfg.safety_slack, iter};
      rule_report rep = run_rule(rule, ctx);
      if (!rep.newly_fixed.empty()) {
        mask.commit(rep, full.matrix());
        reports.push_back(std::move(rep));
        if (mask.n_active() == 0) {
          all_fixed = true;
          return true;
        }
        const auto& old_map = view.to_original;
        std::vector<index_t> kept;
        kept.reserve(old_map.size());
        for (index_t c = 0; c < static_cast<index_t>(old_map.size()); ++c)
          if (mask.status(old_map[c]) == var_status::active)
            kept.push_back(c);
        vec x_new(static_cast<index_t>(kept.size()));
        for (index_t c = 0; c < x_new.size(); ++c) x_new[c] = x[kept[c]];
        view = apply_mask(full, mask);
        x = std::move(x_new);
        callbacks.rebuild(*view.problem, kept, x);
      }
    }
    return stop_gap <= cfg.gap_tol;
  };

  bool done = event(0, true);
  std::uint64_t k = 0;
  while (!done && !all_fixed && k < cfg.max_iter) {
    callbacks.step(*view.problem, x);
    ++k;
    bool rules_due = (k % cfg.screening_period == 0);
    bool trace_due = rules_due || (k % 25 == 0);
    bool cheap_stop = false;
    if (callbacks.cheap_gap) {
      auto g = callbacks.cheap_gap();
      cheap_stop = g.has_value() && *g <= cfg.gap_tol;
    }
    if (trace_due || cheap_stop || k == cfg.max_iter)
      done = event(k, rules_due || cheap_stop || k == cfg.max_iter);
  }
  if (!all_fixed && (trace.rows.empty() || trace.rows.back().iter != k))
    event(k, true);

  solve_result res;
  res.iterations = k;
  res.elapsed_ms = elapsed_ms();
  res.x = all_fixed ? mask.embed(vec(0)) : mask.embed(x);
  iterate fit = make_iterate(full, res.x);
  res.primal = fit.primal_value;
  res.gap = duality_gap(full, fit);
  if (full.constrained()) res.wolfe_gap = wolfe_gap(full, fit);
  res.trace = std::move(trace);
  res.mask = std::move(mask);
  res.reports = std::move(reports);
  return res;
}

// ---------------------------------------------------------------------------
// pairwise Frank-Wolfe

namespace {

struct fw_simplex_state {
  vec y;
  double wolfe = std::numeric_limits<double>::infinity();
  bool have_wolfe = false;
};

solve_result fw_simplex(const problem_spec& p, rule_kind rule,
                        const solver_config& cfg, event_observer observer) {
  auto st = std::make_shared<fw_simplex_state>();
  // start at the vertex the initial linearization picks
  vec d0 = p.matrix().multiply_transpose(
      p.objective().gradient(vec::Zero(p.n_rows())));
  if (p.constraint().has_linear_term()) d0 += p.constraint().linear_term();
  vec x0 = vec::Zero(p.n_cols());
  x0[argmin_first(d0)] = 1.0;
  st->y = p.map_to_image(x0);

  solver_callbacks cb;
  cb.step = [st](const problem_spec& view, vec& x) {
    const auto& f = view.objective();
    const column_matrix& A = view.matrix();
    vec w = f.gradient(st->y);
    vec d = A.multiply_transpose(w);
    if (view.constraint().has_linear_term())
      d += view.constraint().linear_term();
    index_t s = argmin_first(d);
    index_t v = -1;
    for (index_t j = 0; j < x.size(); ++j)
      if (x[j] > 0 && (v < 0 || d[j] > d[v])) v = j;
    st->wolfe = x.dot(d) - d[s];
    st->have_wolfe = true;
    if (v < 0 || s == v || st->wolfe <= 0) return;
    vec delta = A.col(s) - A.col(v);
    double dphi = d[s] - d[v];
    double gamma_max = x[v];
    double gamma;
    if (is_quadratic(f.kind())) {
      double denom = f.quadratic_curvature() * delta.squaredNorm();
      gamma = denom > 0 ? std::min(gamma_max, -dphi / denom) : gamma_max;
    } else {
      double lq = view.constraint().has_linear_term()
                      ? view.constraint().linear_term()[s] -
                            view.constraint().linear_term()[v]
                      : 0.0;
      gamma = armijo_step(view, st->y, delta, lq, dphi, gamma_max);
    }
    x[s] += gamma;
    x[v] -= gamma;
    if (x[v] < 0) x[v] = 0.0;
    st->y += gamma * delta;
  };
  cb.rebuild = [st](const problem_spec& view, const std::vector<index_t>&,
                    vec& x) {
    double total = x.sum();
    require(total > 1e-15, "frank_wolfe: screening removed all simplex mass");
    x /= total;
    st->y = view.map_to_image(x);
    st->have_wolfe = false;
  };
  cb.cheap_gap = [st]() -> std::optional<double> {
    if (!st->have_wolfe) return std::nullopt;
    return st->wolfe;
  };
  cb.observer = std::move(observer);
  return dynamic_screening_driver(p, rule, cfg, std::move(cb), std::move(x0));
}

// Native L1-ball variant: x is kept directly while the two signed atom
// weights per variable carry the pairwise bookkeeping (the implicit
// barycentric lift, never materialized).
struct fw_l1_state {
  vec pos, neg;
  vec y;
  double wolfe = std::numeric_limits<double>::infinity();
  bool have_wolfe = false;
};

solve_result fw_l1(const problem_spec& p, rule_kind rule,
                   const solver_config& cfg, event_observer observer) {
  auto st = std::make_shared<fw_l1_state>();
  double r = p.constraint().radius();
  vec d0 = p.matrix().multiply_transpose(
      p.objective().gradient(vec::Zero(p.n_rows())));
  index_t j0 = 0;
  for (index_t j = 1; j < d0.size(); ++j)
    if (std::abs(d0[j]) > std::abs(d0[j0])) j0 = j;
  double sign0 = d0[j0] > 0 ? -1.0 : 1.0;
  vec x0 = vec::Zero(p.n_cols());
  x0[j0] = sign0 * r;
  st->pos = vec::Zero(p.n_cols());
  st->neg = vec::Zero(p.n_cols());
  (sign0 > 0 ? st->pos : st->neg)[j0] = 1.0;
  st->y = p.map_to_image(x0);

  solver_callbacks cb;
  cb.step = [st](const problem_spec& view, vec& x) {
    const auto& f = view.objective();
    const column_matrix& A = view.matrix();
    double radius = view.constraint().radius();
    vec w = f.gradient(st->y);
    vec d = A.multiply_transpose(w);
    index_t js = 0;
    for (index_t j = 1; j < d.size(); ++j)
      if (std::abs(d[j]) > std::abs(d[js])) js = j;
    double s_sign = d[js] > 0 ? -1.0 : 1.0;
    double s_value = s_sign * radius * d[js];
    // away atom: the weighted signed atom with the largest inner product
    index_t jv = -1;
    double v_sign = 1.0;
    double v_value = -std::numeric_limits<double>::infinity();
    for (index_t j = 0; j < d.size(); ++j) {
      if (st->pos[j] > 0 && radius * d[j] > v_value) {
        v_value = radius * d[j];
        jv = j;
        v_sign = 1.0;
      }
      if (st->neg[j] > 0 && -radius * d[j] > v_value) {
        v_value = -radius * d[j];
        jv = j;
        v_sign = -1.0;
      }
    }
    st->wolfe = x.dot(d) + radius * std::abs(d[js]);
    st->have_wolfe = true;
    if (jv < 0 || st->wolfe <= 0) return;
    if (jv == js && v_sign == s_sign) return;
    vec delta = s_sign * radius * A.col(js) - v_sign * radius * A.col(jv);
    double dphi = s_value - v_value;
    double gamma_max = (v_sign > 0 ? st->pos : st->neg)[jv];
    double gamma;
    if (is_quadratic(f.kind())) {
      double denom = f.quadratic_curvature() * delta.squaredNorm();
      gamma = denom > 0 ? std::min(gamma_max, -dphi / denom) : gamma_max;
    } else {
      gamma = armijo_step(view, st->y, delta, 0.0, dphi, gamma_max);
    }
    (s_sign > 0 ? st->pos : st->neg)[js] += gamma;
    (v_sign > 0 ? st->pos : st->neg)[jv] -= gamma;
    x[js] = radius * (st->pos[js] - st->neg[js]);
    x[jv] = radius * (st->pos[jv] - st->neg[jv]);
    st->y += gamma * delta;
  };
  cb.rebuild = [st](const problem_spec& view, const std::vector<index_t>& kept,
                    vec& x) {
    vec pos(static_cast<index_t>(kept.size()));
    vec neg(static_cast<index_t>(kept.size()));
    for (index_t c = 0; c < pos.size(); ++c) {
      pos[c] = st->pos[kept[c]];
      neg[c] = st->neg[kept[c]];
    }
    double total = pos.sum() + neg.sum();
    if (total > 1e-15) {
      pos /= total;
      neg /= total;
    } else {
      // degenerate: restart from the center of the atom simplex
      double u = 1.0 / static_cast<double>(2 * pos.size());
      pos.setConstant(u);
      neg.setConstant(u);
    }
    st->pos = std::move(pos);
    st->neg = std::move(neg);
    double radius = view.constraint().radius();
    for (index_t c = 0; c < x.size(); ++c)
      x[c] = radius * (st->pos[c] - st->neg[c]);
    st->y = view.map_to_image(x);
    st->have_wolfe = false;
  };
  cb.cheap_gap = [st]() -> std::optional<double> {
    if (!st->have_wolfe) return std::nullopt;
    return st->wolfe;
  };
  cb.observer = std::move(observer);
  return dynamic_screening_driver(p, rule, cfg, std::move(cb), std::move(x0));
}

// Classic Frank-Wolfe with line search for the non-polytope sets (elastic
// ball) and for box problems when requested; pairwise mass bookkeeping needs
// a finite atom dictionary, which these sets do not have.
struct fw_classic_state {
  vec y;
  double wolfe = std::numeric_limits<double>::infinity();
  bool have_wolfe = false;
};

solve_result fw_classic(const problem_spec& p, rule_kind rule,
                        const solver_config& cfg, event_observer observer) {
  auto st = std::make_shared<fw_classic_state>();
  vec d0 = p.matrix().multiply_transpose(
      p.objective().gradient(vec::Zero(p.n_rows())));
  if (p.constraint().has_linear_term()) d0 += p.constraint().linear_term();
  vec x0 = p.constraint().lmo(d0).to_dense(p.n_cols());
  st->y = p.map_to_image(x0);

  solver_callbacks cb;
  cb.step = [st](const problem_spec& view, vec& x) {
    const auto& f = view.objective();
    const column_matrix& A = view.matrix();
    vec w = f.gradient(st->y);
    vec d = A.multiply_transpose(w);
    if (view.constraint().has_linear_term())
      d += view.constraint().linear_term();
    lmo_point lp = view.constraint().lmo(d);
    st->wolfe = x.dot(d) - lp.value;
    st->have_wolfe = true;
    if (st->wolfe <= 0) return;
    vec delta_x = lp.to_dense(x.size()) - x;
    vec delta_y = A.multiply(delta_x);
    double dphi = -st->wolfe;
    double gamma;
    if (is_quadratic(f.kind())) {
      double denom = f.quadratic_curvature() * delta_y.squaredNorm();
      gamma = denom > 0 ? std::min(1.0, -dphi / denom) : 1.0;
    } else {
      double lq = view.constraint().has_linear_term()
                      ? view.constraint().linear_term().dot(delta_x)
                      : 0.0;
      gamma = armijo_step(view, st->y, delta_y, lq, dphi, 1.0);
    }
    x += gamma * delta_x;
    st->y += gamma * delta_y;
  };
  cb.rebuild = [st](const problem_spec& view, const std::vector<index_t>&,
                    vec& x) {
    st->y = view.map_to_image(x);
    st->have_wolfe = false;
  };
  cb.cheap_gap = [st]() -> std::optional<double> {
    if (!st->have_wolfe) return std::nullopt;
    return st->wolfe;
  };
  cb.observer = std::move(observer);
  return dynamic_screening_driver(p, rule, cfg, std::move(cb), std::move(x0));
}

}  // namespace

solve_result pairwise_frank_wolfe(const problem_spec& p, rule_kind rule,
                                  const solver_config& cfg,
                                  event_observer observer) {
  require(p.constrained(), "pairwise_frank_wolfe: problem is not constrained");
  switch (p.constraint().kind()) {
    case constraint_kind::simplex:
      return fw_simplex(p, rule, cfg, std::move(observer));
    case constraint_kind::l1_ball:
      return fw_l1(p, rule, cfg, std::move(observer));
    case constraint_kind::elastic_ball:
    case constraint_kind::box:
      return fw_classic(p, rule, cfg, std::move(observer));
  }
  throw std::logic_error("pairwise_frank_wolfe: unknown constraint");
}

// ---------------------------------------------------------------------------
// proximal gradient

solve_result proximal_gradient(const problem_spec& p, rule_kind rule,
                               const solver_config& cfg,
                               event_observer observer) {
  require(!p.constrained(),
          "proximal_gradient: expects a penalized problem");
  struct state {
    double step = 0.0;
  };
  auto st = std::make_shared<state>();
  auto refresh_step = [st](const problem_spec& view) {
    double sigma = view.matrix().operator_norm_estimate();
    double lip =
        std::max(view.objective().smoothness() * sigma * sigma, 1e-12);
    st->step = 1.0 / lip;
  };
  refresh_step(p);

  solver_callbacks cb;
  cb.step = [st](const problem_spec& view, vec& x) {
    vec y = view.map_to_image(x);
    vec grad = view.matrix().multiply_transpose(view.objective().gradient(y));
    x = view.regularizer().prox(x - st->step * grad, st->step);
  };
  cb.rebuild = [st, refresh_step](const problem_spec& view,
                                  const std::vector<index_t>&, vec&) {
    refresh_step(view);
  };
  cb.cheap_gap = nullptr;
  cb.observer = std::move(observer);
  return dynamic_screening_driver(p, rule, cfg, std::move(cb),
                                  vec::Zero(p.n_cols()));
}

// ---------------------------------------------------------------------------
// cyclic coordinate descent on a box

solve_result coordinate_descent_box(const problem_spec& p, rule_kind rule,
                                    const solver_config& cfg,
                                    event_observer observer) {
  require(p.constrained() && p.constraint().kind() == constraint_kind::box,
          "coordinate_descent_box: expects a box constraint");
  auto kind = p.objective().kind();
  require(is_quadratic(kind),
          "coordinate_descent_box: objective must be quadratic in Ax");

  struct state {
    vec y;
    vec hdiag;
    vec atb;  // A^T b for the squared-error case
  };
  auto st = std::make_shared<state>();
  auto refresh = [st](const problem_spec& view, const vec& x) {
    st->y = view.map_to_image(x);
    const column_matrix& A = view.matrix();
    double curv = view.objective().quadratic_curvature();
    st->hdiag = curv * A.col_norms().cwiseProduct(A.col_norms());
    if (view.objective().kind() == objective_kind::squared_error)
      st->atb = A.multiply_transpose(view.objective().target());
    else
      st->atb = vec::Zero(A.cols());
  };
  refresh(p, vec::Zero(p.n_cols()));

  solver_callbacks cb;
  cb.step = [st](const problem_spec& view, vec& x) {
    const column_matrix& A = view.matrix();
    const constraint_spec& c = view.constraint();
    double C = c.upper();
    double curv = view.objective().quadratic_curvature();
    bool sq = view.objective().kind() == objective_kind::squared_error;
    for (index_t j = 0; j < x.size(); ++j) {
      double g = curv * A.col_dot(j, st->y) - (sq ? st->atb[j] : 0.0);
      if (c.has_linear_term()) g += c.linear_term()[j];
      double h = st->hdiag[j];
      double x_new;
      if (h > 0) {
        x_new = std::min(std::max(x[j] - g / h, 0.0), C);
      } else {
        x_new = g > 0 ? 0.0 : (g < 0 ? C : x[j]);
      }
      double delta = x_new - x[j];
      if (delta != 0.0) {
        A.add_col_to(j, delta, st->y);
        x[j] = x_new;
      }
    }
  };
  cb.rebuild = [st, refresh](const problem_spec& view,
                             const std::vector<index_t>&, vec& x) {
    refresh(view, x);
  };
  cb.cheap_gap = nullptr;
  cb.observer = std::move(observer);
  return dynamic_screening_driver(p, rule, cfg, std::move(cb),
                                  vec::Zero(p.n_cols()));
}

solve_result solve(const problem_spec& p, rule_kind rule,
                   const solver_config& cfg, event_observer observer) {
  switch (cfg.algorithm) {
    case algorithm_kind::pairwise_frank_wolfe:
      return pairwise_frank_wolfe(p, rule, cfg, std::move(observer));
    case algorithm_kind::proximal_gradient:
      return proximal_gradient(p, rule, cfg, std::move(observer));
    case algorithm_kind::coordinate_descent_box:
      return coordinate_descent_box(p, rule, cfg, std::move(observer));
  }
  throw std::logic_error("solve: unknown algorithm");
}

}  // namespace gapscreen
