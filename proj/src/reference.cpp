#include "gapscreen/reference.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gapscreen/rng.hpp"

namespace gapscreen {
namespace reference {

namespace {

// --- local objective formulas (kept separate from the library's own paths)

double f_value(const problem_spec& p, const vec& y) {
  switch (p.objective().kind()) {
    case objective_kind::squared_error:
      return 0.5 * (y - p.objective().target()).squaredNorm();
    case objective_kind::pure_quadratic:
    case objective_kind::linear_quadratic:
      return 0.5 * y.squaredNorm();
    case objective_kind::meb_quadratic:
      return y.squaredNorm();
    case objective_kind::logistic: {
      double s = 0.0;
      for (index_t i = 0; i < y.size(); ++i) {
        double t = y[i];
        s += t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
      }
      return s;
    }
  }
  throw std::logic_error("reference: unknown objective");
}

vec f_grad(const problem_spec& p, const vec& y) {
  switch (p.objective().kind()) {
    case objective_kind::squared_error:
      return y - p.objective().target();
    case objective_kind::pure_quadratic:
    case objective_kind::linear_quadratic:
      return y;
    case objective_kind::meb_quadratic:
      return 2.0 * y;
    case objective_kind::logistic: {
      vec w(y.size());
      for (index_t i = 0; i < y.size(); ++i)
        w[i] = y[i] >= 0 ? 1.0 / (1.0 + std::exp(-y[i]))
                         : std::exp(y[i]) / (1.0 + std::exp(y[i]));
      return w;
    }
  }
  throw std::logic_error("reference: unknown objective");
}

double f_conjugate(const problem_spec& p, const vec& w) {
  switch (p.objective().kind()) {
    case objective_kind::squared_error:
      return 0.5 * w.squaredNorm() + p.objective().target().dot(w);
    case objective_kind::pure_quadratic:
    case objective_kind::linear_quadratic:
      return 0.5 * w.squaredNorm();
    case objective_kind::meb_quadratic:
      return 0.25 * w.squaredNorm();
    case objective_kind::logistic: {
      double s = 0.0;
      for (index_t i = 0; i < w.size(); ++i) {
        double t = std::min(1.0, std::max(0.0, w[i]));
        if (t > 0) s += t * std::log(t);
        if (t < 1) s += (1.0 - t) * std::log(1.0 - t);
      }
      return s;
    }
  }
  throw std::logic_error("reference: unknown objective");
}

double f_curvature(const problem_spec& p) {
  switch (p.objective().kind()) {
    case objective_kind::meb_quadratic:
      return 2.0;
    case objective_kind::logistic:
      return 0.25;
    default:
      return 1.0;
  }
}

// minimum of direction^T z over the constraint set, written independently of
// the geometry module's LMO (the elastic case runs a bisection here, not the
// closed-form segment solve)
double lmo_minimum(const constraint_spec& c, const vec& d) {
  switch (c.kind()) {
    case constraint_kind::simplex:
      return d.minCoeff();
    case constraint_kind::l1_ball:
      return -c.radius() * d.cwiseAbs().maxCoeff();
    case constraint_kind::box: {
      double s = 0.0;
      for (index_t i = 0; i < d.size(); ++i) s += std::min(d[i], 0.0);
      return c.upper() * s;
    }
    case constraint_kind::elastic_ball: {
      double alpha = c.alpha();
      double scale = c.scale();
      if (alpha >= 1.0) return -scale * d.cwiseAbs().maxCoeff();
      double dmax = d.cwiseAbs().maxCoeff();
      if (dmax == 0.0) return 0.0;
      auto constraint_at = [&](double t) {
        double s = 0.0;
        for (index_t i = 0; i < d.size(); ++i) {
          double u = (t * std::abs(d[i]) - alpha) / (1.0 - alpha);
          if (u > 0) s += alpha * u + 0.5 * (1.0 - alpha) * u * u;
        }
        return s;
      };
      double lo = alpha / dmax;
      double hi = 2.0 * lo;
      while (constraint_at(hi) < scale) hi *= 2.0;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (constraint_at(mid) < scale ? lo : hi) = mid;
      }
      double t = 0.5 * (lo + hi);
      double val = 0.0;
      for (index_t i = 0; i < d.size(); ++i) {
        double u = (t * std::abs(d[i]) - alpha) / (1.0 - alpha);
        if (u > 0) val -= std::abs(d[i]) * u;
      }
      return val;
    }
  }
  throw std::logic_error("reference: unknown constraint");
}

double penalty(const regularizer_spec& r, const vec& x) {
  switch (r.kind()) {
    case regularizer_kind::l1:
      return r.lambda() * x.lpNorm<1>();
    case regularizer_kind::elastic_net:
      return r.lambda2() * x.squaredNorm() + r.lambda1() * x.lpNorm<1>();
    case regularizer_kind::elastic_net_unit:
      return 0.5 * (1.0 - r.alpha()) * x.squaredNorm() +
             r.alpha() * x.lpNorm<1>();
    case regularizer_kind::group_l2l1: {
      double s = 0.0;
      for (index_t g = 0; g < r.groups().groups(); ++g) {
        auto [start, len] = r.groups().range(g);
        s += r.group_weights()[g] * x.segment(start, len).norm();
      }
      return s;
    }
  }
  throw std::logic_error("reference: unknown regularizer");
}

}  // namespace

double oracle_gap(const problem_spec& p, const vec& x) {
  require(!p.has_offset(), "oracle_gap: expects a full problem");
  vec y = p.matrix().multiply(x);
  vec w = f_grad(p, y);
  if (p.constrained()) {
    const constraint_spec& c = p.constraint();
    vec d = p.matrix().multiply_transpose(w);
    if (c.has_linear_term()) d += c.linear_term();
    return std::max(0.0, x.dot(d) - lmo_minimum(c, d));
  }
  const regularizer_spec& r = p.regularizer();
  vec atw = p.matrix().multiply_transpose(w);
  double primal = f_value(p, y) + penalty(r, x);
  switch (r.kind()) {
    case regularizer_kind::l1: {
      double m = atw.cwiseAbs().maxCoeff();
      double s = m > r.lambda() ? r.lambda() / m : 1.0;
      return std::max(0.0, primal + f_conjugate(p, s * w));
    }
    case regularizer_kind::elastic_net: {
      if (r.lambda2() == 0.0) {
        double m = atw.cwiseAbs().maxCoeff();
        double s = m > r.lambda1() ? r.lambda1() / m : 1.0;
        return std::max(0.0, primal + f_conjugate(p, s * w));
      }
      double conj = 0.0;
      for (index_t i = 0; i < atw.size(); ++i) {
        double u = std::max(std::abs(atw[i]) - r.lambda1(), 0.0);
        conj += u * u / (4.0 * r.lambda2());
      }
      return std::max(0.0, primal + f_conjugate(p, w) + conj);
    }
    case regularizer_kind::elastic_net_unit: {
      double conj = 0.0;
      for (index_t i = 0; i < atw.size(); ++i) {
        double u = std::max(std::abs(atw[i]) - r.alpha(), 0.0);
        conj += u * u / (2.0 * (1.0 - r.alpha()));
      }
      return std::max(0.0, primal + f_conjugate(p, w) + conj);
    }
    case regularizer_kind::group_l2l1: {
      double s = 1.0;
      for (index_t g = 0; g < r.groups().groups(); ++g) {
        auto [start, len] = r.groups().range(g);
        double norm = atw.segment(start, len).norm();
        if (norm > r.group_weights()[g])
          s = std::min(s, r.group_weights()[g] / norm);
      }
      return std::max(0.0, primal + f_conjugate(p, s * w));
    }
  }
  throw std::logic_error("oracle_gap: unknown regularizer");
}

// ---------------------------------------------------------------------------
// projections

vec project_simplex(const vec& v) {
  index_t n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cssv = 0.0;
  double theta = 0.0;
  index_t rho = 0;
  for (index_t i = 0; i < n; ++i) {
    cssv += u[static_cast<std::size_t>(i)];
    double t = (cssv - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] - t > 0) {
      rho = i;
      theta = t;
    }
  }
  (void)rho;
  vec z(n);
  for (index_t i = 0; i < n; ++i) z[i] = std::max(v[i] - theta, 0.0);
  return z;
}

vec project_box(const vec& v, double upper) {
  return v.cwiseMax(0.0).cwiseMin(upper);
}

vec project_l1(const vec& v, double radius) {
  if (v.lpNorm<1>() <= radius) return v;
  vec a = v.cwiseAbs() / radius;
  vec u = project_simplex(a);
  vec z(v.size());
  for (index_t i = 0; i < v.size(); ++i)
    z[i] = (v[i] >= 0 ? 1.0 : -1.0) * radius * u[i];
  return z;
}

vec project_elastic(const vec& v, double alpha, double scale) {
  if (alpha >= 1.0) return project_l1(v, scale);
  double val = alpha * v.lpNorm<1>() + 0.5 * (1.0 - alpha) * v.squaredNorm();
  if (val <= scale) return v;
  // z_i = soft(v_i, t*alpha) / (1 + t*(1-alpha)); bisect on the multiplier
  auto value_at = [&](double t) {
    double s = 0.0;
    for (index_t i = 0; i < v.size(); ++i) {
      double z = soft_threshold(v[i], t * alpha) / (1.0 + t * (1.0 - alpha));
      s += alpha * std::abs(z) + 0.5 * (1.0 - alpha) * z * z;
    }
    return s;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (value_at(hi) > scale) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (value_at(mid) > scale ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  vec z(v.size());
  for (index_t i = 0; i < v.size(); ++i)
    z[i] = soft_threshold(v[i], t * alpha) / (1.0 + t * (1.0 - alpha));
  return z;
}

// ---------------------------------------------------------------------------
// high-precision solvers

namespace {

vec full_gradient(const problem_spec& p, const vec& x) {
  vec y = p.matrix().multiply(x);
  vec d = p.matrix().multiply_transpose(f_grad(p, y));
  if (p.constrained() && p.constraint().has_linear_term())
    d += p.constraint().linear_term();
  return d;
}

vec project_feasible(const constraint_spec& c, const vec& v) {
  switch (c.kind()) {
    case constraint_kind::simplex:
      return project_simplex(v);
    case constraint_kind::l1_ball:
      return project_l1(v, c.radius());
    case constraint_kind::box:
      return project_box(v, c.upper());
    case constraint_kind::elastic_ball:
      return project_elastic(v, c.alpha(), c.scale());
  }
  throw std::logic_error("reference: unknown constraint");
}

// Equality-constrained QP polish on the simplex face S:
//   min 1/2 u^T H u + c0^T u  s.t.  sum u = 1,  u >= 0 implicitly verified.
// H and c0 are built from the problem restricted to S.
bool simplex_face_polish(const problem_spec& p, const std::vector<index_t>& S,
                         vec& x_out) {
  index_t m = static_cast<index_t>(S.size());
  if (m == 0) return false;
  dense_matrix As(p.n_rows(), m);
  for (index_t k = 0; k < m; ++k) As.col(k) = p.matrix().col(S[k]);
  double h = f_curvature(p);
  dense_matrix H = h * (As.transpose() * As);
  vec c0 = vec::Zero(m);
  if (p.objective().kind() == objective_kind::squared_error)
    c0 -= As.transpose() * p.objective().target();
  if (p.constrained() && p.constraint().has_linear_term())
    for (index_t k = 0; k < m; ++k)
      c0[k] += p.constraint().linear_term()[S[k]];
  dense_matrix K = dense_matrix::Zero(m + 1, m + 1);
  K.topLeftCorner(m, m) = H;
  K.topRightCorner(m, 1).setOnes();
  K.bottomLeftCorner(1, m).setOnes();
  vec rhs(m + 1);
  rhs.head(m) = -c0;
  rhs[m] = 1.0;
  Eigen::FullPivLU<dense_matrix> lu(K);
  if (!lu.isInvertible()) return false;
  vec sol = lu.solve(rhs);
  vec u = sol.head(m);
  if ((u.array() < -1e-11).any()) return false;
  vec x = vec::Zero(p.n_cols());
  double total = 0.0;
  for (index_t k = 0; k < m; ++k) {
    x[S[k]] = std::max(u[k], 0.0);
    total += x[S[k]];
  }
  if (total <= 0) return false;
  x /= total;
  x_out = std::move(x);
  return true;
}

bool box_face_polish(const problem_spec& p, const vec& x_cur, vec& x_out) {
  double C = p.constraint().upper();
  double tol = 1e-7 * std::max(1.0, C);
  std::vector<index_t> free_set;
  vec x = vec::Zero(p.n_cols());
  for (index_t i = 0; i < p.n_cols(); ++i) {
    if (x_cur[i] <= tol) {
      x[i] = 0.0;
    } else if (x_cur[i] >= C - tol) {
      x[i] = C;
    } else {
      free_set.push_back(i);
    }
  }
  if (!free_set.empty()) {
    index_t m = static_cast<index_t>(free_set.size());
    dense_matrix Af(p.n_rows(), m);
    for (index_t k = 0; k < m; ++k) Af.col(k) = p.matrix().col(free_set[k]);
    vec y_fixed = p.matrix().multiply(x);
    double h = f_curvature(p);
    dense_matrix H = h * (Af.transpose() * Af);
    vec c0 = h * (Af.transpose() * y_fixed);
    if (p.objective().kind() == objective_kind::squared_error)
      c0 -= Af.transpose() * p.objective().target();
    if (p.constraint().has_linear_term())
      for (index_t k = 0; k < m; ++k)
        c0[k] += p.constraint().linear_term()[free_set[k]];
    Eigen::FullPivLU<dense_matrix> lu(H);
    if (!lu.isInvertible()) return false;
    vec u = lu.solve(-c0);
    for (index_t k = 0; k < m; ++k) {
      if (u[k] < -1e-11 || u[k] > C + 1e-11) return false;
      x[free_set[k]] = std::min(std::max(u[k], 0.0), C);
    }
  }
  x_out = std::move(x);
  return true;
}

bool l1_face_polish(const problem_spec& p, const vec& x_cur, vec& x_out) {
  double r = p.constraint().radius();
  std::vector<index_t> S;
  std::vector<double> sign;
  for (index_t i = 0; i < p.n_cols(); ++i) {
    if (std::abs(x_cur[i]) > 1e-9 * r) {
      S.push_back(i);
      sign.push_back(x_cur[i] > 0 ? 1.0 : -1.0);
    }
  }
  index_t m = static_cast<index_t>(S.size());
  if (m == 0) return false;
  // substitute x_i = r * sign_i * v_i with v on the unit simplex
  dense_matrix B(p.n_rows(), m);
  for (index_t k = 0; k < m; ++k)
    B.col(k) = r * sign[static_cast<std::size_t>(k)] * p.matrix().col(S[k]);
  double h = f_curvature(p);
  dense_matrix H = h * (B.transpose() * B);
  vec c0 = vec::Zero(m);
  if (p.objective().kind() == objective_kind::squared_error)
    c0 -= B.transpose() * p.objective().target();
  dense_matrix K = dense_matrix::Zero(m + 1, m + 1);
  K.topLeftCorner(m, m) = H;
  K.topRightCorner(m, 1).setOnes();
  K.bottomLeftCorner(1, m).setOnes();
  vec rhs(m + 1);
  rhs.head(m) = -c0;
  rhs[m] = 1.0;
  Eigen::FullPivLU<dense_matrix> lu(K);
  if (!lu.isInvertible()) return false;
  vec v = lu.solve(rhs).head(m);
  if ((v.array() < -1e-11).any()) return false;
  vec x = vec::Zero(p.n_cols());
  double total = v.cwiseMax(0.0).sum();
  if (total <= 0) return false;
  for (index_t k = 0; k < m; ++k)
    x[S[k]] = r * sign[static_cast<std::size_t>(k)] *
              std::max(v[k], 0.0) / total;
  x_out = std::move(x);
  return true;
}

reference_solution solve_constrained(const problem_spec& p, double target_gap,
                                     std::uint64_t budget) {
  const constraint_spec& c = p.constraint();
  double sigma = p.matrix().operator_norm_estimate();
  double step = 1.0 / std::max(f_curvature(p) * sigma * sigma, 1e-12);
  vec x = project_feasible(c, vec::Zero(p.n_cols()));
  if (c.kind() == constraint_kind::simplex)
    x = vec::Constant(p.n_cols(), 1.0 / static_cast<double>(p.n_cols()));

  reference_solution out;
  out.method = "projected_gradient";
  double gap = oracle_gap(p, x);
  std::uint64_t it = 0;
  auto try_polish = [&]() -> bool {
    vec cand;
    bool ok = false;
    switch (c.kind()) {
      case constraint_kind::simplex: {
        std::vector<index_t> S;
        for (index_t i = 0; i < x.size(); ++i)
          if (x[i] > 1e-9) S.push_back(i);
        ok = simplex_face_polish(p, S, cand);
        break;
      }
      case constraint_kind::box:
        ok = box_face_polish(p, x, cand);
        break;
      case constraint_kind::l1_ball:
        ok = l1_face_polish(p, x, cand);
        break;
      case constraint_kind::elastic_ball:
        ok = false;
        break;
    }
    if (!ok || !c.contains(cand)) return false;
    double g = oracle_gap(p, cand);
    if (g <= target_gap) {
      x = std::move(cand);
      gap = g;
      out.method += "+face_polish";
      return true;
    }
    return false;
  };

  while (gap > target_gap) {
    if (it >= budget)
      throw std::runtime_error(
          "solve_reference: budget exhausted before target gap");
    x = project_feasible(c, x - step * full_gradient(p, x));
    ++it;
    if (it % 200 == 0 || it < 8) {
      gap = oracle_gap(p, x);
      if (gap <= target_gap) break;
      if (gap < 1e-4 && try_polish()) break;
    }
  }
  out.x_ref = x;
  out.gap_ref = gap;
  return out;
}

vec apply_prox(const regularizer_spec& r, const vec& v, double step) {
  vec z(v.size());
  switch (r.kind()) {
    case regularizer_kind::l1:
      for (index_t i = 0; i < v.size(); ++i)
        z[i] = soft_threshold(v[i], step * r.lambda());
      return z;
    case regularizer_kind::elastic_net: {
      double scale = 1.0 / (1.0 + 2.0 * step * r.lambda2());
      for (index_t i = 0; i < v.size(); ++i)
        z[i] = scale * soft_threshold(v[i], step * r.lambda1());
      return z;
    }
    case regularizer_kind::elastic_net_unit: {
      double scale = 1.0 / (1.0 + step * (1.0 - r.alpha()));
      for (index_t i = 0; i < v.size(); ++i)
        z[i] = scale * soft_threshold(v[i], step * r.alpha());
      return z;
    }
    case regularizer_kind::group_l2l1: {
      for (index_t g = 0; g < r.groups().groups(); ++g) {
        auto [start, len] = r.groups().range(g);
        double norm = v.segment(start, len).norm();
        double shrink =
            norm > 0
                ? std::max(0.0, 1.0 - step * r.group_weights()[g] / norm)
                : 0.0;
        z.segment(start, len) = shrink * v.segment(start, len);
      }
      return z;
    }
  }
  throw std::logic_error("reference: unknown regularizer");
}

// Newton polish of the penalized problem restricted to the sign/support
// pattern of x. Applies to squared-error and logistic losses.
bool support_newton_polish(const problem_spec& p, vec& x, double target_gap) {
  const regularizer_spec& r = p.regularizer();
  bool grouped = r.kind() == regularizer_kind::group_l2l1;
  std::vector<index_t> S;
  if (grouped) {
    for (index_t g = 0; g < r.groups().groups(); ++g) {
      auto [start, len] = r.groups().range(g);
      if (x.segment(start, len).norm() > 0)
        for (index_t j = start; j < start + len; ++j) S.push_back(j);
    }
  } else {
    for (index_t i = 0; i < x.size(); ++i)
      if (x[i] != 0.0) S.push_back(i);
  }
  index_t m = static_cast<index_t>(S.size());
  if (m == 0) {
    return oracle_gap(p, vec::Zero(p.n_cols())) <= target_gap;
  }
  dense_matrix As(p.n_rows(), m);
  for (index_t k = 0; k < m; ++k) As.col(k) = p.matrix().col(S[k]);
  vec u(m);
  for (index_t k = 0; k < m; ++k) u[k] = x[S[k]];

  auto restricted_value = [&](const vec& uu) {
    vec xx = vec::Zero(p.n_cols());
    for (index_t k = 0; k < m; ++k) xx[S[k]] = uu[k];
    return f_value(p, p.matrix().multiply(xx)) + penalty(r, xx);
  };

  bool logistic = p.objective().kind() == objective_kind::logistic;
  for (int pass = 0; pass < 60; ++pass) {
    vec y = As * u;
    vec g;
    dense_matrix H;
    if (logistic) {
      vec w(y.size()), dd(y.size());
      for (index_t i = 0; i < y.size(); ++i) {
        double s = y[i] >= 0 ? 1.0 / (1.0 + std::exp(-y[i]))
                             : std::exp(y[i]) / (1.0 + std::exp(y[i]));
        w[i] = s;
        dd[i] = s * (1.0 - s);
      }
      g = As.transpose() * w;
      H = As.transpose() * dd.asDiagonal() * As;
    } else {
      g = As.transpose() * (y - p.objective().target());
      H = As.transpose() * As;
    }
    switch (r.kind()) {
      case regularizer_kind::l1:
        for (index_t k = 0; k < m; ++k)
          g[k] += r.lambda() * (u[k] > 0 ? 1.0 : -1.0);
        break;
      case regularizer_kind::elastic_net:
        for (index_t k = 0; k < m; ++k) {
          g[k] += 2.0 * r.lambda2() * u[k] +
                  r.lambda1() * (u[k] > 0 ? 1.0 : -1.0);
          H(k, k) += 2.0 * r.lambda2();
        }
        break;
      case regularizer_kind::elastic_net_unit:
        for (index_t k = 0; k < m; ++k) {
          g[k] += (1.0 - r.alpha()) * u[k] +
                  r.alpha() * (u[k] > 0 ? 1.0 : -1.0);
          H(k, k) += 1.0 - r.alpha();
        }
        break;
      case regularizer_kind::group_l2l1: {
        index_t pos = 0;
        for (index_t g_id = 0; g_id < r.groups().groups(); ++g_id) {
          auto [start, len] = r.groups().range(g_id);
          if (x.segment(start, len).norm() == 0.0) continue;
          vec ug = u.segment(pos, len);
          double nrm = ug.norm();
          if (nrm <= 0) return false;
          double wgt = r.group_weights()[g_id];
          g.segment(pos, len) += wgt * ug / nrm;
          H.block(pos, pos, len, len) +=
              wgt * (dense_matrix::Identity(len, len) / nrm -
                     ug * ug.transpose() / (nrm * nrm * nrm));
          pos += len;
        }
        break;
      }
    }
    Eigen::LDLT<dense_matrix> ldlt(H);
    if (ldlt.info() != Eigen::Success) return false;
    vec du = ldlt.solve(-g);
    if (!du.allFinite()) return false;
    double f0 = restricted_value(u);
    double t = 1.0;
    vec u_next = u + du;
    int halvings = 0;
    while (halvings < 60 && (!u_next.allFinite() ||
                             restricted_value(u_next) > f0 + 1e-14)) {
      t *= 0.5;
      u_next = u + t * du;
      ++halvings;
    }
    if (halvings >= 60) break;
    bool sign_flip = false;
    for (index_t k = 0; k < m && !grouped; ++k)
      if (u[k] * u_next[k] < 0) sign_flip = true;
    u = u_next;
    if (sign_flip) return false;  // support pattern changed, keep iterating
    if (g.lpNorm<Eigen::Infinity>() < 1e-14 || du.norm() < 1e-15) break;
  }
  vec cand = vec::Zero(p.n_cols());
  for (index_t k = 0; k < m; ++k) cand[S[k]] = u[k];
  if (oracle_gap(p, cand) <= target_gap) {
    x = std::move(cand);
    return true;
  }
  return false;
}

reference_solution solve_penalized(const problem_spec& p, double target_gap,
                                   std::uint64_t budget) {
  double sigma = p.matrix().operator_norm_estimate();
  double step = 1.0 / std::max(f_curvature(p) * sigma * sigma, 1e-12);
  vec x = vec::Zero(p.n_cols());
  reference_solution out;
  out.method = "proximal_gradient";
  double gap = oracle_gap(p, x);
  std::uint64_t it = 0;
  while (gap > target_gap) {
    if (it >= budget)
      throw std::runtime_error(
          "solve_reference: budget exhausted before target gap");
    x = apply_prox(p.regularizer(), x - step * full_gradient(p, x), step);
    ++it;
    if (it % 200 == 0 || it < 8) {
      gap = oracle_gap(p, x);
      if (gap <= target_gap) break;
      if (gap < 1e-4 && support_newton_polish(p, x, target_gap)) {
        gap = oracle_gap(p, x);
        out.method += "+newton_polish";
        break;
      }
    }
  }
  out.x_ref = x;
  out.gap_ref = gap;
  return out;
}

}  // namespace

reference_solution solve_reference(const problem_spec& p, double target_gap,
                                   std::uint64_t budget) {
  require(!p.has_offset(), "solve_reference: expects a full problem");
  if (p.constrained()) return solve_constrained(p, target_gap, budget);
  return solve_penalized(p, target_gap, budget);
}

// ---------------------------------------------------------------------------
// minimum enclosing ball (Welzl)

ball circumsphere(const std::vector<vec>& pts) {
  require(!pts.empty(), "circumsphere: no points");
  index_t k = static_cast<index_t>(pts.size());
  if (k == 1) return {pts[0], 0.0};
  const vec& p0 = pts[0];
  dense_matrix M(k - 1, p0.size());
  vec rhs(k - 1);
  for (index_t i = 1; i < k; ++i) {
    vec diff = pts[static_cast<std::size_t>(i)] - p0;
    M.row(i - 1) = diff.transpose();
    rhs[i - 1] = 0.5 * diff.squaredNorm();
  }
  dense_matrix G = M * M.transpose();
  Eigen::FullPivLU<dense_matrix> lu(G);
  if (!lu.isInvertible()) {
    // affinely dependent support; drop the last point but keep coverage
    std::vector<vec> sub(pts.begin(), pts.end() - 1);
    ball b = circumsphere(sub);
    for (const auto& q : pts)
      b.radius = std::max(b.radius, (q - b.center).norm());
    return b;
  }
  vec lambda = lu.solve(rhs);
  vec center = p0 + M.transpose() * lambda;
  double radius = 0.0;
  for (const auto& q : pts) radius = std::max(radius, (q - center).norm());
  return {center, radius};
}

namespace {

ball welzl(std::vector<vec>& pts, std::size_t n, std::vector<vec>& support,
           index_t dim) {
  if (n == 0 || static_cast<index_t>(support.size()) == dim + 1) {
    if (support.empty()) return {vec::Zero(dim), -1.0};
    return circumsphere(support);
  }
  ball b = welzl(pts, n - 1, support, dim);
  const vec& q = pts[n - 1];
  if (b.radius >= 0 && (q - b.center).norm() <= b.radius * (1.0 + 1e-12) + 1e-13)
    return b;
  support.push_back(q);
  ball b2 = welzl(pts, n - 1, support, dim);
  support.pop_back();
  return b2;
}

}  // namespace

ball minimum_enclosing_ball(const column_matrix& points) {
  std::vector<vec> pts;
  pts.reserve(static_cast<std::size_t>(points.cols()));
  for (index_t j = 0; j < points.cols(); ++j) pts.push_back(points.col(j));
  rng r(0x5eedULL, 77);
  for (std::size_t i = pts.size(); i > 1; --i)
    std::swap(pts[i - 1], pts[r.next_below(i)]);
  std::vector<vec> support;
  ball b = welzl(pts, pts.size(), support, points.rows());
  if (b.radius < 0) b = {pts.empty() ? vec() : pts[0], 0.0};
  return b;
}

// ---------------------------------------------------------------------------

double brute_force_conjugate(const std::function<double(double)>& g, double v,
                             double lo, double hi, double step) {
  require(hi > lo && step > 0, "brute_force_conjugate: bad grid");
  double best = -std::numeric_limits<double>::infinity();
  double best_u = lo;
  for (double u = lo; u <= hi + 0.5 * step; u += step) {
    double val = v * u - g(u);
    if (val > best) {
      best = val;
      best_u = u;
    }
  }
  if (best_u <= lo + 0.5 * step || best_u >= hi - 0.5 * step)
    throw std::runtime_error(
        "brute_force_conjugate: maximizer on grid boundary; enlarge grid");
  return best;
}

std::vector<safety_violation> check_safety(
    const std::vector<rule_report>& reports, const vec& x_ref, double upper,
    double tol) {
  std::vector<safety_violation> out;
  for (const auto& rep : reports) {
    for (const auto& e : rep.newly_fixed) {
      require(e.index >= 0 && e.index < x_ref.size(),
              "check_safety: fixed index outside reference solution");
      double v = x_ref[e.index];
      bool ok = e.status == var_status::fixed_zero
                    ? std::abs(v) <= tol
                    : std::abs(v - upper) <= tol;
      if (!ok) out.push_back({rep.iter, e.index, rep.rule_id, v});
    }
  }
  return out;
}

}  // namespace reference
}  // namespace gapscreen
