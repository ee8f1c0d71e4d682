#ifndef GAPSCREEN_REFERENCE_HPP
#define GAPSCREEN_REFERENCE_HPP

#include <functional>
#include <string>
#include <vector>

#include "gapscreen/problem.hpp"
#include "gapscreen/screening.hpp"

namespace gapscreen {
namespace reference {

// Independent high-precision and brute-force computations the acceptance
// tests audit the toolkit against. None of these call the screening rules,
// and the per-family gap formulas are written out locally on purpose.

struct reference_solution {
  vec x_ref;
  double gap_ref = 0.0;
  std::string method;
};

// Solves a desk-scale problem to the target duality gap (default 1e-12);
// throws if the iteration budget runs out first.
reference_solution solve_reference(const problem_spec& p,
                                   double target_gap = 1e-12,
                                   std::uint64_t budget = 4000000);

// gap of the given point, computed with the oracle's own formulas
double oracle_gap(const problem_spec& p, const vec& x);

// Euclidean projections used by the oracle solvers and by closed-form tests.
vec project_simplex(const vec& v);
vec project_box(const vec& v, double upper);
vec project_l1(const vec& v, double radius);
vec project_elastic(const vec& v, double alpha, double scale);

struct ball {
  vec center;
  double radius = 0.0;
};

// exact minimum enclosing ball (Welzl); points are the columns of `points`
ball minimum_enclosing_ball(const column_matrix& points);
// smallest ball through all of the given points (<= d+1 of them)
ball circumsphere(const std::vector<vec>& pts);

// max over the grid of v*u - g(u); throws when the maximizer sits on the
// grid boundary (grid too small to bracket it)
double brute_force_conjugate(const std::function<double(double)>& g, double v,
                             double lo, double hi, double step);

struct safety_violation {
  std::uint64_t iter = 0;
  index_t index = 0;
  std::string rule_id;
  double x_ref_value = 0.0;
};

// Every fixed index in the reports must match the reference solution within
// `tol`: |x_ref_i| <= tol for fixed_zero, |x_ref_i - upper| <= tol for
// fixed_upper. Returns the offending entries (empty means safe).
std::vector<safety_violation> check_safety(
    const std::vector<rule_report>& reports, const vec& x_ref, double upper,
    double tol = 1e-8);

}  // namespace reference
}  // namespace gapscreen

#endif  // GAPSCREEN_REFERENCE_HPP
