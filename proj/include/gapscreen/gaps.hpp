#ifndef GAPSCREEN_GAPS_HPP
#define GAPSCREEN_GAPS_HPP

#include <cstdint>
#include <optional>

#include "gapscreen/problem.hpp"

namespace gapscreen {

// One primal point with its cached image y = Ax (+offset) and mapped dual
// point w = grad f(y).
struct iterate {
  vec x;
  vec y;
  vec w;
  double primal_value = 0.0;
};

iterate make_iterate(const problem_spec& p, vec x);

// Certified safe knowledge extracted from one iterate: the duality gap, the
// Wolfe gap when the problem is constrained, and the radii bounding how far
// w* and Ax* can be from the current mapped pair.
struct gap_certificate {
  double duality_gap = 0.0;
  std::optional<double> wolfe_gap;
  double dual_radius = 0.0;                // bounds ||w - w*||
  std::optional<double> image_radius;      // bounds ||Ax - Ax*||
  std::optional<double> grad_radius;       // bounds ||grad f(Ax) - grad f(Ax*)||
  std::uint64_t at_iterate = 0;
};

// f(Ax) + g(x) + f*(w~) + g*(-A^T w~) with w~ the rescaled dual point for
// norm penalties. Tiny negative values from rounding are clamped to zero.
double duality_gap(const problem_spec& p, const iterate& it);

// max_{z in C} (x - z)^T (A^T w + q); requires a feasible iterate
double wolfe_gap(const problem_spec& p, const iterate& it);

gap_certificate certify(const problem_spec& p, const iterate& it,
                        std::uint64_t at_iterate = 0);

}  // namespace gapscreen

#endif  // GAPSCREEN_GAPS_HPP
