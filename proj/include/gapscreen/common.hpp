#ifndef GAPSCREEN_COMMON_HPP
#define GAPSCREEN_COMMON_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gapscreen {

using index_t = Eigen::Index;
using vec = Eigen::VectorXd;
using dense_matrix = Eigen::MatrixXd;
using sparse_matrix = Eigen::SparseMatrix<double>;  // column-major

// Dual point w = grad f(Ax) left the domain of f* (or of g* after rescaling).
struct dual_infeasible_error : std::runtime_error {
  explicit dual_infeasible_error(const std::string& what)
      : std::runtime_error(what) {}
};

// A rule family was requested on an objective that lacks the constants it
// needs (typically a missing strong-convexity constant).
struct rule_unavailable_error : std::runtime_error {
  explicit rule_unavailable_error(const std::string& what)
      : std::runtime_error(what) {}
};

inline bool all_finite(const vec& v) { return v.allFinite(); }

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace gapscreen

#endif  // GAPSCREEN_COMMON_HPP
