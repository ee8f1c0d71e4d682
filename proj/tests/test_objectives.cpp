#include <doctest.h>

#include <cmath>

#include "gapscreen/objectives.hpp"
#include "gapscreen/rng.hpp"

using namespace gapscreen;

namespace {

std::vector<smooth_objective> all_kinds(index_t d, rng& gen) {
  return {smooth_objective::squared_error(gen.normal_vector(d)),
          smooth_objective::pure_quadratic(d),
          smooth_objective::meb_quadratic(d),
          smooth_objective::linear_quadratic(d),
          smooth_objective::logistic(d)};
}

}  // namespace

TEST_CASE("values at pinned points") {
  vec b(2);
  b << 1, 0;
  auto sq = smooth_objective::squared_error(b);
  CHECK(sq.value(b) == 0.0);

  auto lg = smooth_objective::logistic(3);
  CHECK(lg.value(vec::Zero(3)) == doctest::Approx(3.0 * std::log(2.0)));

  auto pq = smooth_objective::pure_quadratic(2);
  vec y(2);
  y << 3, 4;
  CHECK(pq.value(y) == doctest::Approx(12.5));
}

TEST_CASE("gradients at pinned points") {
  vec b(4);
  b << 1, -2, 0.5, 3;
  auto sq = smooth_objective::squared_error(b);
  CHECK(sq.gradient(b).norm() == 0.0);

  auto lg = smooth_objective::logistic(2);
  CHECK(lg.gradient(vec::Zero(2))[0] == doctest::Approx(0.5));

  auto pq = smooth_objective::pure_quadratic(3);
  vec y(3);
  y << 1, 2, 3;
  CHECK(pq.gradient(y).isApprox(y));
}

TEST_CASE("conjugates at pinned points") {
  vec b(2);
  b << 0.5, -1;
  auto sq = smooth_objective::squared_error(b);
  CHECK(sq.conjugate_value(vec::Zero(2)) == 0.0);

  auto pq = smooth_objective::pure_quadratic(2);
  vec w(2);
  w << 3, 4;
  CHECK(pq.conjugate_value(w) == doctest::Approx(12.5));

  auto lg = smooth_objective::logistic(2);
  vec boundary(2);
  boundary << 0.0, 1.0;  // 0 log 0 = 0 closure on both ends
  CHECK(lg.conjugate_value(boundary) == 0.0);
  vec outside(2);
  outside << -0.1, 0.5;
  CHECK_THROWS_AS(lg.conjugate_value(outside), dual_infeasible_error);
}

TEST_CASE("smoothness and strong convexity constants") {
  rng gen(1);
  auto sq = smooth_objective::squared_error(gen.normal_vector(3));
  CHECK(sq.smoothness() == 1.0);
  CHECK(sq.strong_convexity() == 1.0);

  auto meb = smooth_objective::meb_quadratic(3);
  CHECK(meb.smoothness() == 2.0);
  CHECK(meb.strong_convexity() == 2.0);

  auto lg = smooth_objective::logistic(3);
  CHECK(lg.smoothness() == 1.0);
  CHECK_FALSE(lg.strong_convexity().has_value());
}

TEST_CASE("central-difference gradient check, all kinds") {
  rng gen(7);
  index_t d = 6;
  for (auto& f : all_kinds(d, gen)) {
    for (int t = 0; t < 20; ++t) {
      vec y = gen.normal_vector(d);
      vec g = f.gradient(y);
      for (index_t i = 0; i < d; ++i) {
        double h = 1e-5;
        vec yp = y, ym = y;
        yp[i] += h;
        ym[i] -= h;
        double fd = (f.value(yp) - f.value(ym)) / (2 * h);
        double scale = std::max({1.0, std::abs(g[i]), std::abs(fd)});
        CHECK(std::abs(fd - g[i]) / scale <= 1e-5);
      }
    }
  }
}

TEST_CASE("smoothness certificate over random pairs") {
  rng gen(11);
  index_t d = 8;
  for (auto& f : all_kinds(d, gen)) {
    double L = f.smoothness();
    for (int t = 0; t < 100; ++t) {
      vec y1 = gen.normal_vector(d);
      vec y2 = gen.normal_vector(d);
      double lhs = (f.gradient(y1) - f.gradient(y2)).norm();
      CHECK(lhs <= L * (y1 - y2).norm() * (1.0 + 1e-12) + 1e-12);
    }
  }
}

TEST_CASE("strong-convexity certificate where mu is present") {
  rng gen(13);
  index_t d = 8;
  for (auto& f : all_kinds(d, gen)) {
    auto mu = f.strong_convexity();
    if (!mu) continue;
    for (int t = 0; t < 100; ++t) {
      vec y1 = gen.normal_vector(d);
      vec y2 = gen.normal_vector(d);
      double lhs = (y1 - y2).dot(f.gradient(y1) - f.gradient(y2));
      CHECK(lhs >= *mu * (y1 - y2).squaredNorm() * (1.0 - 1e-12) - 1e-12);
    }
  }
}

TEST_CASE("Fenchel-Young equality at mapped dual points") {
  rng gen(17);
  index_t d = 7;
  for (auto& f : all_kinds(d, gen)) {
    for (int t = 0; t < 25; ++t) {
      vec y = gen.normal_vector(d);
      vec w = f.gradient(y);
      double lhs = f.value(y) + f.conjugate_value(w);
      CHECK(std::abs(lhs - w.dot(y)) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("non-finite input is rejected") {
  auto pq = smooth_objective::pure_quadratic(2);
  vec bad(2);
  bad << 1.0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(pq.value(bad), std::invalid_argument);
  CHECK_THROWS_AS(pq.gradient(bad), std::invalid_argument);
}
