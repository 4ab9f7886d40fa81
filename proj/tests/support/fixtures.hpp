#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "symcap/polytope.hpp"
#include "symcap/random.hpp"
#include "symcap/symplectic.hpp"

namespace symcap::testing {

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

/// [-1, 1]^2 with facets labelled (1,0), (0,1), (-1,0), (0,-1).
inline Polytope square() {
  return Polytope::from_halfspaces(
      {{vec({1, 0}), 1}, {vec({0, 1}), 1}, {vec({-1, 0}), 1}, {vec({0, -1}), 1}}, 2);
}

/// Part of the square above the diagonal, {x <= y}.
inline Polytope triangle_p1() {
  return Polytope::from_vertices({vec({-1, -1}), vec({-1, 1}), vec({1, 1})}, 2);
}

/// Part of the square below the diagonal, {x >= y}.
inline Polytope triangle_p2() {
  return Polytope::from_vertices({vec({-1, -1}), vec({1, -1}), vec({1, 1})}, 2);
}

/// square n {x >= t}
inline Polytope slab_right(double t) {
  return Polytope::from_halfspaces(
      {{vec({1, 0}), 1}, {vec({0, 1}), 1}, {vec({-1, 0}), -t}, {vec({0, -1}), 1}}, 2);
}

/// square n {x <= t}
inline Polytope slab_left(double t) {
  return Polytope::from_halfspaces(
      {{vec({1, 0}), t}, {vec({0, 1}), 1}, {vec({-1, 0}), 1}, {vec({0, -1}), 1}}, 2);
}

inline SymplecticMatrix psi_minus_identity() {
  return SymplecticMatrix::validate(-Mat::Identity(2, 2));
}

inline SymplecticMatrix psi_rotation() { return SymplecticMatrix::validate(standard_J(2)); }

/// Convex polygon with `sides` corners on a sheared ellipse. A minimum
/// angular gap keeps every point a genuine corner.
inline Polytope random_polygon(Rng& rng, int sides) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double gap = 0.35 * two_pi / sides;
  std::vector<double> angles;
  while (static_cast<int>(angles.size()) < sides) {
    const double a = rng.uniform(0.0, two_pi);
    bool ok = true;
    for (double b : angles) {
      const double d = std::abs(a - b);
      ok = ok && std::min(d, two_pi - d) > gap;
    }
    if (ok) angles.push_back(a);
  }
  const double rx = rng.uniform(0.6, 1.6);
  const double ry = rng.uniform(0.6, 1.6);
  const double shear = rng.uniform(-0.5, 0.5);
  const double cx = rng.uniform(-0.5, 0.5);
  const double cy = rng.uniform(-0.3, 0.3);
  std::vector<Vec> pts;
  for (double a : angles) {
    const double y = ry * std::sin(a);
    pts.push_back(vec({cx + rx * std::cos(a) + shear * y, cy + y}));
  }
  return Polytope::from_vertices(pts, 2);
}

/// True when the interior of a planar polytope meets the q-axis.
inline bool meets_q_axis(const Polytope& p, const Tolerances& tol = {}) {
  Mat axis(2, 1);
  axis << 1.0, 0.0;
  return max_slack_point(p, AffineSubspace{Vec::Zero(2), axis}, tol).second > 1e-3;
}

/// Random polygon whose interior meets the q-axis.
inline Polytope random_axis_polygon(Rng& rng, int sides) {
  for (;;) {
    auto p = random_polygon(rng, sides);
    if (meets_q_axis(p)) return p;
  }
}

}  // namespace symcap::testing
