#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "symcap/linalg.hpp"
#include "symcap/tolerances.hpp"

namespace symcap {

/// Halfspace <x, normal> <= height. Facets of a Polytope have unit normals.
struct Facet {
  Vec normal;
  double height = 0.0;
};

/// Caps for the exhaustive subset enumerations used during construction.
struct PolytopeLimits {
  std::size_t facet_cap = 24;
  int dim_cap = 8;
};

/// Affine subspace origin + span(basis columns).
struct AffineSubspace {
  Vec origin;
  Mat basis;
};

/// Full-dimensional compact convex polytope in R^{2n}, stored in both
/// representations. Immutable once constructed.
class Polytope {
 public:
  /// Normalizes each (a, c) to (a/|a|, c/|a|), enumerates vertices over all
  /// 2n-subsets of facet equalities and drops halfspaces that do not carry a
  /// (2n-1)-dimensional face.
  static Polytope from_halfspaces(const std::vector<Facet>& raw, int dim,
                                  const Tolerances& tol = {},
                                  const PolytopeLimits& limits = {});

  /// Brute-force convex hull over 2n-subsets of the points.
  static Polytope from_vertices(const std::vector<Vec>& points, int dim,
                                const Tolerances& tol = {},
                                const PolytopeLimits& limits = {});

  int dim() const { return dim_; }
  int half_dim() const { return dim_ / 2; }
  std::size_t facet_count() const { return facets_.size(); }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<Vec>& vertices() const { return vertices_; }

  /// h_K(y) = max over vertices of <x, y>.
  double support(const Vec& y) const;

  /// H*_K(w) = h_K(w)^2 / 4. Requires 0 in the interior.
  double legendre_dual(const Vec& w) const;

  /// True when every height exceeds eps.
  bool origin_interior(double eps = 1e-9) const;

  /// Image under x -> x - p.
  Polytope translate(const Vec& p) const;
  Polytope scale(double lambda) const;
  Polytope linear_image(const Mat& m) const;

  /// (P n {<x,a> <= c}, P n {<x,a> >= c}).
  std::pair<Polytope, Polytope> cut(const Vec& normal, double offset) const;

  /// Facets lifted into R^{2(m+l)} with coordinates ordered (q_P, q_Q, p_P, p_Q).
  friend Polytope product(const Polytope& p, const Polytope& q);

 private:
  Polytope(int dim, std::vector<Facet> facets, std::vector<Vec> vertices, Tolerances tol,
           PolytopeLimits limits);
  void validate() const;

  int dim_ = 0;
  std::vector<Facet> facets_;
  std::vector<Vec> vertices_;
  Tolerances tol_;
  PolytopeLimits limits_;
};

Polytope product(const Polytope& p, const Polytope& q);

/// Chebyshev-style interior point: maximizes the common slack s subject to
/// <x, n_i> + s <= h_i with x restricted to `affine` (whole space when
/// absent). Throws `hypothesis` when the best slack is <= tol.feas.
Vec interior_point(const Polytope& p, const std::optional<AffineSubspace>& affine = std::nullopt,
                   const Tolerances& tol = {});

/// Same LP, returning the optimal slack instead of throwing.
std::pair<Vec, double> max_slack_point(const Polytope& p,
                                       const std::optional<AffineSubspace>& affine,
                                       const Tolerances& tol = {});

/// Axis-aligned box [-r, r]^{2n}.
Polytope cube(int dim, double r = 1.0);

}  // namespace symcap
