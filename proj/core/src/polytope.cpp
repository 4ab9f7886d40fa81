#include "symcap/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "symcap/error.hpp"

namespace symcap {

namespace {

double slack_tol(const Tolerances& tol, double h) { return tol.feas * (1.0 + std::abs(h)); }

void check_dimension(int dim, const PolytopeLimits& limits) {
  if (dim <= 0 || dim % 2 != 0) {
    std::ostringstream msg;
    msg << "polytope dimension must be a positive even number, got " << dim;
    fail(ErrorKind::invalid_dimension, msg.str());
  }
  if (dim > limits.dim_cap) {
    std::ostringstream msg;
    msg << "dimension " << dim << " exceeds the enumeration cap " << limits.dim_cap;
    fail(ErrorKind::budget, msg.str());
  }
}

bool same_facet(const Facet& a, const Facet& b, double eps) {
  return (a.normal - b.normal).cwiseAbs().maxCoeff() <= eps && std::abs(a.height - b.height) <= eps;
}

void push_unique(std::vector<Vec>& points, const Vec& x, double eps) {
  for (const auto& y : points) {
    if ((x - y).cwiseAbs().maxCoeff() <= eps) return;
  }
  points.push_back(x);
}

// A nonzero d with <n_i, d> <= 0 for every i means the halfspace
// intersection is unbounded. Extreme rays of that cone are cut out by
// dim - 1 independent normals, so it is enough to test those.
bool has_recession_ray(const std::vector<Facet>& hs, int dim) {
  bool found = false;
  for_each_combination(static_cast<int>(hs.size()), dim - 1, [&](const std::vector<int>& idx) {
    Mat rows(dim - 1, dim);
    for (int r = 0; r < dim - 1; ++r) rows.row(r) = hs[idx[static_cast<std::size_t>(r)]].normal.transpose();
    const Mat ker = null_space(rows, 1e-10);
    if (ker.cols() != 1) return true;
    for (double sign : {1.0, -1.0}) {
      const Vec d = sign * ker.col(0);
      bool ray = true;
      for (const auto& f : hs) {
        if (f.normal.dot(d) > 1e-12) {
          ray = false;
          break;
        }
      }
      if (ray) {
        found = true;
        return false;
      }
    }
    return true;
  });
  return found;
}

std::vector<Vec> enumerate_polytope_vertices(const std::vector<Facet>& hs, int dim,
                                             const Tolerances& tol) {
  std::vector<Vec> vertices;
  Mat a(dim, dim);
  Vec b(dim);
  for_each_combination(static_cast<int>(hs.size()), dim, [&](const std::vector<int>& idx) {
    for (int r = 0; r < dim; ++r) {
      const auto& f = hs[idx[static_cast<std::size_t>(r)]];
      a.row(r) = f.normal.transpose();
      b(r) = f.height;
    }
    Eigen::FullPivLU<Mat> lu(a);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) return true;
    const Vec x = lu.solve(b);
    for (const auto& f : hs) {
      if (f.normal.dot(x) > f.height + slack_tol(tol, f.height)) return true;
    }
    push_unique(vertices, x, tol.dedupe);
    return true;
  });
  return vertices;
}

std::vector<Vec> active_vertices(const Facet& f, const std::vector<Vec>& vertices,
                                 const Tolerances& tol) {
  std::vector<Vec> out;
  for (const auto& x : vertices) {
    if (std::abs(f.normal.dot(x) - f.height) <= slack_tol(tol, f.height)) out.push_back(x);
  }
  return out;
}

}  // namespace

Polytope::Polytope(int dim, std::vector<Facet> facets, std::vector<Vec> vertices, Tolerances tol,
                   PolytopeLimits limits)
    : dim_(dim),
      facets_(std::move(facets)),
      vertices_(std::move(vertices)),
      tol_(tol),
      limits_(limits) {}

Polytope Polytope::from_halfspaces(const std::vector<Facet>& raw, int dim, const Tolerances& tol,
                                   const PolytopeLimits& limits) {
  check_dimension(dim, limits);
  std::vector<Facet> hs;
  for (const auto& f : raw) {
    if (f.normal.size() != dim) {
      fail(ErrorKind::invalid_dimension, "halfspace normal has the wrong dimension");
    }
    const double norm = f.normal.norm();
    if (!(norm > 0.0) || !std::isfinite(norm) || !std::isfinite(f.height)) {
      fail(ErrorKind::validation, "halfspace normal must be finite and nonzero");
    }
    Facet unit{f.normal / norm, f.height / norm};
    const bool dup = std::any_of(hs.begin(), hs.end(),
                                 [&](const Facet& g) { return same_facet(g, unit, tol.dedupe); });
    if (!dup) hs.push_back(std::move(unit));
  }
  if (hs.size() < static_cast<std::size_t>(dim + 1)) {
    std::ostringstream msg;
    msg << "need at least " << dim + 1 << " distinct halfspaces for a bounded polytope in R^"
        << dim << ", got " << hs.size();
    fail(ErrorKind::validation, msg.str());
  }
  if (hs.size() > limits.facet_cap) {
    std::ostringstream msg;
    msg << hs.size() << " halfspaces exceed the vertex-enumeration cap " << limits.facet_cap;
    fail(ErrorKind::budget, msg.str());
  }
  if (has_recession_ray(hs, dim)) {
    fail(ErrorKind::validation, "halfspace system is unbounded");
  }
  auto vertices = enumerate_polytope_vertices(hs, dim, tol);
  if (vertices.empty()) fail(ErrorKind::validation, "halfspace system is empty");
  if (affine_dimension(vertices, tol.dedupe) != dim) {
    fail(ErrorKind::validation, "halfspace system is not full-dimensional");
  }
  std::vector<Facet> facets;
  for (auto& f : hs) {
    const auto act = active_vertices(f, vertices, tol);
    if (static_cast<int>(act.size()) >= dim && affine_dimension(act, tol.dedupe) == dim - 1) {
      facets.push_back(std::move(f));
    }
  }
  Polytope out(dim, std::move(facets), std::move(vertices), tol, limits);
  out.validate();
  return out;
}

Polytope Polytope::from_vertices(const std::vector<Vec>& points, int dim, const Tolerances& tol,
                                 const PolytopeLimits& limits) {
  check_dimension(dim, limits);
  for (const auto& x : points) {
    if (x.size() != dim) fail(ErrorKind::invalid_dimension, "point has the wrong dimension");
    if (!x.allFinite()) fail(ErrorKind::validation, "point coordinates must be finite");
  }
  if (points.size() < static_cast<std::size_t>(dim + 1) ||
      affine_dimension(points, tol.dedupe) != dim) {
    fail(ErrorKind::validation, "points do not span R^" + std::to_string(dim) + " affinely");
  }
  std::vector<Facet> candidates;
  const int count = static_cast<int>(points.size());
  for_each_combination(count, dim, [&](const std::vector<int>& idx) {
    Mat diffs(dim - 1, dim);
    const Vec& base = points[static_cast<std::size_t>(idx[0])];
    for (int r = 1; r < dim; ++r) {
      diffs.row(r - 1) = (points[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])] - base).transpose();
    }
    const Mat ker = null_space(diffs, 1e-10);
    if (ker.cols() != 1) return true;
    Vec n = ker.col(0);
    n.normalize();
    const double h = n.dot(base);
    bool below = true;
    bool above = true;
    for (const auto& x : points) {
      const double s = n.dot(x) - h;
      if (s > slack_tol(tol, h)) below = false;
      if (s < -slack_tol(tol, h)) above = false;
    }
    Facet f;
    if (below) {
      f = Facet{n, h};
    } else if (above) {
      f = Facet{-n, -h};
    } else {
      return true;
    }
    const bool dup = std::any_of(candidates.begin(), candidates.end(),
                                 [&](const Facet& g) { return same_facet(g, f, tol.dedupe); });
    if (!dup) candidates.push_back(std::move(f));
    return true;
  });
  // Canonical order: lexicographic in the normal.
  std::sort(candidates.begin(), candidates.end(), [](const Facet& a, const Facet& b) {
    return lexicographically_less(a.normal, b.normal);
  });
  return from_halfspaces(candidates, dim, tol, limits);
}

void Polytope::validate() const {
  if (vertices_.empty()) fail(ErrorKind::validation, "polytope has no vertices");
  if (affine_dimension(vertices_, tol_.dedupe) != dim_) {
    fail(ErrorKind::validation, "polytope is not full-dimensional");
  }
  if (facets_.size() < static_cast<std::size_t>(dim_ + 1)) {
    fail(ErrorKind::validation, "polytope has too few facets to be bounded");
  }
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    if (std::abs(facets_[i].normal.norm() - 1.0) > 1e-12) {
      fail(ErrorKind::validation, "facet normal is not a unit vector");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (same_facet(facets_[i], facets_[j], tol_.feas)) {
        fail(ErrorKind::validation, "duplicated facet");
      }
    }
    const auto act = active_vertices(facets_[i], vertices_, tol_);
    if (affine_dimension(act, tol_.dedupe) != dim_ - 1) {
      fail(ErrorKind::validation, "facet does not support a (2n-1)-dimensional face");
    }
  }
  for (const auto& x : vertices_) {
    int active = 0;
    for (const auto& f : facets_) {
      const double s = f.normal.dot(x) - f.height;
      if (s > slack_tol(tol_, f.height)) fail(ErrorKind::validation, "vertex violates a facet");
      if (std::abs(s) <= slack_tol(tol_, f.height)) ++active;
    }
    if (active < dim_) fail(ErrorKind::validation, "vertex lies on fewer than 2n facets");
  }
}

double Polytope::support(const Vec& y) const {
  if (y.size() != dim_) fail(ErrorKind::invalid_dimension, "support: dimension mismatch");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& x : vertices_) best = std::max(best, x.dot(y));
  return best;
}

bool Polytope::origin_interior(double eps) const {
  return std::all_of(facets_.begin(), facets_.end(), [eps](const Facet& f) { return f.height > eps; });
}

double Polytope::legendre_dual(const Vec& w) const {
  if (!origin_interior(tol_.feas)) {
    fail(ErrorKind::precondition, "legendre_dual requires the origin in the interior");
  }
  const double h = support(w);
  return 0.25 * h * h;
}

Polytope Polytope::translate(const Vec& p) const {
  if (p.size() != dim_) fail(ErrorKind::invalid_dimension, "translate: dimension mismatch");
  auto facets = facets_;
  for (auto& f : facets) f.height -= p.dot(f.normal);
  auto vertices = vertices_;
  for (auto& x : vertices) x -= p;
  return Polytope(dim_, std::move(facets), std::move(vertices), tol_, limits_);
}

Polytope Polytope::scale(double lambda) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    fail(ErrorKind::precondition, "scale factor must be positive");
  }
  auto facets = facets_;
  for (auto& f : facets) f.height *= lambda;
  auto vertices = vertices_;
  for (auto& x : vertices) x *= lambda;
  return Polytope(dim_, std::move(facets), std::move(vertices), tol_, limits_);
}

Polytope Polytope::linear_image(const Mat& m) const {
  if (m.rows() != dim_ || m.cols() != dim_) {
    fail(ErrorKind::invalid_dimension, "linear_image: matrix size mismatch");
  }
  Eigen::FullPivLU<Mat> lu(m);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) fail(ErrorKind::precondition, "linear_image: matrix is singular");
  std::vector<Vec> image;
  image.reserve(vertices_.size());
  for (const auto& x : vertices_) image.emplace_back(m * x);
  return from_vertices(image, dim_, tol_, limits_);
}

std::pair<Polytope, Polytope> Polytope::cut(const Vec& normal, double offset) const {
  if (normal.size() != dim_) fail(ErrorKind::invalid_dimension, "cut: dimension mismatch");
  const double norm = normal.norm();
  if (!(norm > 0.0)) fail(ErrorKind::degenerate_cut, "cut: zero normal");
  const Vec a = normal / norm;
  const double c = offset / norm;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& x : vertices_) {
    lo = std::min(lo, a.dot(x));
    hi = std::max(hi, a.dot(x));
  }
  if (!(lo < c - slack_tol(tol_, c) && hi > c + slack_tol(tol_, c))) {
    fail(ErrorKind::degenerate_cut, "cutting hyperplane misses the interior of the polytope");
  }
  auto below = facets_;
  below.push_back(Facet{a, c});
  auto above = facets_;
  above.push_back(Facet{-a, -c});
  return {from_halfspaces(below, dim_, tol_, limits_), from_halfspaces(above, dim_, tol_, limits_)};
}

Polytope product(const Polytope& p, const Polytope& q) {
  const int m = p.half_dim();
  const int l = q.half_dim();
  const int dim = 2 * (m + l);
  check_dimension(dim, p.limits_);
  auto lift_p = [&](const Vec& x) {
    Vec out = Vec::Zero(dim);
    out.segment(0, m) = x.head(m);
    out.segment(m + l, m) = x.tail(m);
    return out;
  };
  auto lift_q = [&](const Vec& x) {
    Vec out = Vec::Zero(dim);
    out.segment(m, l) = x.head(l);
    out.segment(2 * m + l, l) = x.tail(l);
    return out;
  };
  std::vector<Facet> facets;
  for (const auto& f : p.facets()) facets.push_back(Facet{lift_p(f.normal), f.height});
  for (const auto& f : q.facets()) facets.push_back(Facet{lift_q(f.normal), f.height});
  std::vector<Vec> vertices;
  for (const auto& x : p.vertices()) {
    for (const auto& y : q.vertices()) vertices.emplace_back(lift_p(x) + lift_q(y));
  }
  Polytope out(dim, std::move(facets), std::move(vertices), p.tol_, p.limits_);
  out.validate();
  return out;
}

std::pair<Vec, double> max_slack_point(const Polytope& p,
                                       const std::optional<AffineSubspace>& affine,
                                       const Tolerances& tol) {
  const int dim = p.dim();
  const Vec origin = affine ? affine->origin : Vec::Zero(dim);
  const Mat basis = affine ? affine->basis : Mat::Identity(dim, dim);
  if (origin.size() != dim || basis.rows() != dim) {
    fail(ErrorKind::invalid_dimension, "interior_point: affine subspace dimension mismatch");
  }
  const int d = static_cast<int>(basis.cols());
  const int nf = static_cast<int>(p.facet_count());
  // rows: [n_i^T B, 1] (y, s) <= h_i - <n_i, origin>
  Mat rows(nf, d + 1);
  Vec rhs(nf);
  for (int i = 0; i < nf; ++i) {
    const auto& f = p.facets()[static_cast<std::size_t>(i)];
    rows.row(i).head(d) = (f.normal.transpose() * basis);
    rows(i, d) = 1.0;
    rhs(i) = f.height - f.normal.dot(origin);
  }
  bool have = false;
  double best_s = -std::numeric_limits<double>::infinity();
  Vec best_x = origin;
  Mat a(d + 1, d + 1);
  Vec b(d + 1);
  for_each_combination(nf, d + 1, [&](const std::vector<int>& idx) {
    for (int r = 0; r <= d; ++r) {
      a.row(r) = rows.row(idx[static_cast<std::size_t>(r)]);
      b(r) = rhs(idx[static_cast<std::size_t>(r)]);
    }
    Eigen::FullPivLU<Mat> lu(a);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) return true;
    const Vec z = lu.solve(b);
    const Vec lhs = rows * z;
    for (int i = 0; i < nf; ++i) {
      if (lhs(i) > rhs(i) + slack_tol(tol, rhs(i))) return true;
    }
    const double s = z(d);
    const Vec x = origin + basis * z.head(d);
    if (!have || s > best_s + tol.tie || (std::abs(s - best_s) <= tol.tie && lexicographically_less(x, best_x))) {
      if (!have || s > best_s + tol.tie) best_s = s;
      best_x = x;
      have = true;
    }
    return true;
  });
  if (!have) fail(ErrorKind::hypothesis, "slack LP has no vertex: affine subspace misses the polytope");
  return {best_x, best_s};
}

Vec interior_point(const Polytope& p, const std::optional<AffineSubspace>& affine,
                   const Tolerances& tol) {
  auto [x, s] = max_slack_point(p, affine, tol);
  if (!(s > tol.feas)) {
    std::ostringstream msg;
    msg << "no interior point of the polytope in the requested subspace (best slack " << s << ")";
    fail(ErrorKind::hypothesis, msg.str());
  }
  return x;
}

Polytope cube(int dim, double r) {
  std::vector<Facet> hs;
  for (int i = 0; i < dim; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vec n = Vec::Zero(dim);
      n(i) = sign;
      hs.push_back(Facet{n, r});
    }
  }
  return Polytope::from_halfspaces(hs, dim);
}

}  // namespace symcap
