#include "symcap/characteristic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "symcap/error.hpp"

namespace symcap {

std::vector<double> PiecewiseAffinePath::breakpoints() const {
  std::vector<double> tau{0.0};
  double t = 0.0;
  for (const auto& s : segments) {
    t += s.length;
    tau.push_back(t);
  }
  return tau;
}

std::vector<Vec> PiecewiseAffinePath::breakpoint_positions() const {
  std::vector<Vec> z{start};
  Vec cur = start;
  for (const auto& s : segments) {
    cur += s.length * s.velocity;
    z.push_back(cur);
  }
  return z;
}

Vec PiecewiseAffinePath::end() const { return breakpoint_positions().back(); }

namespace {

void require_kind(const CapacityResult& r, const BoundaryCondition& b) {
  const bool ok = (b.kind == BoundaryKind::closed &&
                   (r.kind == CapacityKind::ehz || r.kind == CapacityKind::psi_ehz)) ||
                  (b.kind == BoundaryKind::psi && r.kind == CapacityKind::psi_ehz) ||
                  (b.kind == BoundaryKind::leaf && r.kind == CapacityKind::lr);
  if (!ok) fail(ErrorKind::precondition, "boundary condition does not match the capacity result");
  if (b.kind == BoundaryKind::psi && !b.psi) fail(ErrorKind::precondition, "psi boundary without Psi");
  if (b.kind == BoundaryKind::leaf && !b.frame) fail(ErrorKind::precondition, "leaf boundary without frame");
}

}  // namespace

PiecewiseAffinePath reconstruct(const Polytope& p, const CapacityResult& result,
                                const BoundaryCondition& boundary, Convention convention,
                                double residual_tol) {
  require_kind(result, boundary);
  const int dim = p.dim();
  const auto f = static_cast<Eigen::Index>(p.facet_count());
  if (result.beta.size() != f || result.translation.size() != dim ||
      static_cast<Eigen::Index>(result.sigma.size()) != f) {
    fail(ErrorKind::precondition, "capacity result does not belong to this polytope");
  }
  const Polytope k = p.translate(result.translation);
  const double total = result.value;

  // Under the flipped convention the solver's optimal order is the reverse
  // of the traversal order.
  std::vector<int> order(result.sigma.begin(), result.sigma.end());
  if (convention == Convention::flipped) std::reverse(order.begin(), order.end());

  PiecewiseAffinePath path;
  path.total_time = total;
  std::vector<Vec> offsets;  // displacement accumulated before each segment
  Vec acc = Vec::Zero(dim);
  for (int label : order) {
    const double b = result.beta(label);
    if (!(b > 0.0)) continue;
    const auto& facet = k.facets()[static_cast<std::size_t>(label)];
    const Vec jn = apply_J(facet.normal);
    PathSegment seg;
    seg.length = b * facet.height;
    seg.velocity = (2.0 * total / facet.height) * jn;
    seg.facet = label;
    offsets.push_back(acc);
    acc += 2.0 * total * b * jn;
    path.segments.push_back(std::move(seg));
  }
  if (path.segments.empty()) fail(ErrorKind::reconstruction, "certificate has no nonempty segment");

  // Start point z0 = base + basis * y with facet equalities
  // <z0 + offset_i, n_i> = h_i.
  Vec base = Vec::Zero(dim);
  Mat basis;
  switch (boundary.kind) {
    case BoundaryKind::closed:
      basis = Mat::Identity(dim, dim);
      break;
    case BoundaryKind::psi: {
      const auto fd = fixed_decomposition(*boundary.psi);
      base = total * result.v;
      basis = fd.kernel_basis;
      break;
    }
    case BoundaryKind::leaf:
      basis = boundary.frame->coisotropic_basis();
      break;
  }
  const auto m = static_cast<Eigen::Index>(path.segments.size());
  Mat a(m, basis.cols());
  Vec rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& facet = k.facets()[static_cast<std::size_t>(path.segments[static_cast<std::size_t>(i)].facet)];
    a.row(i) = facet.normal.transpose() * basis;
    rhs(i) = facet.height - facet.normal.dot(base + offsets[static_cast<std::size_t>(i)]);
  }
  Vec z0 = base;
  double residual = rhs.cwiseAbs().maxCoeff();
  if (basis.cols() > 0) {
    const auto sol = solve_affine(a, rhs);
    z0 += basis * sol.x;
    residual = (a * sol.x - rhs).cwiseAbs().maxCoeff();
  }
  if (!(residual <= residual_tol)) {
    std::ostringstream msg;
    msg << "facet anchoring residual " << residual << " exceeds " << residual_tol;
    fail(ErrorKind::reconstruction, msg.str());
  }
  path.start = z0 + result.translation;
  path.origin = result.translation;
  return path;
}

double action(const PiecewiseAffinePath& path) {
  // Integrating <-J z', z> segment by segment gives
  // sum_{j<i} |I_i||I_j| omega0(w_i, w_j) + omega0(z(1), z(0)).
  double pairs = 0.0;
  Vec prefix = Vec::Zero(path.start.size());
  for (const auto& s : path.segments) {
    pairs += s.length * omega0(s.velocity, prefix);
    prefix += s.length * s.velocity;
  }
  const Vec end = path.start + prefix;
  return 0.5 * (pairs + omega0(end, path.start));
}

bool VerificationReport::passes(double boundary_tol, double action_tol, double dual_tol) const {
  return boundary_residual <= boundary_tol && facet_residual <= boundary_tol &&
         outside_violation <= boundary_tol && direction_residual <= boundary_tol &&
         action_relative_error <= action_tol && dual_relative_error <= dual_tol && facets_once;
}

VerificationReport verify(const PiecewiseAffinePath& path, const Polytope& p,
                          const BoundaryCondition& boundary, double expected_value) {
  if (path.start.size() != p.dim()) fail(ErrorKind::invalid_dimension, "path and polytope dimensions differ");
  VerificationReport rep;
  const auto z = path.breakpoint_positions();
  const Vec& z0 = z.front();
  const Vec& z1 = z.back();

  switch (boundary.kind) {
    case BoundaryKind::closed:
      rep.boundary_residual = (z1 - z0).norm();
      break;
    case BoundaryKind::psi:
      if (!boundary.psi) fail(ErrorKind::precondition, "psi boundary without Psi");
      rep.boundary_residual = (z1 - boundary.psi->matrix() * z0).norm();
      break;
    case BoundaryKind::leaf: {
      if (!boundary.frame) fail(ErrorKind::precondition, "leaf boundary without frame");
      const Mat c = boundary.frame->coisotropic_basis();
      const Mat l = boundary.frame->leaf_basis();
      auto off = [](const Mat& basis, const Vec& w) { return (w - basis * (basis.transpose() * w)).norm(); };
      rep.boundary_residual = std::max({off(c, z0), off(c, z1), off(l, z1 - z0)});
      break;
    }
  }

  std::set<int> seen;
  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    const auto& s = path.segments[i];
    if (s.facet < 0 || static_cast<std::size_t>(s.facet) >= p.facet_count()) {
      fail(ErrorKind::malformed_input, "segment facet label out of range");
    }
    if (!seen.insert(s.facet).second && s.length > 0.0) rep.facets_once = false;
    const auto& facet = p.facets()[static_cast<std::size_t>(s.facet)];
    for (const Vec* e : {&z[i], &z[i + 1]}) {
      rep.facet_residual = std::max(rep.facet_residual, std::abs(e->dot(facet.normal) - facet.height));
    }
    const double speed = s.velocity.norm();
    if (speed > 0.0) {
      rep.direction_residual =
          std::max(rep.direction_residual, (s.velocity / speed - apply_J(facet.normal)).norm());
    }
  }
  for (const auto& x : z) {
    for (const auto& facet : p.facets()) {
      rep.outside_violation = std::max(rep.outside_violation, x.dot(facet.normal) - facet.height);
    }
  }

  const double scale = std::max(std::abs(expected_value), std::numeric_limits<double>::min());
  rep.action = action(path);
  rep.action_relative_error = std::abs(rep.action - expected_value) / scale;

  // Time-1 reparametrization with velocities w_i / sqrt(T), measured with
  // H* of K centred at the solver's interior point.
  const Vec origin = path.origin.size() == p.dim() ? path.origin : Vec::Zero(p.dim());
  const Polytope centred = p.translate(origin);
  if (centred.origin_interior() && path.total_time > 0.0) {
    const double root = std::sqrt(path.total_time);
    for (const auto& s : path.segments) {
      rep.dual_sum += s.length * centred.legendre_dual(-apply_J(s.velocity) / root);
    }
    rep.dual_relative_error = std::abs(rep.dual_sum - expected_value) / scale;
  } else {
    rep.dual_sum = std::numeric_limits<double>::quiet_NaN();
    rep.dual_relative_error = std::numeric_limits<double>::infinity();
  }
  return rep;
}

}  // namespace symcap
