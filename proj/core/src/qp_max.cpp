#include "symcap/qp_max.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "symcap/error.hpp"
#include "symcap/random.hpp"

namespace symcap {

namespace {

std::vector<int> bits_of(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1u) out.push_back(i);
  }
  return out;
}

Mat gather_columns(const Mat& a, const std::vector<int>& cols) {
  Mat out(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = a.col(cols[j]);
  return out;
}

void check_budget(Eigen::Index m, const QpLimits& limits) {
  if (m > 31 || (std::size_t{1} << m) > limits.face_budget) {
    std::ostringstream msg;
    msg << "face lattice of " << m << " variables exceeds the budget of " << limits.face_budget
        << " faces";
    fail(ErrorKind::budget, msg.str());
  }
}

// Basic feasible solutions of {x >= 0, A x = b}, keyed by their support.
struct BasicPoints {
  std::vector<Vec> points;
  std::vector<std::uint32_t> supports;
};

BasicPoints basic_feasible_points(const Mat& a, const Vec& b, const Tolerances& tol) {
  const auto m = static_cast<int>(a.cols());
  const double consistency = tol.feas * (1.0 + b.norm());
  BasicPoints out;
  const std::uint32_t total = std::uint32_t{1} << m;
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    const auto free = bits_of(mask);
    if (free.size() > static_cast<std::size_t>(a.rows())) continue;
    Vec x = Vec::Zero(m);
    if (free.empty()) {
      if (b.norm() > consistency) continue;
    } else {
      const auto sol = solve_affine(gather_columns(a, free), b, tol.rank);
      if (sol.rank != static_cast<int>(free.size()) || sol.residual > consistency) continue;
      bool positive = true;
      for (std::size_t j = 0; j < free.size(); ++j) {
        if (!(sol.x(static_cast<Eigen::Index>(j)) > tol.feas)) {
          positive = false;
          break;
        }
        x(free[j]) = sol.x(static_cast<Eigen::Index>(j));
      }
      if (!positive) continue;
    }
    out.points.push_back(std::move(x));
    out.supports.push_back(mask);
  }
  return out;
}

bool better(double value, const Vec& x, double best_value, const Vec& best_x, double tie) {
  if (value > best_value + tie) return true;
  return std::abs(value - best_value) <= tie && lexicographically_less(x, best_x);
}

}  // namespace

FaceLattice FaceLattice::build(const Mat& eq_matrix, const Vec& eq_rhs, const Tolerances& tol,
                               const QpLimits& limits) {
  if (eq_matrix.rows() != eq_rhs.size()) {
    fail(ErrorKind::invalid_dimension, "equality matrix and right-hand side disagree");
  }
  const auto m = eq_matrix.cols();
  check_budget(m, limits);

  // Bounded iff the recession cone {x >= 0, A x = 0} is {0}, i.e. iff its
  // normalized slice {x >= 0, A x = 0, sum x = 1} is empty.
  Mat cone(eq_matrix.rows() + 1, m);
  cone.topRows(eq_matrix.rows()) = eq_matrix;
  cone.row(eq_matrix.rows()).setOnes();
  Vec cone_rhs = Vec::Zero(eq_matrix.rows() + 1);
  cone_rhs(eq_matrix.rows()) = 1.0;
  if (!basic_feasible_points(cone, cone_rhs, tol).points.empty()) {
    fail(ErrorKind::precondition, "feasible set {beta >= 0, A beta = b} is unbounded");
  }

  FaceLattice lat;
  lat.m_ = static_cast<int>(m);
  lat.tol_ = tol;
  auto basic = basic_feasible_points(eq_matrix, eq_rhs, tol);
  lat.vertices_ = std::move(basic.points);
  lat.vertex_supports_ = std::move(basic.supports);
  if (lat.vertices_.empty()) return lat;

  // A face {x_i = 0, i not in F} has relative-interior support exactly F iff
  // F is the union of the supports of the vertices it contains.
  const std::uint32_t total = std::uint32_t{1} << m;
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    std::uint32_t covered = 0;
    int contained = 0;
    for (auto s : lat.vertex_supports_) {
      if ((s & ~mask) == 0) {
        covered |= s;
        ++contained;
      }
    }
    if (covered != mask || contained < 2) continue;
    Face face;
    face.support = mask;
    face.free = bits_of(mask);
    const auto sol = solve_affine(gather_columns(eq_matrix, face.free), eq_rhs, tol.rank);
    if (sol.null_basis.cols() == 0) continue;
    face.anchor = Vec::Zero(m);
    face.directions = Mat::Zero(m, sol.null_basis.cols());
    for (std::size_t j = 0; j < face.free.size(); ++j) {
      face.anchor(face.free[j]) = sol.x(static_cast<Eigen::Index>(j));
      face.directions.row(face.free[j]) = sol.null_basis.row(static_cast<Eigen::Index>(j));
    }
    lat.faces_.push_back(std::move(face));
  }
  // increasing number of pinned coordinates
  std::stable_sort(lat.faces_.begin(), lat.faces_.end(), [](const Face& a, const Face& b) {
    return std::popcount(a.support) > std::popcount(b.support);
  });
  return lat;
}

std::optional<QpSolution> FaceLattice::maximize_symmetric(const Mat& hessian) const {
  if (vertices_.empty()) return std::nullopt;
  double best_value = -std::numeric_limits<double>::infinity();
  Vec best_x;
  std::uint32_t best_support = 0;
  bool have = false;

  auto offer = [&](double value, const Vec& x, std::uint32_t support) {
    if (!have || better(value, x, best_value, best_x, tol_.tie)) {
      best_value = value;
      best_x = x;
      best_support = support;
      have = true;
    }
  };

  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vec& x = vertices_[i];
    offer(0.5 * x.dot(hessian * x), x, vertex_supports_[i]);
  }

  Vec hx;
  Mat hn;
  for (const auto& face : faces_) {
    hn.noalias() = hessian * face.directions;
    hx.noalias() = hessian * face.anchor;
    const Mat reduced = face.directions.transpose() * hn;
    const Vec grad = face.directions.transpose() * hx;
    // Stationary points of q on the affine hull: reduced * y = -grad,
    // minimum-norm solution when reduced is singular.
    Eigen::SelfAdjointEigenSolver<Mat> eig(reduced);
    const Vec& lambda = eig.eigenvalues();
    const double scale = lambda.cwiseAbs().maxCoeff();
    Vec y = Vec::Zero(reduced.rows());
    const Vec rhs = -(eig.eigenvectors().transpose() * grad);
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
      if (std::abs(lambda(k)) > 1e-10 * scale && scale > 0.0) {
        y += eig.eigenvectors().col(k) * (rhs(k) / lambda(k));
      }
    }
    if ((reduced * y + grad).norm() > tol_.feas * (1.0 + grad.norm())) continue;
    const Vec x = face.anchor + face.directions * y;
    bool interior = true;
    for (int j : face.free) {
      if (!(x(j) > tol_.feas)) {
        interior = false;
        break;
      }
    }
    if (!interior) continue;
    Vec clean = Vec::Zero(m_);
    for (int j : face.free) clean(j) = x(j);
    offer(0.5 * clean.dot(hessian * clean), clean, face.support);
  }

  QpSolution sol;
  sol.value = best_value;
  sol.argmax = best_x;
  for (int i = 0; i < m_; ++i) {
    if (!(best_support & (std::uint32_t{1} << i))) sol.active_set.push_back(i);
  }
  return sol;
}

std::vector<Vec> enumerate_vertices(const QuadMaxProblem& prob, const Tolerances& tol,
                                    const QpLimits& limits) {
  check_budget(prob.eq_matrix.cols(), limits);
  return basic_feasible_points(prob.eq_matrix, prob.eq_rhs, tol).points;
}

std::optional<QpSolution> maximize(const QuadMaxProblem& prob, const Tolerances& tol,
                                   const QpLimits& limits) {
  if (prob.objective.rows() != prob.objective.cols() ||
      prob.objective.cols() != prob.eq_matrix.cols()) {
    fail(ErrorKind::invalid_dimension, "objective and constraint sizes disagree");
  }
  const auto lattice = FaceLattice::build(prob.eq_matrix, prob.eq_rhs, tol, limits);
  const Mat hessian = prob.objective + prob.objective.transpose();
  return lattice.maximize_symmetric(hessian);
}

Vec project_to_simplex(const Vec& x) {
  const auto n = x.size();
  std::vector<double> u(x.data(), x.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumulative += u[static_cast<std::size_t>(i)];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] - t > 0.0) theta = t;
  }
  return (x.array() - theta).cwiseMax(0.0).matrix();
}

std::optional<double> multistart_ascent(const QuadMaxProblem& prob, int restarts,
                                        std::uint64_t seed, const Tolerances& tol) {
  const auto vertices = enumerate_vertices(prob, tol);
  if (vertices.empty()) return std::nullopt;
  const auto nv = static_cast<Eigen::Index>(vertices.size());
  Mat v(prob.variables(), nv);
  for (Eigen::Index j = 0; j < nv; ++j) v.col(j) = vertices[static_cast<std::size_t>(j)];
  // In barycentric coordinates lambda: q = 1/2 lambda^T G lambda.
  const Mat g = v.transpose() * (prob.objective + prob.objective.transpose()) * v;
  const double lipschitz = g.selfadjointView<Eigen::Lower>().operatorNorm();
  const double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;
  auto value = [&](const Vec& lam) { return 0.5 * lam.dot(g * lam); };

  Rng rng(seed);
  double best = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    Vec lam(nv);
    for (Eigen::Index j = 0; j < nv; ++j) lam(j) = rng.exponential();
    lam /= lam.sum();
    double current = value(lam);
    for (int it = 0; it < 20000; ++it) {
      const Vec next = project_to_simplex(lam + step * (g * lam));
      const double next_value = value(next);
      const double moved = (next - lam).norm();
      if (next_value < current) break;
      lam = next;
      current = next_value;
      if (moved < 1e-14) break;
    }
    best = std::max(best, current);
  }
  return best;
}

}  // namespace symcap
