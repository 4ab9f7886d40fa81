#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "symcap/linalg.hpp"
#include "symcap/tolerances.hpp"

namespace symcap {

/// maximize q(beta) = beta^T U beta  subject to  beta >= 0, A beta = b.
/// Only the symmetric part of U matters.
struct QuadMaxProblem {
  Mat objective;  ///< U, m x m
  Mat eq_matrix;  ///< A, r x m
  Vec eq_rhs;     ///< b, r

  Eigen::Index variables() const { return objective.cols(); }
  double value(const Vec& beta) const { return beta.dot(objective * beta); }
};

struct QpLimits {
  std::size_t face_budget = std::size_t{1} << 20;
};

struct QpSolution {
  double value = 0.0;
  Vec argmax;
  std::vector<int> active_set;  ///< indices pinned to zero at the optimum
};

/// Vertices of {beta >= 0, A beta = b}, each listed once. Empty when the
/// set is empty.
std::vector<Vec> enumerate_vertices(const QuadMaxProblem& prob, const Tolerances& tol = {},
                                    const QpLimits& limits = {});

/// Face structure of {beta >= 0, A beta = b}: every face that has a
/// nonempty relative interior, with a particular point and a basis of the
/// directions of its affine hull. Built once and reused for any number of
/// objectives over the same feasible set.
class FaceLattice {
 public:
  struct Face {
    std::uint32_t support = 0;  ///< bitmask of the free (positive) coordinates
    std::vector<int> free;      ///< support as an index list
    Vec anchor;                 ///< particular solution on the free coordinates
    Mat directions;             ///< orthonormal basis of ker(A_free)
  };

  /// Throws `budget` when 2^m exceeds the face budget and `precondition`
  /// when the feasible set is unbounded.
  static FaceLattice build(const Mat& eq_matrix, const Vec& eq_rhs, const Tolerances& tol = {},
                           const QpLimits& limits = {});

  bool empty() const { return vertices_.empty(); }
  int variables() const { return m_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }

  /// Global maximum of beta^T U beta; nullopt when the set is empty.
  /// `hessian` must be U + U^T.
  std::optional<QpSolution> maximize_symmetric(const Mat& hessian) const;

 private:
  int m_ = 0;
  Tolerances tol_;
  std::vector<Vec> vertices_;
  std::vector<std::uint32_t> vertex_supports_;
  std::vector<Face> faces_;
};

/// Exact global maximum by face-lattice enumeration. Ties are broken by the
/// lexicographically smallest maximizer.
std::optional<QpSolution> maximize(const QuadMaxProblem& prob, const Tolerances& tol = {},
                                   const QpLimits& limits = {});

/// Projected-gradient ascent from random feasible starts (Dirichlet
/// combinations of vertices). Deterministic for a fixed seed; a lower bound
/// on maximize().value.
std::optional<double> multistart_ascent(const QuadMaxProblem& prob, int restarts,
                                        std::uint64_t seed, const Tolerances& tol = {});

/// Euclidean projection onto the probability simplex.
Vec project_to_simplex(const Vec& x);

}  // namespace symcap
