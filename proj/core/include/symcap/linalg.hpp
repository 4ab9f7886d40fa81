#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace symcap {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Minimum-norm solution of A x = b together with an orthonormal basis of
/// ker(A). `residual` is ||A x - b||; the system is consistent when it is
/// small relative to ||b||.
struct AffineSolution {
  Vec x;
  Mat null_basis;
  double residual = 0.0;
  int rank = 0;
};

AffineSolution solve_affine(const Mat& a, const Vec& b, double rank_tol = 1e-10);

/// Orthonormal basis for ker(A), rank decided relative to sigma_max.
Mat null_space(const Mat& a, double rank_tol = 1e-10);

/// Numerical rank relative to the largest singular value.
int numerical_rank(const Mat& a, double rank_tol = 1e-10);

/// Dimension of the affine hull of a point set.
int affine_dimension(std::span<const Vec> points, double rank_tol = 1e-9);

/// Calls `fn(indices)` for every k-subset of {0, ..., n-1} in lexicographic
/// order. Returning false from `fn` stops the enumeration.
void for_each_combination(int n, int k,
                          const std::function<bool(const std::vector<int>&)>& fn);

/// Binomial coefficient, saturating at SIZE_MAX.
std::size_t binomial(int n, int k);

bool lexicographically_less(const Vec& a, const Vec& b);

}  // namespace symcap
