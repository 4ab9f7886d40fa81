#include "symcap/linalg.hpp"

#include <cstdint>
#include <limits>
#include <numeric>

namespace symcap {

namespace {

int rank_from_singular_values(const Vec& s, double rank_tol) {
  if (s.size() == 0) return 0;
  const double cutoff = rank_tol * s(0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) ++r;
  }
  return r;
}

}  // namespace

AffineSolution solve_affine(const Mat& a, const Vec& b, double rank_tol) {
  AffineSolution out;
  const auto cols = a.cols();
  if (a.rows() == 0) {
    out.x = Vec::Zero(cols);
    out.null_basis = Mat::Identity(cols, cols);
    out.residual = 0.0;
    return out;
  }
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const int r = rank_from_singular_values(s, rank_tol);
  out.rank = r;
  out.x = Vec::Zero(cols);
  for (int i = 0; i < r; ++i) {
    out.x += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(b) / s(i));
  }
  out.null_basis = svd.matrixV().rightCols(cols - r);
  out.residual = (a * out.x - b).norm();
  return out;
}

Mat null_space(const Mat& a, double rank_tol) {
  if (a.rows() == 0) return Mat::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const int r = rank_from_singular_values(svd.singularValues(), rank_tol);
  return svd.matrixV().rightCols(a.cols() - r);
}

int numerical_rank(const Mat& a, double rank_tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  return rank_from_singular_values(svd.singularValues(), rank_tol);
}

int affine_dimension(std::span<const Vec> points, double rank_tol) {
  if (points.size() <= 1) return 0;
  Mat diffs(points[0].size(), static_cast<Eigen::Index>(points.size() - 1));
  for (std::size_t i = 1; i < points.size(); ++i) {
    diffs.col(static_cast<Eigen::Index>(i - 1)) = points[i] - points[0];
  }
  return numerical_rank(diffs, rank_tol);
}

void for_each_combination(int n, int k,
                          const std::function<bool(const std::vector<int>&)>& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (!fn(idx)) return;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto cap = std::numeric_limits<std::size_t>::max();
  std::size_t acc = 1;
  for (int i = 1; i <= k; ++i) {
    // acc * (n-k+i) / i stays exact because acc is C(n-k+i-1, i-1).
    const auto num = static_cast<std::size_t>(n - k + i);
    const auto den = static_cast<std::size_t>(i);
    const std::size_t g = std::gcd(acc, den);
    const std::size_t a = acc / g;
    const std::size_t b = num / (den / g);
    if (a > cap / b) return cap;
    acc = a * b;
  }
  return acc;
}

bool lexicographically_less(const Vec& a, const Vec& b) {
  const auto n = std::min(a.size(), b.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return a.size() < b.size();
}

}  // namespace symcap
