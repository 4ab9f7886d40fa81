#include "symcap/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "symcap/error.hpp"

namespace symcap {

namespace {

void require_even(Eigen::Index dim, const char* what) {
  if (dim <= 0 || dim % 2 != 0) {
    std::ostringstream msg;
    msg << what << ": dimension " << dim << " is not a positive even number";
    fail(ErrorKind::invalid_dimension, msg.str());
  }
}

Mat coordinate_basis(int dim, const std::vector<int>& coords) {
  Mat b = Mat::Zero(dim, static_cast<Eigen::Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) b(coords[i], static_cast<Eigen::Index>(i)) = 1.0;
  return b;
}

}  // namespace

Vec apply_J(const Vec& u) {
  require_even(u.size(), "apply_J");
  const auto n = u.size() / 2;
  Vec out(u.size());
  out.head(n) = -u.tail(n);
  out.tail(n) = u.head(n);
  return out;
}

Mat standard_J(int dim) {
  require_even(dim, "standard_J");
  const int n = dim / 2;
  Mat j = Mat::Zero(dim, dim);
  j.topRightCorner(n, n) = -Mat::Identity(n, n);
  j.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  return j;
}

double omega0(const Vec& u, const Vec& v, Convention convention) {
  if (u.size() != v.size()) {
    fail(ErrorKind::invalid_dimension, "omega0: dimension mismatch");
  }
  require_even(u.size(), "omega0");
  const auto n = u.size() / 2;
  // <u, J v> = -<u_q, v_p> + <u_p, v_q>
  const double value = u.tail(n).dot(v.head(n)) - u.head(n).dot(v.tail(n));
  return convention == Convention::standard ? value : -value;
}

SymplecticMatrix SymplecticMatrix::validate(const Mat& m, double eps_sym) {
  if (m.rows() != m.cols()) {
    fail(ErrorKind::invalid_dimension, "symplectic matrix must be square");
  }
  require_even(m.rows(), "validate_symplectic");
  const Mat j = standard_J(static_cast<int>(m.rows()));
  const double residual = (m.transpose() * j * m - j).cwiseAbs().maxCoeff();
  if (!(residual <= eps_sym)) {
    std::ostringstream msg;
    msg << "matrix is not symplectic: max |Psi^T J Psi - J| = " << residual;
    fail(ErrorKind::not_symplectic, msg.str());
  }
  return SymplecticMatrix(m);
}

SymplecticMatrix SymplecticMatrix::identity(int dim) {
  require_even(dim, "SymplecticMatrix::identity");
  return SymplecticMatrix(Mat::Identity(dim, dim));
}

FixedDecomposition fixed_decomposition(const SymplecticMatrix& psi, double eps_rank) {
  const int dim = psi.dim();
  const Mat shift = psi.matrix() - Mat::Identity(dim, dim);
  Eigen::JacobiSVD<Mat> svd(shift, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  int r = 0;
  if (s(0) > 0.0) {
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > eps_rank * s(0)) ++r;
    }
  }
  FixedDecomposition fd;
  fd.e_psi_basis = svd.matrixV().leftCols(r);
  fd.kernel_basis = svd.matrixV().rightCols(dim - r);
  fd.image_basis = svd.matrixU().leftCols(r);
  fd.image_complement = svd.matrixU().rightCols(dim - r);
  fd.shift_inverse = Mat::Zero(dim, dim);
  for (int i = 0; i < r; ++i) {
    fd.shift_inverse += svd.matrixV().col(i) * svd.matrixU().col(i).transpose() / s(i);
  }
  return fd;
}

std::optional<Vec> solve_fixed_shift(const FixedDecomposition& fd, const Vec& w,
                                     double eps_feas) {
  const Vec outside = fd.image_complement.transpose() * w;
  if (outside.norm() > eps_feas * (1.0 + w.norm())) return std::nullopt;
  return Vec(fd.shift_inverse * w);
}

std::optional<Vec> solve_fixed_shift(const SymplecticMatrix& psi, const Vec& w,
                                     const Tolerances& tol) {
  if (w.size() != psi.dim()) {
    fail(ErrorKind::invalid_dimension, "solve_fixed_shift: dimension mismatch");
  }
  return solve_fixed_shift(fixed_decomposition(psi, tol.rank), w, tol.feas);
}

CoisotropicFrame::CoisotropicFrame(int n, int k) : n_(n), k_(k) {
  if (n < 1 || k < 0 || k >= n) {
    std::ostringstream msg;
    msg << "coisotropic frame requires 0 <= k < n, got n=" << n << ", k=" << k;
    fail(ErrorKind::invalid_frame, msg.str());
  }
}

std::vector<int> CoisotropicFrame::coisotropic_coordinates() const {
  std::vector<int> c;
  for (int i = 0; i < n_; ++i) c.push_back(i);
  for (int i = 0; i < k_; ++i) c.push_back(n_ + i);
  return c;
}

std::vector<int> CoisotropicFrame::leaf_coordinates() const {
  std::vector<int> c;
  for (int i = k_; i < n_; ++i) c.push_back(i);
  return c;
}

Mat CoisotropicFrame::coisotropic_basis() const {
  return coordinate_basis(dim(), coisotropic_coordinates());
}

Mat CoisotropicFrame::leaf_basis() const { return coordinate_basis(dim(), leaf_coordinates()); }

bool coisotropic_membership(const Vec& w, const CoisotropicFrame& frame, FrameSubspace which,
                            double eps_feas) {
  if (w.size() != frame.dim()) {
    fail(ErrorKind::invalid_dimension, "coisotropic_membership: dimension mismatch");
  }
  const auto inside = which == FrameSubspace::coisotropic ? frame.coisotropic_coordinates()
                                                          : frame.leaf_coordinates();
  for (int i = 0; i < frame.dim(); ++i) {
    if (std::find(inside.begin(), inside.end(), i) != inside.end()) continue;
    if (std::abs(w(i)) > eps_feas) return false;
  }
  return true;
}

}  // namespace symcap
