#pragma once

#include <optional>

#include "symcap/linalg.hpp"
#include "symcap/tolerances.hpp"

namespace symcap {

/// J(q, p) = (-p, q) in block coordinates (first half q, second half p).
Vec apply_J(const Vec& u);

/// The 2n x 2n matrix of J.
Mat standard_J(int dim);

/// omega0(u, v) = <u, J v> under the standard convention.
double omega0(const Vec& u, const Vec& v, Convention convention = Convention::standard);

/// A square matrix of even size satisfying Psi^T J Psi = J.
class SymplecticMatrix {
 public:
  /// Throws `not_symplectic` when the max-entry residual exceeds `eps_sym`
  /// and `invalid_dimension` for non-square or odd-sized input.
  static SymplecticMatrix validate(const Mat& m, double eps_sym = 1e-10);

  static SymplecticMatrix identity(int dim);

  const Mat& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

 private:
  explicit SymplecticMatrix(Mat m) : m_(std::move(m)) {}
  Mat m_;
};

/// Orthonormal splitting of R^{2n} induced by Psi - I. Columns are basis
/// vectors. `shift_inverse` maps w in Im(Psi - I) to the unique v in E_Psi
/// with (Psi - I) v = w.
struct FixedDecomposition {
  Mat kernel_basis;          ///< Ker(Psi - I)
  Mat e_psi_basis;           ///< orthogonal complement of the kernel
  Mat image_basis;           ///< Im(Psi - I)
  Mat image_complement;      ///< orthogonal complement of the image
  Mat shift_inverse;         ///< pseudo-inverse of Psi - I
};

FixedDecomposition fixed_decomposition(const SymplecticMatrix& psi, double eps_rank = 1e-10);

/// Returns v in E_Psi with (Psi - I) v = w, or nullopt when w is not in
/// Im(Psi - I) up to eps_feas * (1 + ||w||).
std::optional<Vec> solve_fixed_shift(const FixedDecomposition& fd, const Vec& w,
                                     double eps_feas = 1e-9);
std::optional<Vec> solve_fixed_shift(const SymplecticMatrix& psi, const Vec& w,
                                     const Tolerances& tol = {});

/// Coisotropic subspace R^{n,k} = span(q_1..q_n, p_1..p_k) and its leaf
/// direction V_0^{n,k} = span(q_{k+1}..q_n).
class CoisotropicFrame {
 public:
  /// Throws `invalid_frame` unless 0 <= k < n.
  CoisotropicFrame(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  int dim() const { return 2 * n_; }

  /// Coordinate indices spanning R^{n,k} and V_0^{n,k}.
  std::vector<int> coisotropic_coordinates() const;
  std::vector<int> leaf_coordinates() const;

  Mat coisotropic_basis() const;
  Mat leaf_basis() const;

 private:
  int n_;
  int k_;
};

enum class FrameSubspace { coisotropic, leaf };

bool coisotropic_membership(const Vec& w, const CoisotropicFrame& frame, FrameSubspace which,
                            double eps_feas = 1e-9);

}  // namespace symcap
