#pragma once

#include <optional>
#include <vector>

#include "symcap/capacity.hpp"
#include "symcap/polytope.hpp"
#include "symcap/symplectic.hpp"

namespace symcap {

enum class BoundaryKind { closed, psi, leaf };

/// Boundary condition a path must satisfy: z(1) = z(0), z(1) = Psi z(0), or
/// endpoints in R^{n,k} with difference in V_0^{n,k}.
struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::closed;
  std::optional<SymplecticMatrix> psi;
  std::optional<CoisotropicFrame> frame;

  static BoundaryCondition closed() { return {}; }
  static BoundaryCondition twisted(const SymplecticMatrix& m) {
    return {BoundaryKind::psi, m, std::nullopt};
  }
  static BoundaryCondition leafwise(int n, int k) {
    return {BoundaryKind::leaf, std::nullopt, CoisotropicFrame(n, k)};
  }
};

struct PathSegment {
  double length = 0.0;  ///< |I_i|
  Vec velocity;         ///< constant velocity on I_i
  int facet = -1;       ///< facet label the segment travels on
};

/// Path on [0, 1] with piecewise-constant velocity. `origin` is the
/// reference point used for the H*_K normalization (the solver's interior
/// translation point).
struct PiecewiseAffinePath {
  Vec start;
  std::vector<PathSegment> segments;
  double total_time = 0.0;
  Vec origin;

  std::vector<double> breakpoints() const;
  /// z(tau_0), ..., z(tau_m).
  std::vector<Vec> breakpoint_positions() const;
  Vec end() const;
};

/// Builds the minimizing characteristic (or chord) certified by `result`:
/// |I_i| = beta h, velocity (2T/h) J n, start anchored by least squares on
/// the facet equalities. Throws `reconstruction` when the anchoring
/// residual exceeds `residual_tol`.
PiecewiseAffinePath reconstruct(const Polytope& p, const CapacityResult& result,
                                const BoundaryCondition& boundary,
                                Convention convention = Convention::standard,
                                double residual_tol = 1e-8);

/// A(z) = 1/2 int <-J z', z> in closed form.
double action(const PiecewiseAffinePath& path);

struct VerificationReport {
  double boundary_residual = 0.0;   ///< closure / twist / leaf membership
  double facet_residual = 0.0;      ///< max |<z, n_sigma(i)> - h| at segment ends
  double outside_violation = 0.0;   ///< max positive <z, n> - h over breakpoints
  double direction_residual = 0.0;  ///< velocity misalignment with +J n
  double action = 0.0;
  double action_relative_error = 0.0;
  double dual_sum = 0.0;            ///< sum |I_i| H*(-J w_i / sqrt(T))
  double dual_relative_error = 0.0;
  bool facets_once = true;          ///< every facet carries at most one segment

  /// Thresholds used throughout the test and acceptance suites.
  bool passes(double boundary_tol = 1e-8, double action_tol = 1e-9,
              double dual_tol = 1e-8) const;
};

VerificationReport verify(const PiecewiseAffinePath& path, const Polytope& p,
                          const BoundaryCondition& boundary, double expected_value);

}  // namespace symcap
