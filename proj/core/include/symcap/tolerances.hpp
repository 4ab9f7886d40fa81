#pragma once

namespace symcap {

/// Numerical thresholds shared by every module. Defaults are the values the
/// solvers are validated against; callers may override them per run.
struct Tolerances {
  double sym = 1e-10;     ///< max-entry residual of Psi^T J Psi - J
  double rank = 1e-10;    ///< singular values below rank * sigma_max count as zero
  double feas = 1e-9;     ///< feasibility / membership slack
  double pos = 1e-12;     ///< strict positivity of the inner objective
  double tie = 1e-12;     ///< objective ties broken lexicographically
  double dedupe = 1e-9;   ///< merging of vertices and coplanar facets
};

/// Sign convention for omega0. `standard` is omega0(u, v) = <u, J v>;
/// `flipped` negates it. Capacity values do not depend on the choice.
enum class Convention { standard, flipped };

}  // namespace symcap
