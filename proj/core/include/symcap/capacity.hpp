#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "symcap/permutations.hpp"
#include "symcap/polytope.hpp"
#include "symcap/qp_max.hpp"
#include "symcap/symplectic.hpp"

namespace symcap {

enum class CapacityKind { ehz, psi_ehz, lr };

std::string_view to_string(CapacityKind kind);

struct SearchOptions {
  PermutationMode mode = PermutationMode::exact;
  std::size_t perm_budget = 10000;  ///< random mode only
  std::uint64_t seed = 0;
  unsigned threads = 1;
  int exhaustive_cap = 8;
  bool auto_translate = true;  ///< false: solve in the given frame (origin must be interior)
  Convention convention = Convention::standard;
  Tolerances tol;
  QpLimits qp;
};

/// Optimal certificate of one capacity computation. `beta` and `heights`
/// refer to the polytope translated by x -> x - translation.
struct CapacityResult {
  CapacityKind kind = CapacityKind::ehz;
  double value = 0.0;
  Permutation sigma;
  Vec beta;
  Vec v;               ///< element of E_Psi (zero for ehz and lr)
  double objective = 0.0;  ///< inner maximum: Q* (ehz, lr) or D* (psi)
  PermutationMode mode = PermutationMode::exact;
  Vec translation;
  Vec heights;
  std::size_t permutations_searched = 0;
  int frame_k = -1;  ///< lr only
};

/// U_sigma with beta^T U_sigma beta =
///   sum_{j < i} beta_{sigma(i)} beta_{sigma(j)} omega0(n_{sigma(i)}, n_{sigma(j)}),
/// indexed by facet labels.
Mat objective_matrix(const Polytope& p, const Permutation& sigma,
                     Convention convention = Convention::standard);

/// Ekeland-Hofer-Zehnder capacity: 1 / (2 max Q) over sigma and
/// {beta >= 0, sum beta_i h_i = 1, sum beta_i n_i = 0}.
CapacityResult ehz(const Polytope& p, const SearchOptions& opts = {});

/// Psi-relative capacity: 2 / max D, where v in E_Psi is eliminated through
/// (Psi - I) v = 2 sum beta_i J n_i.
CapacityResult psi_ehz(const Polytope& p, const SymplecticMatrix& psi,
                       const SearchOptions& opts = {});

/// Coisotropic capacity relative to R^{n,k}: 1 / (2 max Q) over
/// {beta >= 0, sum beta_i h_i = 1, sum beta_i J n_i in V_0^{n,k}}.
CapacityResult lr(const Polytope& p, int n, int k, const SearchOptions& opts = {});

struct CutReport {
  CapacityResult whole;
  CapacityResult first;   ///< part with <x, normal> <= offset
  CapacityResult second;  ///< part with <x, normal> >= offset
  double margin = 0.0;    ///< whole - first - second
  std::vector<Polytope> parts;  ///< the two parts, in the order above
};

/// Splits a planar polytope along the line <x, normal> = offset and compares
/// c_LR of the whole with the sum over the two parts. Throws `hypothesis`
/// naming the failed clause when the line is the q-axis, misses
/// D n L n R^{1,0}, or leaves a part without interior q-axis points.
CutReport cut_experiment(const Polytope& p, const Vec& normal, double offset,
                         const SearchOptions& opts = {});

}  // namespace symcap
