#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "symcap/capacity.hpp"
#include "symcap/polytope.hpp"
#include "symcap/symplectic.hpp"

namespace symcap {

/// Shoelace area of a planar polytope.
double polygon_area(const Polytope& p);

/// min(Area(P n {y >= 0}), Area(P n {y <= 0})). Throws `hypothesis` when
/// the interior of P misses the q-axis.
double lr_oracle(const Polytope& p, const Tolerances& tol = {});

/// Area of P, the planar value of c_EHZ.
double ehz_oracle_2d(const Polytope& p);

struct DenseSearchMode {
  CapacityKind kind = CapacityKind::ehz;
  std::optional<SymplecticMatrix> psi;
  int n = 1;
  int k = 0;

  static DenseSearchMode ehz() { return {}; }
  static DenseSearchMode twisted(const SymplecticMatrix& m) {
    return {CapacityKind::psi_ehz, m, 1, 0};
  }
  static DenseSearchMode leafwise(int n, int k) { return {CapacityKind::lr, std::nullopt, n, k}; }
};

struct DenseSearchOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  Tolerances tol;
};

/// Randomized lower bound on the inner maximum (Q* for ehz and lr, D* for
/// psi). Samples a permutation and a random convex combination of the
/// vertices of the constraint polytope, then locally refines the best
/// samples. Work is split into fixed shards with derived seeds, so the
/// result depends on the seed only. Throws `infeasible` when the
/// constraint polytope is empty.
double dense_search(const Polytope& p, const DenseSearchMode& mode,
                    const DenseSearchOptions& opts = {});

}  // namespace symcap
