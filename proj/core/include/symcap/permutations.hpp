#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace symcap {

enum class PermutationMode { exact, random };

using Permutation = std::vector<int>;

/// A deterministic, block-addressable stream of permutations of {0..F-1}.
/// Exact mode yields all F! permutations in lexicographic order; random
/// mode yields `budget` uniform permutations derived from `seed`. Blocks
/// have a fixed size, so any partition of blocks across workers sees the
/// same permutations in the same order.
class PermutationStream {
 public:
  /// Throws `budget` in exact mode when F exceeds `exhaustive_cap`, and
  /// `invalid_permutation` when F < 2.
  PermutationStream(int facets, PermutationMode mode, std::size_t budget = 0,
                    std::uint64_t seed = 0, int exhaustive_cap = 8);

  int facets() const { return facets_; }
  PermutationMode mode() const { return mode_; }
  std::size_t size() const { return size_; }
  std::size_t block_size() const { return block_size_; }
  std::size_t block_count() const { return (size_ + block_size_ - 1) / block_size_; }

  /// Permutations [b * block_size, min(size, (b + 1) * block_size)).
  std::vector<Permutation> block(std::size_t b) const;

  /// All permutations; convenient for small F.
  std::vector<Permutation> all() const;

 private:
  int facets_;
  PermutationMode mode_;
  std::size_t size_;
  std::size_t block_size_;
  std::uint64_t seed_;
};

/// The permutation with the given lexicographic rank.
Permutation unrank_permutation(int n, std::size_t rank);

/// True when `p` is a bijection on {0..n-1}.
bool is_permutation_of(const Permutation& p, int n);

std::size_t factorial(int n);

}  // namespace symcap
