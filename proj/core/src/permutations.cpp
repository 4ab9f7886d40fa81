#include "symcap/permutations.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "symcap/error.hpp"
#include "symcap/random.hpp"

namespace symcap {

namespace {

constexpr std::size_t kBlock = 720;

}  // namespace

std::size_t factorial(int n) {
  std::size_t f = 1;
  for (int i = 2; i <= n; ++i) {
    if (f > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(i)) {
      return std::numeric_limits<std::size_t>::max();
    }
    f *= static_cast<std::size_t>(i);
  }
  return f;
}

Permutation unrank_permutation(int n, std::size_t rank) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  Permutation out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = n; i >= 1; --i) {
    const std::size_t f = factorial(i - 1);
    const std::size_t idx = rank / f;
    rank %= f;
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return out;
}

bool is_permutation_of(const Permutation& p, int n) {
  if (p.size() != static_cast<std::size_t>(n)) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int x : p) {
    if (x < 0 || x >= n || seen[static_cast<std::size_t>(x)]) return false;
    seen[static_cast<std::size_t>(x)] = 1;
  }
  return true;
}

PermutationStream::PermutationStream(int facets, PermutationMode mode, std::size_t budget,
                                     std::uint64_t seed, int exhaustive_cap)
    : facets_(facets), mode_(mode), size_(0), block_size_(kBlock), seed_(seed) {
  if (facets < 2) fail(ErrorKind::invalid_permutation, "permutation search needs at least 2 facets");
  if (mode == PermutationMode::exact) {
    if (facets > exhaustive_cap) {
      std::ostringstream msg;
      msg << facets << " facets exceed the exhaustive permutation cap " << exhaustive_cap
          << " (" << facets << "! permutations); use --mode random with --perm-budget";
      fail(ErrorKind::budget, msg.str());
    }
    size_ = factorial(facets);
  } else {
    if (budget == 0) fail(ErrorKind::budget, "random permutation mode needs a positive budget");
    size_ = budget;
  }
}

std::vector<Permutation> PermutationStream::block(std::size_t b) const {
  const std::size_t begin = b * block_size_;
  const std::size_t end = std::min(size_, begin + block_size_);
  std::vector<Permutation> out;
  if (begin >= end) return out;
  out.reserve(end - begin);
  if (mode_ == PermutationMode::exact) {
    Permutation p = unrank_permutation(facets_, begin);
    for (std::size_t i = begin; i < end; ++i) {
      out.push_back(p);
      std::next_permutation(p.begin(), p.end());
    }
  } else {
    Rng rng(mix_seed(seed_) ^ mix_seed(b + 1));
    for (std::size_t i = begin; i < end; ++i) {
      Permutation p(static_cast<std::size_t>(facets_));
      std::iota(p.begin(), p.end(), 0);
      for (std::size_t j = p.size() - 1; j > 0; --j) {
        std::swap(p[j], p[static_cast<std::size_t>(rng.below(j + 1))]);
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<Permutation> PermutationStream::all() const {
  std::vector<Permutation> out;
  for (std::size_t b = 0; b < block_count(); ++b) {
    auto blk = block(b);
    out.insert(out.end(), std::make_move_iterator(blk.begin()), std::make_move_iterator(blk.end()));
  }
  return out;
}

}  // namespace symcap
