#include "doctest.h"

#include <set>

#include "symcap/error.hpp"
#include "symcap/permutations.hpp"

using namespace symcap;

TEST_CASE("exact mode enumerates every permutation once") {
  for (int f : {3, 4, 6}) {
    const PermutationStream s(f, PermutationMode::exact);
    const auto all = s.all();
    CHECK(all.size() == factorial(f));
    CHECK(std::set<Permutation>(all.begin(), all.end()).size() == all.size());
    CHECK(std::is_sorted(all.begin(), all.end()));
    for (const auto& p : all) CHECK(is_permutation_of(p, f));
  }
  CHECK(PermutationStream(3, PermutationMode::exact).size() == 6);
  CHECK(PermutationStream(4, PermutationMode::exact).size() == 24);
}

TEST_CASE("blocks partition the stream") {
  const PermutationStream s(7, PermutationMode::exact);
  std::vector<Permutation> joined;
  for (std::size_t b = 0; b < s.block_count(); ++b) {
    const auto part = s.block(b);
    joined.insert(joined.end(), part.begin(), part.end());
  }
  CHECK(joined == s.all());
  CHECK(joined.size() == 5040);
}

TEST_CASE("random mode is reproducible per seed") {
  const PermutationStream a(9, PermutationMode::random, 500, 3);
  const PermutationStream b(9, PermutationMode::random, 500, 3);
  const PermutationStream c(9, PermutationMode::random, 500, 4);
  CHECK(a.all() == b.all());
  CHECK(a.all() != c.all());
  CHECK(a.size() == 500);
  for (const auto& p : a.all()) CHECK(is_permutation_of(p, 9));
}

TEST_CASE("exact mode over the cap is a budget error") {
  try {
    PermutationStream s(9, PermutationMode::exact);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::budget);
    CHECK(std::string(e.what()).find("random") != std::string::npos);
  }
  CHECK_THROWS_AS(PermutationStream(1, PermutationMode::exact), Error);
}

TEST_CASE("unranking and validation") {
  CHECK(unrank_permutation(3, 0) == Permutation{0, 1, 2});
  CHECK(unrank_permutation(3, 5) == Permutation{2, 1, 0});
  CHECK(is_permutation_of({2, 0, 1}, 3));
  CHECK_FALSE(is_permutation_of({0, 0, 1}, 3));
  CHECK_FALSE(is_permutation_of({0, 1}, 3));
  CHECK(factorial(8) == 40320);
}
