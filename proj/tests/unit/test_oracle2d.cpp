#include "doctest.h"

#include "fixtures.hpp"
#include "symcap/capacity.hpp"
#include "symcap/error.hpp"
#include "symcap/oracle2d.hpp"

using namespace symcap;
using namespace symcap::testing;

TEST_CASE("polygon area") {
  CHECK(polygon_area(square()) == doctest::Approx(4.0));
  CHECK(polygon_area(triangle_p1()) == doctest::Approx(2.0));
  CHECK(polygon_area(square().scale(1.7)) == doctest::Approx(1.7 * 1.7 * 4.0));
  CHECK(ehz_oracle_2d(square()) == doctest::Approx(4.0));
  CHECK_THROWS_AS(polygon_area(cube(4)), Error);
}

TEST_CASE("half-area oracle") {
  CHECK(lr_oracle(square()) == doctest::Approx(2.0));
  CHECK(lr_oracle(slab_right(0.3)) == doctest::Approx(0.7));
  CHECK(lr_oracle(triangle_p1()) == doctest::Approx(0.5));
  try {
    lr_oracle(square().translate(vec({0, 2})));
    FAIL("expected hypothesis error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::hypothesis);
  }
}

TEST_CASE("oracles match the exact solvers on random polygons") {
  Rng rng(40);
  for (int trial = 0; trial < 6; ++trial) {
    const auto p = random_axis_polygon(rng, 4 + trial % 4);
    CHECK(ehz(p).value == doctest::Approx(ehz_oracle_2d(p)).epsilon(1e-6));
    CHECK(lr(p, 1, 0).value == doctest::Approx(lr_oracle(p)).epsilon(1e-6));
  }
}

TEST_CASE("dense search") {
  const double q = dense_search(square(), DenseSearchMode::ehz(), {10000, 3});
  CHECK(q <= 0.125 + 1e-12);
  CHECK(q >= 0.125 - 1e-3);
  CHECK(q == dense_search(square(), DenseSearchMode::ehz(), {10000, 3}));

  DenseSearchOptions threaded{10000, 3, 4, {}};
  CHECK(q == dense_search(square(), DenseSearchMode::ehz(), threaded));

  const double lrq = dense_search(triangle_p1(), DenseSearchMode::leafwise(1, 0), {5000, 1});
  CHECK(lrq <= lr(triangle_p1(), 1, 0).objective + 1e-12);

  const double d = dense_search(square(), DenseSearchMode::twisted(psi_rotation()), {5000, 2});
  CHECK(d <= psi_ehz(square(), psi_rotation()).objective + 1e-12);
}

TEST_CASE("dense search checks the mode's hypothesis") {
  CHECK_THROWS_AS(dense_search(square().translate(vec({0, 3})), DenseSearchMode::leafwise(1, 0), {10, 0}),
                  Error);
}
