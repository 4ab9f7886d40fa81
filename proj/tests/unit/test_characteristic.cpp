#include "doctest.h"

#include "fixtures.hpp"
#include "symcap/capacity.hpp"
#include "symcap/characteristic.hpp"
#include "symcap/error.hpp"

using namespace symcap;
using namespace symcap::testing;

namespace {

// Midpoint rule for 1/2 int <-J z', z> dt; exact enough on piecewise
// affine paths with many subintervals per segment.
double action_by_quadrature(const PiecewiseAffinePath& path, int steps = 2000) {
  double total = 0.0;
  Vec z = path.start;
  for (const auto& s : path.segments) {
    const double dt = s.length / steps;
    const Vec jw = -apply_J(s.velocity);
    for (int i = 0; i < steps; ++i) {
      const Vec mid = z + (i + 0.5) * dt * s.velocity;
      total += dt * jw.dot(mid);
    }
    z += s.length * s.velocity;
  }
  return 0.5 * total;
}

PiecewiseAffinePath ccw_square() {
  PiecewiseAffinePath p;
  p.start = vec({1, -1});
  for (const Vec& w : {vec({0, 2}), vec({-2, 0}), vec({0, -2}), vec({2, 0})}) {
    p.segments.push_back({0.25, 4.0 * w, -1});
  }
  p.total_time = 4.0;
  p.origin = Vec::Zero(2);
  return p;
}

PiecewiseAffinePath random_path(Rng& rng, int segments) {
  PiecewiseAffinePath p;
  p.start = vec({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
  double left = 1.0;
  for (int i = 0; i < segments; ++i) {
    const double len = i + 1 == segments ? left : left * rng.uniform(0.1, 0.6);
    left -= len;
    p.segments.push_back(
        {len, vec({rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)}), i});
  }
  return p;
}

}  // namespace

TEST_CASE("action closed form") {
  PiecewiseAffinePath still;
  still.start = vec({0.3, 0.4});
  still.segments.push_back({1.0, Vec::Zero(2), 0});
  CHECK(action(still) == 0.0);

  PiecewiseAffinePath one;
  one.start = vec({0.5, -0.2});
  const Vec w = vec({0.7, 1.1});
  one.segments.push_back({1.0, w, 0});
  CHECK(action(one) == doctest::Approx(0.5 * omega0(one.start + w, one.start)));
  CHECK(action(one) == doctest::Approx(action_by_quadrature(one)));

  CHECK(action(ccw_square()) == doctest::Approx(4.0));

  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_path(rng, 2 + trial % 4);
    CHECK(action(p) == doctest::Approx(action_by_quadrature(p)).epsilon(1e-8));
  }
}

TEST_CASE("action is invariant under refinement and negated by reversal") {
  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = random_path(rng, 3);
    // Close the loop so reversal is meaningful.
    Vec drift = Vec::Zero(4);
    for (const auto& s : p.segments) drift += s.length * s.velocity;
    p.segments.push_back({0.0, Vec::Zero(4), 9});
    p.segments.back().length = 0.5;
    p.segments.back().velocity = -drift / 0.5;
    for (auto& s : p.segments) s.length /= 1.5;
    for (auto& s : p.segments) s.velocity *= 1.5;

    auto refined = p;
    const auto split = refined.segments[1];
    refined.segments[1].length = split.length * 0.3;
    refined.segments.insert(refined.segments.begin() + 2, {split.length * 0.7, split.velocity, split.facet});
    CHECK(action(refined) == doctest::Approx(action(p)).epsilon(1e-12));

    PiecewiseAffinePath reversed;
    reversed.start = p.start;
    for (auto it = p.segments.rbegin(); it != p.segments.rend(); ++it) {
      reversed.segments.push_back({it->length, -it->velocity, it->facet});
    }
    CHECK(action(reversed) == doctest::Approx(-action(p)).epsilon(1e-12));
  }
}

TEST_CASE("square EHZ characteristic") {
  const auto sq = square();
  const auto r = ehz(sq);
  const auto path = reconstruct(sq, r, BoundaryCondition::closed());
  REQUIRE(path.segments.size() == 4);
  for (const auto& s : path.segments) {
    CHECK((s.length * s.velocity).norm() == doctest::Approx(2.0));
    CHECK(s.length == doctest::Approx(0.25));
  }
  CHECK(path.breakpoints().back() == doctest::Approx(1.0));
  const auto rep = verify(path, sq, BoundaryCondition::closed(), r.value);
  CHECK(rep.boundary_residual <= 1e-10);
  CHECK(rep.facet_residual <= 1e-10);
  CHECK(rep.outside_violation <= 1e-10);
  CHECK(rep.direction_residual <= 1e-10);
  CHECK(rep.action == doctest::Approx(4.0));
  CHECK(rep.dual_sum == doctest::Approx(4.0));
  CHECK(rep.facets_once);
  CHECK(rep.passes());
}

TEST_CASE("square LR chord") {
  const auto sq = square();
  const auto r = lr(sq, 1, 0);
  const auto b = BoundaryCondition::leafwise(1, 0);
  const auto path = reconstruct(sq, r, b);
  const CoisotropicFrame frame(1, 0);
  CHECK(coisotropic_membership(path.start, frame, FrameSubspace::coisotropic));
  CHECK(coisotropic_membership(path.end(), frame, FrameSubspace::coisotropic));
  CHECK(coisotropic_membership(path.end() - path.start, frame, FrameSubspace::leaf));
  const auto rep = verify(path, sq, b, r.value);
  CHECK(rep.action == doctest::Approx(2.0));
  CHECK(rep.passes());
}

TEST_CASE("slab chord") {
  const auto slab = slab_right(0.3);
  const auto b = BoundaryCondition::leafwise(1, 0);
  const auto r = lr(slab, 1, 0);
  const auto rep = verify(reconstruct(slab, r, b), slab, b, r.value);
  CHECK(rep.boundary_residual <= 1e-10);
  CHECK(rep.action == doctest::Approx(0.7));
  CHECK(rep.passes());
}

TEST_CASE("psi characteristics") {
  const auto sq = square();
  const auto closed = reconstruct(sq, ehz(sq), BoundaryCondition::closed());
  const auto id = SymplecticMatrix::identity(2);
  const auto twisted = reconstruct(sq, psi_ehz(sq, id), BoundaryCondition::twisted(id));
  REQUIRE(twisted.segments.size() == closed.segments.size());
  CHECK((twisted.start - closed.start).norm() <= 1e-12);
  for (std::size_t i = 0; i < closed.segments.size(); ++i) {
    CHECK((twisted.segments[i].velocity - closed.segments[i].velocity).norm() <= 1e-12);
  }

  for (const auto& psi : {psi_rotation(), psi_minus_identity()}) {
    const auto r = psi_ehz(sq, psi);
    const auto b = BoundaryCondition::twisted(psi);
    const auto rep = verify(reconstruct(sq, r, b), sq, b, r.value);
    CHECK(rep.passes());
    CHECK(rep.action == doctest::Approx(r.value));
  }

  // Off-centre body with a shear: the translation point must be a fixed point.
  Mat s(2, 2);
  s << 1, 1, 0, 1;
  const auto shear = SymplecticMatrix::validate(s);
  const auto moved = triangle_p1().translate(vec({-0.4, 0.1}));
  const auto r = psi_ehz(moved, shear);
  const auto b = BoundaryCondition::twisted(shear);
  CHECK(verify(reconstruct(moved, r, b), moved, b, r.value).passes());
}

TEST_CASE("four-dimensional certificates") {
  const auto p = product(square(), triangle_p1());
  const auto r = ehz(p);
  CHECK(verify(reconstruct(p, r, BoundaryCondition::closed()), p, BoundaryCondition::closed(), r.value)
            .passes());
  const auto b = BoundaryCondition::leafwise(2, 1);
  const auto rl = lr(p, 2, 1);
  CHECK(verify(reconstruct(p, rl, b), p, b, rl.value).passes());
}

TEST_CASE("flipped convention emits the same path") {
  const auto p = triangle_p1();
  SearchOptions flipped;
  flipped.convention = Convention::flipped;
  const auto r = ehz(p, flipped);
  const auto path = reconstruct(p, r, BoundaryCondition::closed(), Convention::flipped);
  const auto rep = verify(path, p, BoundaryCondition::closed(), r.value);
  CHECK(rep.passes());
  CHECK(rep.action == doctest::Approx(2.0));
}

TEST_CASE("verify flags broken paths") {
  const auto sq = square();
  const auto r = ehz(sq);
  auto path = reconstruct(sq, r, BoundaryCondition::closed());
  path.start += vec({0.1, 0});
  const auto rep = verify(path, sq, BoundaryCondition::closed(), r.value);
  CHECK(rep.facet_residual == doctest::Approx(0.1));
  CHECK(rep.outside_violation == doctest::Approx(0.1));
  CHECK_FALSE(rep.passes());

  auto twice = reconstruct(sq, r, BoundaryCondition::closed());
  twice.segments[1].facet = twice.segments[0].facet;
  CHECK_FALSE(verify(twice, sq, BoundaryCondition::closed(), r.value).facets_once);
}

TEST_CASE("inconsistent certificates are rejected") {
  const auto sq = square();
  auto r = ehz(sq);
  r.sigma = {0, 1, 2, 3};
  r.beta = vec({0.5, 0, 0.5, 0});
  try {
    reconstruct(sq, r, BoundaryCondition::closed());
    FAIL("expected reconstruction error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::reconstruction);
  }
  CHECK_THROWS_AS(reconstruct(sq, r, BoundaryCondition::leafwise(1, 0)), Error);
}
