#include "doctest.h"

#include "fixtures.hpp"
#include "symcap/capacity.hpp"
#include "symcap/error.hpp"
#include "symcap/oracle2d.hpp"

using namespace symcap;
using namespace symcap::testing;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::validation;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

void check_ehz_certificate(const Polytope& p, const CapacityResult& r) {
  const Polytope k = p.translate(r.translation);
  Vec h(static_cast<Eigen::Index>(k.facet_count()));
  Vec sum_n = Vec::Zero(k.dim());
  for (std::size_t i = 0; i < k.facet_count(); ++i) {
    h(static_cast<Eigen::Index>(i)) = k.facets()[i].height;
    sum_n += r.beta(static_cast<Eigen::Index>(i)) * k.facets()[i].normal;
  }
  CHECK(r.beta.minCoeff() >= 0.0);
  CHECK(r.beta.dot(h) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sum_n.norm() <= 1e-9);
  CHECK(r.value == doctest::Approx(1.0 / (2.0 * r.objective)));
  const Mat u = objective_matrix(p, r.sigma);
  CHECK(r.beta.dot(u * r.beta) == doctest::Approx(r.objective).epsilon(1e-12));
}

}  // namespace

TEST_CASE("objective matrix") {
  const auto sq = square();
  const Permutation id{0, 1, 2, 3};
  const Mat u = objective_matrix(sq, id);
  // beta_2 beta_1 couples through omega0(n_2, n_1) = omega0((0,1), (1,0)) = +1.
  CHECK(u(1, 0) == 1.0);
  CHECK(u(0, 1) == 0.0);

  Rng rng(2);
  const auto p = random_polygon(rng, 6);
  const Permutation sigma{3, 0, 5, 1, 4, 2};
  const Permutation reversed(sigma.rbegin(), sigma.rend());
  const Mat a = objective_matrix(p, sigma);
  const Mat b = objective_matrix(p, reversed);
  for (int trial = 0; trial < 10; ++trial) {
    Vec beta(6);
    for (int i = 0; i < 6; ++i) beta(i) = rng.uniform();
    CHECK(beta.dot(b * beta) == doctest::Approx(-beta.dot(a * beta)));
  }
  // Relabelling only moves entries: same multiset of absolute values.
  std::vector<double> va(a.data(), a.data() + a.size()), vb(b.data(), b.data() + b.size());
  for (auto& x : va) x = std::abs(x);
  for (auto& x : vb) x = std::abs(x);
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  for (std::size_t i = 0; i < va.size(); ++i) CHECK(va[i] == doctest::Approx(vb[i]));

  CHECK(kind_of([&] { objective_matrix(sq, {0, 0, 1, 2}); }) == ErrorKind::invalid_permutation);
  CHECK(kind_of([&] { objective_matrix(sq, {0, 1, 2}); }) == ErrorKind::invalid_permutation);
}

TEST_CASE("ehz fixtures") {
  const auto sq = square();
  const auto r = ehz(sq);
  CHECK(r.value == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r.objective == doctest::Approx(0.125));
  CHECK(r.beta.isApprox(Vec::Constant(4, 0.25)));
  CHECK(r.permutations_searched == 24);
  check_ehz_certificate(sq, r);

  CHECK(ehz(sq.scale(3.0)).value == doctest::Approx(36.0).epsilon(1e-12));
  CHECK(ehz(sq.translate(vec({0.3, -0.2}))).value == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(ehz(triangle_p1()).value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("ehz agrees with area on random polygons and respects inclusion") {
  Rng rng(8);
  for (int trial = 0; trial < 8; ++trial) {
    const auto p = random_polygon(rng, 4 + trial % 4);
    const auto r = ehz(p);
    CHECK(rel(r.value, polygon_area(p)) <= 1e-9);
    check_ehz_certificate(p, r);
    const auto bigger = p.scale(1.0 + rng.uniform(0.0, 0.5));
    CHECK(r.value <= ehz(bigger).value + 1e-9);
  }
}

TEST_CASE("psi_ehz") {
  const auto sq = square();
  CHECK(psi_ehz(sq, SymplecticMatrix::identity(2)).value == doctest::Approx(4.0).epsilon(1e-12));

  const auto rot = psi_ehz(sq, psi_rotation());
  CHECK(rot.value <= ehz(sq).value + 1e-9);
  const Vec w = [&] {
    Vec acc = Vec::Zero(2);
    const Polytope k = sq.translate(rot.translation);
    for (std::size_t i = 0; i < k.facet_count(); ++i) {
      acc += 2.0 * rot.beta(static_cast<Eigen::Index>(i)) * apply_J(k.facets()[i].normal);
    }
    return acc;
  }();
  CHECK((psi_rotation().matrix() * rot.v - rot.v - w).norm() <= 1e-9);
  CHECK(rot.value == doctest::Approx(2.0 / rot.objective));

  const double minus = psi_ehz(sq, psi_minus_identity()).value;
  CHECK(dense_search(sq, DenseSearchMode::twisted(psi_minus_identity()), {20000, 1}) <=
        2.0 / minus + 1e-12);

  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_polygon(rng, 5);
    CHECK(rel(psi_ehz(p, SymplecticMatrix::identity(2)).value, ehz(p).value) <= 1e-9);
  }
}

TEST_CASE("psi_ehz hypothesis gate") {
  Mat s(2, 2);
  s << 1, 0, 1, 1;  // fixes the p-axis only
  const auto shear = SymplecticMatrix::validate(s);
  const auto away = square().translate(vec({-2, 0}));  // [1, 3] x [-1, 1]
  try {
    psi_ehz(away, shear);
    FAIL("expected hypothesis error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::hypothesis);
    CHECK(std::string(e.what()).find("fixed point") != std::string::npos);
  }
  CHECK_NOTHROW(psi_ehz(square(), shear));
  CHECK(kind_of([] { psi_ehz(square(), SymplecticMatrix::identity(4)); }) ==
        ErrorKind::invalid_dimension);
}

TEST_CASE("lr fixtures") {
  CHECK(lr(square(), 1, 0).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lr(triangle_p1(), 1, 0).value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(lr(triangle_p2(), 1, 0).value == doctest::Approx(0.5).epsilon(1e-12));
  for (double t : {-0.6, 0.0, 0.3}) {
    CHECK(lr(slab_right(t), 1, 0).value == doctest::Approx(1.0 - t).epsilon(1e-12));
    CHECK(lr(slab_left(t), 1, 0).value == doctest::Approx(1.0 + t).epsilon(1e-12));
  }
  const auto r = lr(square(), 1, 0);
  Vec jsum = Vec::Zero(2);
  const Polytope k = square().translate(r.translation);
  for (std::size_t i = 0; i < 4; ++i) jsum += r.beta(static_cast<Eigen::Index>(i)) * apply_J(k.facets()[i].normal);
  CHECK(coisotropic_membership(jsum, CoisotropicFrame(1, 0), FrameSubspace::leaf));
  CHECK(r.frame_k == 0);

  CHECK(kind_of([] { lr(square(), 1, 1); }) == ErrorKind::invalid_frame);
  CHECK(kind_of([] { lr(square(), 2, 0); }) == ErrorKind::invalid_dimension);
  CHECK(kind_of([] { lr(square().translate(vec({0, 3})), 1, 0); }) == ErrorKind::hypothesis);
}

TEST_CASE("lr in four dimensions") {
  const auto p = product(square(), square());
  const auto r0 = lr(p, 2, 0);
  const auto r1 = lr(p, 2, 1);
  CHECK(r0.value > 0.0);
  CHECK(r1.value > 0.0);
  CHECK(lr(p.scale(2.0), 2, 1).value == doctest::Approx(4.0 * r1.value).epsilon(1e-9));
}

TEST_CASE("scaling and translation invariance") {
  const auto sq = square();
  const auto p1 = triangle_p1();
  for (double lambda : {0.5, 2.0, 3.0}) {
    CHECK(rel(ehz(p1.scale(lambda)).value, lambda * lambda * ehz(p1).value) <= 1e-9);
    CHECK(rel(lr(p1.scale(lambda), 1, 0).value, lambda * lambda * 0.5) <= 1e-9);
    CHECK(rel(psi_ehz(sq.scale(lambda), psi_rotation()).value,
              lambda * lambda * psi_ehz(sq, psi_rotation()).value) <= 1e-9);
  }
  CHECK(rel(lr(p1.translate(vec({0.4, 0})), 1, 0).value, 0.5) <= 1e-9);
  Mat s(2, 2);
  s << 1, 1, 0, 1;  // fixes the q-axis
  const auto shear = SymplecticMatrix::validate(s);
  CHECK(rel(psi_ehz(sq.translate(vec({0.35, 0})), shear).value, psi_ehz(sq, shear).value) <= 1e-9);
}

TEST_CASE("convention flip leaves values unchanged and reverses sigma") {
  SearchOptions flipped;
  flipped.convention = Convention::flipped;
  const auto a = ehz(triangle_p1());
  const auto b = ehz(triangle_p1(), flipped);
  CHECK(rel(a.value, b.value) <= 1e-12);
  CHECK(rel(lr(square(), 1, 0).value, lr(square(), 1, 0, flipped).value) <= 1e-12);
  CHECK(rel(psi_ehz(square(), psi_rotation()).value, psi_ehz(square(), psi_rotation(), flipped).value) <=
        1e-12);
  const Mat ua = objective_matrix(triangle_p1(), a.sigma);
  const Mat ub = objective_matrix(triangle_p1(), b.sigma, Convention::flipped);
  CHECK(a.beta.dot(ua * a.beta) == doctest::Approx(b.beta.dot(ub * b.beta)));
}

TEST_CASE("random permutation mode is an upper bound") {
  Rng rng(30);
  for (int trial = 0; trial < 4; ++trial) {
    const auto p = random_polygon(rng, 7);
    SearchOptions opts;
    opts.mode = PermutationMode::random;
    opts.perm_budget = 40;
    opts.seed = static_cast<std::uint64_t>(trial);
    const auto r = ehz(p, opts);
    CHECK(r.value >= ehz(p).value - 1e-12);
    CHECK(r.permutations_searched == 40);
  }
  SearchOptions capped;
  capped.exhaustive_cap = 3;
  CHECK(kind_of([&] { ehz(square(), capped); }) == ErrorKind::budget);
}

TEST_CASE("thread count does not change results") {
  const auto p = product(square(), triangle_p1());
  SearchOptions one;
  SearchOptions many;
  many.threads = 4;
  const auto a = ehz(p, one);
  const auto b = ehz(p, many);
  CHECK(a.value == b.value);
  CHECK(a.sigma == b.sigma);
  CHECK(a.beta == b.beta);
}

TEST_CASE("translation disabled requires an interior origin") {
  SearchOptions fixed;
  fixed.auto_translate = false;
  CHECK(ehz(square(), fixed).value == doctest::Approx(4.0));
  CHECK(kind_of([&] { ehz(slab_right(0.3), fixed); }) == ErrorKind::hypothesis);
}

TEST_CASE("cut experiment") {
  const auto diag = cut_experiment(square(), vec({1, -1}), 0.0);
  CHECK(diag.whole.value == doctest::Approx(2.0));
  CHECK(diag.first.value == doctest::Approx(0.5));
  CHECK(diag.second.value == doctest::Approx(0.5));
  CHECK(diag.margin == doctest::Approx(1.0));
  REQUIRE(diag.parts.size() == 2);

  const auto slab = cut_experiment(square(), vec({1, 0}), 0.3);
  CHECK(slab.first.value == doctest::Approx(1.3));
  CHECK(slab.second.value == doctest::Approx(0.7));
  CHECK(std::abs(slab.margin) <= 1e-9);

  auto clause = [](const Vec& n, double c) {
    try {
      cut_experiment(square(), n, c);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::hypothesis);
      return std::string(e.what());
    }
    FAIL("expected hypothesis error");
    return std::string();
  };
  CHECK(clause(vec({0, 1}), 2.0).find("D n L n R^{1,0}") != std::string::npos);
  CHECK(clause(vec({0, 1}), 0.0).find("q-axis") != std::string::npos);
  CHECK(clause(vec({1, 0}), 5.0).find("outside D") != std::string::npos);
  CHECK(kind_of([] { cut_experiment(product(square(), square()), vec({1, 0, 0, 0}), 0.0); }) ==
        ErrorKind::invalid_dimension);
}
