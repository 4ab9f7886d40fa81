#include "symcap/oracle2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "symcap/error.hpp"
#include "symcap/random.hpp"

namespace symcap {

double polygon_area(const Polytope& p) {
  if (p.dim() != 2) fail(ErrorKind::invalid_dimension, "polygon_area needs a planar polytope");
  const auto& vs = p.vertices();
  Vec c = Vec::Zero(2);
  for (const auto& v : vs) c += v;
  c /= static_cast<double>(vs.size());
  std::vector<std::pair<double, Vec>> ring;
  for (const auto& v : vs) ring.emplace_back(std::atan2(v(1) - c(1), v(0) - c(0)), v - c);
  std::sort(ring.begin(), ring.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Vec& a = ring[i].second;
    const Vec& b = ring[(i + 1) % ring.size()].second;
    twice += a(0) * b(1) - a(1) * b(0);
  }
  return 0.5 * std::abs(twice);
}

double lr_oracle(const Polytope& p, const Tolerances& tol) {
  if (p.dim() != 2) fail(ErrorKind::invalid_dimension, "lr_oracle needs a planar polytope");
  Mat axis(2, 1);
  axis << 1.0, 0.0;
  if (!(max_slack_point(p, AffineSubspace{Vec::Zero(2), axis}, tol).second > tol.feas)) {
    fail(ErrorKind::hypothesis, "Int(K) does not meet R^{n,k}");
  }
  Vec up(2);
  up << 0.0, 1.0;
  const auto [lower, upper] = p.cut(up, 0.0);
  return std::min(polygon_area(lower), polygon_area(upper));
}

double ehz_oracle_2d(const Polytope& p) { return polygon_area(p); }

namespace {

constexpr std::size_t kShards = 16;

// Constraint system and objective built directly from the definitions,
// without the face lattice or the objective matrices of the solver.
struct Oracle {
  int f = 0;
  Mat normals;   // columns n_i
  Vec heights;
  Mat eq;        // rows of the linear constraints
  Vec rhs;
  Mat omega;     // omega0(n_a, n_b)
  std::optional<FixedDecomposition> fd;
  std::optional<SymplecticMatrix> psi;
  std::vector<Vec> vertices;

  double value(const Permutation& sigma, const Vec& beta) const {
    double q = 0.0;
    for (int i = 0; i < f; ++i) {
      const int a = sigma[static_cast<std::size_t>(i)];
      if (beta(a) == 0.0) continue;
      for (int j = 0; j < i; ++j) {
        const int b = sigma[static_cast<std::size_t>(j)];
        q += beta(a) * beta(b) * omega(a, b);
      }
    }
    if (!psi) return q;
    Vec w = Vec::Zero(normals.rows());
    for (int i = 0; i < f; ++i) w += 2.0 * beta(i) * apply_J(normals.col(i));
    const auto v = solve_fixed_shift(*fd, w, 1e-7);
    if (!v) return -std::numeric_limits<double>::infinity();
    return 4.0 * q + omega0(psi->matrix() * *v, *v);
  }
};

std::vector<Vec> basic_solutions(const Mat& eq, const Vec& rhs, double feas) {
  const int m = static_cast<int>(eq.cols());
  const int r = numerical_rank(eq);
  std::vector<Vec> out;
  for_each_combination(m, r, [&](const std::vector<int>& idx) {
    Mat sub(eq.rows(), r);
    for (int j = 0; j < r; ++j) sub.col(j) = eq.col(idx[static_cast<std::size_t>(j)]);
    if (numerical_rank(sub) < r) return true;
    const Vec x = sub.colPivHouseholderQr().solve(rhs);
    if ((sub * x - rhs).norm() > feas * (1.0 + rhs.norm())) return true;
    if (x.minCoeff() < -feas) return true;
    Vec full = Vec::Zero(m);
    for (int j = 0; j < r; ++j) full(idx[static_cast<std::size_t>(j)]) = std::max(0.0, x(j));
    for (const auto& v : out) {
      if ((v - full).cwiseAbs().maxCoeff() <= feas) return true;
    }
    out.push_back(full);
    return true;
  });
  return out;
}

Oracle build(const Polytope& raw, const DenseSearchMode& mode, const Tolerances& tol) {
  std::optional<AffineSubspace> sub;
  std::optional<FixedDecomposition> fd;
  std::optional<CoisotropicFrame> frame;
  if (mode.kind == CapacityKind::psi_ehz) {
    if (!mode.psi) fail(ErrorKind::precondition, "psi mode without Psi");
    fd = fixed_decomposition(*mode.psi, tol.rank);
    sub = AffineSubspace{Vec::Zero(raw.dim()), fd->kernel_basis};
  } else if (mode.kind == CapacityKind::lr) {
    frame.emplace(mode.n, mode.k);
    sub = AffineSubspace{Vec::Zero(raw.dim()), frame->coisotropic_basis()};
  }
  const Polytope p = raw.translate(interior_point(raw, sub, tol));

  Oracle o;
  o.f = static_cast<int>(p.facet_count());
  const int dim = p.dim();
  o.normals.resize(dim, o.f);
  o.heights.resize(o.f);
  o.omega.resize(o.f, o.f);
  for (int i = 0; i < o.f; ++i) {
    o.normals.col(i) = p.facets()[static_cast<std::size_t>(i)].normal;
    o.heights(i) = p.facets()[static_cast<std::size_t>(i)].height;
  }
  for (int a = 0; a < o.f; ++a) {
    for (int b = 0; b < o.f; ++b) o.omega(a, b) = omega0(o.normals.col(a), o.normals.col(b));
  }
  Mat jn(dim, o.f);
  for (int i = 0; i < o.f; ++i) jn.col(i) = apply_J(o.normals.col(i));

  Mat extra;
  switch (mode.kind) {
    case CapacityKind::ehz:
      extra = o.normals;
      break;
    case CapacityKind::psi_ehz:
      // 2 sum beta_i J n_i must lie in Im(Psi - I).
      extra = fd->image_complement.transpose() * jn;
      o.fd = fd;
      o.psi = mode.psi;
      break;
    case CapacityKind::lr: {
      const auto leaf = frame->leaf_coordinates();
      std::vector<int> rows;
      for (int i = 0; i < dim; ++i) {
        if (std::find(leaf.begin(), leaf.end(), i) == leaf.end()) rows.push_back(i);
      }
      extra.resize(static_cast<Eigen::Index>(rows.size()), o.f);
      for (std::size_t r = 0; r < rows.size(); ++r) extra.row(static_cast<Eigen::Index>(r)) = jn.row(rows[r]);
      break;
    }
  }
  o.eq.resize(1 + extra.rows(), o.f);
  o.eq.row(0) = o.heights.transpose();
  o.eq.bottomRows(extra.rows()) = extra;
  o.rhs = Vec::Zero(o.eq.rows());
  o.rhs(0) = 1.0;
  o.vertices = basic_solutions(o.eq, o.rhs, tol.feas);
  if (o.vertices.empty()) fail(ErrorKind::infeasible, "constraint polytope is empty");
  return o;
}

Permutation shuffled(int f, Rng& rng) {
  Permutation s(static_cast<std::size_t>(f));
  std::iota(s.begin(), s.end(), 0);
  for (int i = f - 1; i > 0; --i) {
    std::swap(s[static_cast<std::size_t>(i)], s[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }
  return s;
}

// Random barycentric weights over the vertex list: uniform on the simplex
// or on a random small face of it, which reaches edge midpoints often.
Vec weights(std::size_t count, Rng& rng) {
  Vec lambda = Vec::Zero(static_cast<Eigen::Index>(count));
  if (count > 1 && rng.uniform() < 0.5) {
    const std::size_t picks = 1 + rng.below(std::min<std::size_t>(count, 3));
    for (std::size_t i = 0; i < picks; ++i) lambda(static_cast<Eigen::Index>(rng.below(count))) += rng.exponential();
  } else {
    for (std::size_t i = 0; i < count; ++i) lambda(static_cast<Eigen::Index>(i)) = rng.exponential();
  }
  return lambda / lambda.sum();
}

Vec combine(const Oracle& o, const Vec& lambda) {
  Vec beta = Vec::Zero(o.f);
  for (std::size_t i = 0; i < o.vertices.size(); ++i) beta += lambda(static_cast<Eigen::Index>(i)) * o.vertices[i];
  return beta;
}

struct Sample {
  double value = -std::numeric_limits<double>::infinity();
  Permutation sigma;
  Vec lambda;
};

// Random-direction hill climbing in barycentric coordinates with a
// shrinking step; every iterate stays a convex combination of vertices.
double refine(const Oracle& o, Sample s, Rng& rng, int steps) {
  double step = 0.25;
  const auto count = static_cast<std::size_t>(s.lambda.size());
  for (int it = 0; it < steps && step > 1e-12; ++it) {
    Vec trial = s.lambda;
    const auto i = static_cast<Eigen::Index>(rng.below(count));
    const auto j = static_cast<Eigen::Index>(rng.below(count));
    if (i == j) continue;
    const double moved = std::min(trial(i), step * rng.uniform());
    trial(i) -= moved;
    trial(j) += moved;
    const double v = o.value(s.sigma, combine(o, trial));
    if (v > s.value) {
      s.value = v;
      s.lambda = trial;
      step = std::min(0.5, step * 1.5);
    } else {
      step *= 0.97;
    }
  }
  return s.value;
}

}  // namespace

double dense_search(const Polytope& p, const DenseSearchMode& mode, const DenseSearchOptions& opts) {
  const Oracle o = build(p, mode, opts.tol);
  const std::size_t per_shard = (opts.samples + kShards - 1) / kShards;

  auto run_shard = [&](std::size_t shard) {
    Rng rng(mix_seed(opts.seed ^ mix_seed(shard + 1)));
    constexpr std::size_t keep = 4;
    std::vector<Sample> top;
    for (std::size_t s = 0; s < per_shard; ++s) {
      Sample cand{0.0, shuffled(o.f, rng), weights(o.vertices.size(), rng)};
      cand.value = o.value(cand.sigma, combine(o, cand.lambda));
      if (top.size() < keep || cand.value > top.back().value) {
        top.push_back(std::move(cand));
        std::sort(top.begin(), top.end(), [](const Sample& a, const Sample& b) { return a.value > b.value; });
        if (top.size() > keep) top.pop_back();
      }
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& t : top) best = std::max(best, refine(o, t, rng, 400));
    return best;
  };

  std::vector<double> results(kShards, -std::numeric_limits<double>::infinity());
  const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(kShards)));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t s = t; s < kShards; s += workers) results[s] = run_shard(s);
    });
  }
  for (auto& th : pool) th.join();
  return *std::max_element(results.begin(), results.end());
}

}  // namespace symcap
