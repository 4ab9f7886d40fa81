#include "symcap/capacity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "symcap/error.hpp"

namespace symcap {

std::string_view to_string(CapacityKind kind) {
  switch (kind) {
    case CapacityKind::ehz: return "ehz";
    case CapacityKind::psi_ehz: return "psi-ehz";
    case CapacityKind::lr: return "lr";
  }
  return "unknown";
}

namespace {

// Inner problem shared by the three formulas: for each sigma maximize
// scale * beta^T U_sigma beta + beta^T extra beta over {beta >= 0, A beta = b}.
struct InnerProblem {
  Mat eq_matrix;
  Vec eq_rhs;
  Mat extra;         // sigma-independent quadratic term (Psi boundary term)
  double scale = 1;  // 4 for the Psi formula
};

struct Candidate {
  bool valid = false;
  double objective = -std::numeric_limits<double>::infinity();
  Permutation sigma;
  Vec beta;
};

bool lex_less(const Permutation& a, const Permutation& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void absorb(Candidate& best, Candidate&& c, double tie) {
  if (!c.valid) return;
  if (!best.valid || c.objective > best.objective + tie ||
      (std::abs(c.objective - best.objective) <= tie && lex_less(c.sigma, best.sigma))) {
    best = std::move(c);
  }
}

Mat omega_table(const Polytope& p, Convention convention) {
  const auto f = static_cast<Eigen::Index>(p.facet_count());
  Mat w(f, f);
  for (Eigen::Index a = 0; a < f; ++a) {
    for (Eigen::Index b = 0; b < f; ++b) {
      w(a, b) = omega0(p.facets()[static_cast<std::size_t>(a)].normal,
                       p.facets()[static_cast<std::size_t>(b)].normal, convention);
    }
  }
  return w;
}

Candidate search(const Polytope& translated, const InnerProblem& inner, const SearchOptions& opts,
                 std::size_t& searched) {
  const int f = static_cast<int>(translated.facet_count());
  const PermutationStream stream(f, opts.mode, opts.perm_budget, opts.seed, opts.exhaustive_cap);
  const auto lattice = FaceLattice::build(inner.eq_matrix, inner.eq_rhs, opts.tol, opts.qp);
  searched = stream.size();
  if (lattice.empty()) return {};

  const Mat w = omega_table(translated, opts.convention);
  const Mat extra_sym = inner.extra + inner.extra.transpose();

  auto run_block = [&](std::size_t b) {
    Candidate best;
    std::vector<int> pos(static_cast<std::size_t>(f));
    Mat hessian(f, f);
    for (auto& sigma : stream.block(b)) {
      for (int i = 0; i < f; ++i) pos[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])] = i;
      for (int a = 0; a < f; ++a) {
        hessian(a, a) = extra_sym(a, a);
        for (int c = 0; c < a; ++c) {
          const double sign = pos[static_cast<std::size_t>(a)] > pos[static_cast<std::size_t>(c)] ? 1.0 : -1.0;
          const double h = inner.scale * sign * w(a, c) + extra_sym(a, c);
          hessian(a, c) = h;
          hessian(c, a) = h;
        }
      }
      auto sol = lattice.maximize_symmetric(hessian);
      if (!sol || !(sol->value > opts.tol.pos)) continue;
      absorb(best, Candidate{true, sol->value, std::move(sigma), std::move(sol->argmax)}, opts.tol.tie);
    }
    return best;
  };

  const std::size_t blocks = stream.block_count();
  std::vector<Candidate> per_block(blocks);
  const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) per_block[b] = run_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        try {
          for (std::size_t b = next++; b < blocks && !failed; b = next++) per_block[b] = run_block(b);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  Candidate best;
  for (auto& c : per_block) absorb(best, std::move(c), opts.tol.tie);
  return best;
}

Vec choose_translation(const Polytope& p, const std::optional<AffineSubspace>& subspace,
                       const SearchOptions& opts, const char* clause) {
  if (!opts.auto_translate) {
    if (!p.origin_interior(opts.tol.feas)) {
      fail(ErrorKind::hypothesis,
           std::string(clause) + " (translation disabled and the origin is not interior)");
    }
    return Vec::Zero(p.dim());
  }
  try {
    return interior_point(p, subspace, opts.tol);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::hypothesis) fail(ErrorKind::hypothesis, clause);
    throw;
  }
}

Vec heights_of(const Polytope& p) {
  Vec h(static_cast<Eigen::Index>(p.facet_count()));
  for (std::size_t i = 0; i < p.facet_count(); ++i) h(static_cast<Eigen::Index>(i)) = p.facets()[i].height;
  return h;
}

Mat j_normals(const Polytope& p) {
  Mat c(p.dim(), static_cast<Eigen::Index>(p.facet_count()));
  for (std::size_t i = 0; i < p.facet_count(); ++i) {
    c.col(static_cast<Eigen::Index>(i)) = apply_J(p.facets()[i].normal);
  }
  return c;
}

CapacityResult finish(CapacityKind kind, Candidate&& best, const Vec& translation,
                      const Polytope& translated, const SearchOptions& opts, std::size_t searched,
                      const char* empty_message) {
  if (!best.valid) fail(ErrorKind::infeasible, empty_message);
  CapacityResult r;
  r.kind = kind;
  r.sigma = std::move(best.sigma);
  r.beta = std::move(best.beta);
  r.objective = best.objective;
  r.mode = opts.mode;
  r.translation = translation;
  r.heights = heights_of(translated);
  r.permutations_searched = searched;
  r.v = Vec::Zero(translated.dim());
  return r;
}

}  // namespace

Mat objective_matrix(const Polytope& p, const Permutation& sigma, Convention convention) {
  const int f = static_cast<int>(p.facet_count());
  if (!is_permutation_of(sigma, f)) {
    fail(ErrorKind::invalid_permutation, "sigma is not a bijection on the facet labels");
  }
  Mat u = Mat::Zero(f, f);
  for (int i = 0; i < f; ++i) {
    for (int j = 0; j < i; ++j) {
      const int a = sigma[static_cast<std::size_t>(i)];
      const int b = sigma[static_cast<std::size_t>(j)];
      u(a, b) = omega0(p.facets()[static_cast<std::size_t>(a)].normal,
                       p.facets()[static_cast<std::size_t>(b)].normal, convention);
    }
  }
  return u;
}

CapacityResult ehz(const Polytope& p, const SearchOptions& opts) {
  const Vec t = choose_translation(p, std::nullopt, opts, "polytope has no interior point");
  const Polytope k = p.translate(t);
  const auto f = static_cast<Eigen::Index>(k.facet_count());
  InnerProblem inner;
  inner.eq_matrix.resize(1 + k.dim(), f);
  inner.eq_matrix.row(0) = heights_of(k).transpose();
  for (Eigen::Index i = 0; i < f; ++i) {
    inner.eq_matrix.block(1, i, k.dim(), 1) = k.facets()[static_cast<std::size_t>(i)].normal;
  }
  inner.eq_rhs = Vec::Zero(1 + k.dim());
  inner.eq_rhs(0) = 1.0;
  inner.extra = Mat::Zero(f, f);
  std::size_t searched = 0;
  auto best = search(k, inner, opts, searched);
  auto r = finish(CapacityKind::ehz, std::move(best), t, k, opts, searched,
                  "no permutation gives a positive objective");
  r.value = 1.0 / (2.0 * r.objective);
  return r;
}

CapacityResult psi_ehz(const Polytope& p, const SymplecticMatrix& psi, const SearchOptions& opts) {
  if (psi.dim() != p.dim()) fail(ErrorKind::invalid_dimension, "Psi and polytope dimensions differ");
  const auto fd = fixed_decomposition(psi, opts.tol.rank);
  const AffineSubspace fixed{Vec::Zero(p.dim()), fd.kernel_basis};
  const Vec t = choose_translation(p, fixed, opts, "no fixed point of Psi interior to K");
  const Polytope k = p.translate(t);
  const auto f = static_cast<Eigen::Index>(k.facet_count());
  const Mat c = 2.0 * j_normals(k);
  const auto rows = fd.image_complement.cols();
  InnerProblem inner;
  inner.eq_matrix.resize(1 + rows, f);
  inner.eq_matrix.row(0) = heights_of(k).transpose();
  inner.eq_matrix.bottomRows(rows) = fd.image_complement.transpose() * c;
  inner.eq_rhs = Vec::Zero(1 + rows);
  inner.eq_rhs(0) = 1.0;
  // v = G C beta; boundary term of the action <Psi v, J v>.
  const Mat gc = fd.shift_inverse * c;
  inner.extra = gc.transpose() * psi.matrix().transpose() * standard_J(k.dim()) * gc;
  inner.scale = 4.0;
  std::size_t searched = 0;
  auto best = search(k, inner, opts, searched);
  auto r = finish(CapacityKind::psi_ehz, std::move(best), t, k, opts, searched,
                  "M_Psi(K) is empty: no permutation gives a positive denominator");
  r.v = gc * r.beta;
  r.value = 2.0 / r.objective;
  return r;
}

CapacityResult lr(const Polytope& p, int n, int k, const SearchOptions& opts) {
  const CoisotropicFrame frame(n, k);
  if (p.dim() != frame.dim()) fail(ErrorKind::invalid_dimension, "polytope dimension is not 2n");
  const AffineSubspace coiso{Vec::Zero(p.dim()), frame.coisotropic_basis()};
  const Vec t = choose_translation(p, coiso, opts, "Int(K) does not meet R^{n,k}");
  const Polytope kk = p.translate(t);
  const auto f = static_cast<Eigen::Index>(kk.facet_count());
  const Mat c = j_normals(kk);
  const auto leaf = frame.leaf_coordinates();
  std::vector<int> outside;
  for (int i = 0; i < kk.dim(); ++i) {
    if (std::find(leaf.begin(), leaf.end(), i) == leaf.end()) outside.push_back(i);
  }
  InnerProblem inner;
  const auto rows = static_cast<Eigen::Index>(outside.size());
  inner.eq_matrix.resize(1 + rows, f);
  inner.eq_matrix.row(0) = heights_of(kk).transpose();
  for (Eigen::Index r = 0; r < rows; ++r) inner.eq_matrix.row(1 + r) = c.row(outside[static_cast<std::size_t>(r)]);
  inner.eq_rhs = Vec::Zero(1 + rows);
  inner.eq_rhs(0) = 1.0;
  inner.extra = Mat::Zero(f, f);
  std::size_t searched = 0;
  auto best = search(kk, inner, opts, searched);
  auto r = finish(CapacityKind::lr, std::move(best), t, kk, opts, searched,
                  "no permutation gives a positive objective on the leafwise constraint set");
  r.value = 1.0 / (2.0 * r.objective);
  r.frame_k = k;
  return r;
}

CutReport cut_experiment(const Polytope& p, const Vec& normal, double offset,
                         const SearchOptions& opts) {
  if (p.dim() != 2) fail(ErrorKind::invalid_dimension, "cut_experiment works on planar polytopes");
  if (normal.size() != 2) fail(ErrorKind::invalid_dimension, "line normal must be planar");
  const double norm = normal.norm();
  if (!(norm > 0.0)) fail(ErrorKind::malformed_input, "line normal must be nonzero");
  const Vec a = normal / norm;
  const double c = offset / norm;
  const double eps = opts.tol.feas;
  if (std::abs(a(0)) <= eps && std::abs(c) <= eps) {
    fail(ErrorKind::hypothesis, "hypothesis L != R^{1,0} fails: the line is the q-axis");
  }
  if (std::abs(a(0)) <= eps) {
    fail(ErrorKind::hypothesis,
         "hypothesis D n L n R^{1,0} != empty fails: the line is parallel to the q-axis");
  }
  Vec crossing(2);
  crossing << c / a(0), 0.0;
  for (const auto& f : p.facets()) {
    if (f.normal.dot(crossing) > f.height + eps * (1.0 + std::abs(f.height))) {
      fail(ErrorKind::hypothesis,
           "hypothesis D n L n R^{1,0} != empty fails: the line meets the q-axis outside D");
    }
  }
  std::pair<Polytope, Polytope> parts = [&] {
    try {
      return p.cut(a, c);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::degenerate_cut) {
        fail(ErrorKind::hypothesis, "hypothesis fails: the line does not pass through Int(D)");
      }
      throw;
    }
  }();
  Mat axis(2, 1);
  axis << 1.0, 0.0;
  const AffineSubspace q_axis{Vec::Zero(2), axis};
  const char* names[] = {"D_1", "D_2"};
  const Polytope* pieces[] = {&parts.first, &parts.second};
  for (int i = 0; i < 2; ++i) {
    if (!(max_slack_point(*pieces[i], q_axis, opts.tol).second > eps)) {
      fail(ErrorKind::hypothesis,
           std::string("hypothesis fails: part ") + names[i] + " has no interior point on R^{1,0}");
    }
  }
  CutReport report;
  report.whole = lr(p, 1, 0, opts);
  report.first = lr(parts.first, 1, 0, opts);
  report.second = lr(parts.second, 1, 0, opts);
  report.margin = report.whole.value - report.first.value - report.second.value;
  report.parts = {std::move(parts.first), std::move(parts.second)};
  return report;
}

}  // namespace symcap
