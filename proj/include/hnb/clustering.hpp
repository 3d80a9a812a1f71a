#ifndef HNB_CLUSTERING_HPP
#define HNB_CLUSTERING_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "hnb/eigsolve.hpp"
#include "hnb/hsbm.hpp"
#include "hnb/hypergraph.hpp"
#include "hnb/operators.hpp"
#include "hnb/rng.hpp"

namespace hnb {

struct Clustering {
  LabelVector labels;
  double kmeans_objective = 0.0;
  double variance_explained = 0.0;
  std::optional<double> ari;
  bool degenerate = false;  // set when no usable eigenpairs were found
  int embedding_columns = 0;
};

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// x-bar: per-node sum of u over all pointed edges pointed at the node
inline Eigen::VectorXd aggregate_B_raw(const Hypergraph& H, const Eigen::VectorXcd& u) {
  if (static_cast<std::size_t>(u.size()) != H.pointed_count())
    throw DataError("aggregate_B_eigvec: length mismatch");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(H.n());
  for (int k : H.sizes()) {
    const auto& list = H.edges(k);
    for (std::size_t e = 0; e < list.size(); ++e)
      for (Node i : list[e]) x[i] += u[static_cast<Eigen::Index>(H.pointed_index({i, {k, e}}))].real();
  }
  return x;
}

inline Eigen::VectorXd aggregate_B_eigvec(const Hypergraph& H, const Eigen::VectorXcd& u) {
  Eigen::VectorXd x = aggregate_B_raw(H, u);
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = sgn(x[i]);
  return x;
}

// sign(sum_k x1) per node and group, from an eigenvector of J (group-major
// over pointed edges)
inline Eigen::MatrixXd aggregate_J_eigvec(const Hypergraph& H, const Eigen::VectorXcd& u,
                                          int ell) {
  const std::size_t mc = H.pointed_count();
  if (static_cast<std::size_t>(u.size()) != static_cast<std::size_t>(ell) * mc)
    throw DataError("aggregate_J_eigvec: length mismatch");
  Eigen::MatrixXd X(H.n(), ell);
  for (int s = 0; s < ell; ++s) {
    Eigen::VectorXd xs =
        aggregate_B_raw(H, u.segment(static_cast<Eigen::Index>(s) * mc, mc));
    for (Eigen::Index i = 0; i < xs.size(); ++i) X(i, s) = sgn(xs[i]);
  }
  return X;
}

namespace detail {

inline double sq_dist(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  return (a - b).squaredNorm();
}

}  // namespace detail

struct KMeansResult {
  LabelVector labels;
  double objective = 0.0;
};

// Lloyd's algorithm with k-means++ seeding, best of `restarts` runs by
// objective. Empty clusters are re-seeded with the point farthest from its
// centroid. Deterministic given seed.
inline KMeansResult kmeans(const Eigen::MatrixXd& points, int ell, int restarts,
                           std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  if (ell < 1 || static_cast<Eigen::Index>(ell) > n)
    throw std::invalid_argument("kmeans: need 1 <= ell <= n");
  KMeansResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int run = 0; run < restarts; ++run) {
    Rng rng(derive_seed(seed, 0x6b6d, static_cast<std::uint64_t>(run)));
    Eigen::MatrixXd centers(ell, points.cols());
    centers.row(0) = points.row(static_cast<Eigen::Index>(rng.below(n)));
    Eigen::VectorXd d2 = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    for (int c = 1; c < ell; ++c) {
      for (Eigen::Index i = 0; i < n; ++i)
        d2[i] = std::min(d2[i], detail::sq_dist(points.row(i), centers.row(c - 1)));
      double total = d2.sum();
      Eigen::Index pick = 0;
      if (total > 0.0) {
        double u = rng.uniform() * total;
        for (Eigen::Index i = 0; i < n; ++i) {
          u -= d2[i];
          if (u < 0.0) {
            pick = i;
            break;
          }
          pick = i;
        }
      } else {
        pick = static_cast<Eigen::Index>(rng.below(n));
      }
      centers.row(c) = points.row(pick);
    }

    std::vector<int> assign(n, 0);
    double obj = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      bool changed = false;
      obj = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        int bestc = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (int c = 0; c < ell; ++c) {
          const double d = detail::sq_dist(points.row(i), centers.row(c));
          if (d < bd) {
            bd = d;
            bestc = c;
          }
        }
        if (assign[i] != bestc) {
          assign[i] = bestc;
          changed = true;
        }
        obj += bd;
      }
      if (!changed && iter > 0) break;
      Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(ell, points.cols());
      std::vector<Eigen::Index> cnt(ell, 0);
      for (Eigen::Index i = 0; i < n; ++i) {
        sums.row(assign[i]) += points.row(i);
        ++cnt[assign[i]];
      }
      for (int c = 0; c < ell; ++c) {
        if (cnt[c] > 0) {
          centers.row(c) = sums.row(c) / static_cast<double>(cnt[c]);
        } else {
          Eigen::Index far = 0;
          double fd = -1.0;
          for (Eigen::Index i = 0; i < n; ++i) {
            const double d = detail::sq_dist(points.row(i), centers.row(assign[i]));
            if (d > fd) {
              fd = d;
              far = i;
            }
          }
          centers.row(c) = points.row(far);
        }
      }
    }
    if (obj < best.objective) {
      best.objective = obj;
      best.labels.assign(assign.begin(), assign.end());
    }
  }
  return best;
}

// Hubert-Arabie adjusted Rand index; 0 when the adjustment denominator
// vanishes (e.g. both partitions constant)
inline double adjusted_rand_index(const LabelVector& z1, const LabelVector& z2) {
  if (z1.size() != z2.size()) throw DataError("adjusted_rand_index: length mismatch");
  const std::size_t n = z1.size();
  if (n == 0) return 0.0;
  int l1 = 0, l2 = 0;
  for (int v : z1) l1 = std::max(l1, v + 1);
  for (int v : z2) l2 = std::max(l2, v + 1);
  Eigen::MatrixXd cont = Eigen::MatrixXd::Zero(l1, l2);
  for (std::size_t i = 0; i < n; ++i) cont(z1[i], z2[i]) += 1.0;
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (int a = 0; a < l1; ++a) sum_a += choose2(cont.row(a).sum());
  for (int b = 0; b < l2; ++b) sum_b += choose2(cont.col(b).sum());
  for (int a = 0; a < l1; ++a)
    for (int b = 0; b < l2; ++b) sum_ij += choose2(cont(a, b));
  const double total = choose2(static_cast<double>(n));
  const double expected = sum_a * sum_b / total;
  const double denom = 0.5 * (sum_a + sum_b) - expected;
  if (denom == 0.0) return 0.0;
  return (sum_ij - expected) / denom;
}

namespace detail {

inline double variance_explained(const Eigen::MatrixXd& X, double sse) {
  const Eigen::RowVectorXd mean = X.colwise().mean();
  double total = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) total += (X.row(i) - mean).squaredNorm();
  return total > 0.0 ? 1.0 - sse / total : 0.0;
}

}  // namespace detail

// Algorithm 1: embed nodes by the sign-aggregated leading h eigenvectors of
// B' and k-means them into ell groups.
inline Clustering nbhsc(const Hypergraph& H, int ell, std::size_t h, std::uint64_t seed,
                        const LabelVector* truth = nullptr, EigOptions eig_opts = {}) {
  if (H.pointed_count() == 0) throw DataError("nbhsc: empty hypergraph");
  const SparseLinearOperator Bp = build_Bprime(H);
  eig_opts.seed = derive_seed(seed, 0xb9);
  const std::size_t hh = std::min<std::size_t>(h, static_cast<std::size_t>(Bp.rows()) - 2);
  Spectrum S = leading_eigenpairs(Bp, std::max<std::size_t>(hh, 1), eig_opts);
  const std::size_t kappa = H.kappa();
  const std::size_t n = H.n();
  const std::size_t ncols = std::min<std::size_t>(S.pairs.size(), h);
  Eigen::MatrixXd X(n, ncols);
  for (std::size_t j = 0; j < ncols; ++j) {
    const Eigen::VectorXcd& v = S.pairs[j].vector;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t a = 0; a < kappa; ++a)
        acc += v[static_cast<Eigen::Index>(a * n + i)].real();
      X(i, j) = sgn(acc);
    }
  }
  KMeansResult km = kmeans(X, ell, 20, derive_seed(seed, 0x6b));
  Clustering out;
  out.labels = km.labels;
  out.kmeans_objective = km.objective;
  out.variance_explained = detail::variance_explained(X, km.objective);
  out.embedding_columns = static_cast<int>(ncols);
  if (truth) out.ari = adjusted_rand_index(km.labels, *truth);
  return out;
}

// One BPHSC round: estimate G (unless provided), build J', select the leading
// h real eigenpairs above the unit-magnitude floor, embed via block-1 signs,
// k-means. Falls back to z0 with the degenerate flag when nothing passes.
inline Clustering bphsc_step(const Hypergraph& H, const LabelVector& z0, int ell, std::size_t h,
                             std::uint64_t seed, const GroupMatrixSet* known = nullptr,
                             const LabelVector* truth = nullptr, EigOptions eig_opts = {}) {
  const GroupMatrixSet G = known ? *known : estimate_parameters(H, z0, ell).G;
  Clustering fallback;
  fallback.labels = z0;
  fallback.degenerate = true;
  if (truth) fallback.ari = adjusted_rand_index(z0, *truth);
  bool all_zero = true;
  for (const auto& [k, Gk] : G.G)
    if (!Gk.isZero(1e-14)) all_zero = false;
  if (all_zero || G.G.empty()) return fallback;

  const SparseLinearOperator Jp = build_Jprime(H, G);
  eig_opts.seed = derive_seed(seed, 0x4a);
  const std::size_t dim = static_cast<std::size_t>(Jp.rows());
  const std::size_t ask = std::min<std::size_t>(2 * h + 8, dim >= 3 ? dim - 2 : 1);
  Spectrum S = leading_eigenpairs(Jp, std::max<std::size_t>(ask, 1), eig_opts);
  // leading real-eigenvalue eigenvectors, no magnitude floor: early rounds
  // must be able to pick up weak (sub-bulk) signal to bootstrap the iteration
  Spectrum sel = select_real_eigenpairs(S, h, 1e-6, 0.0);
  if (sel.pairs.empty()) return fallback;

  const std::size_t kappa = H.kappa();
  const std::size_t n = H.n();
  Eigen::MatrixXd X(n, sel.pairs.size() * ell);
  for (std::size_t j = 0; j < sel.pairs.size(); ++j) {
    const Eigen::VectorXcd& v = sel.pairs[j].vector;
    for (int s = 0; s < ell; ++s)
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t a = 0; a < kappa; ++a)
          acc += v[static_cast<Eigen::Index>((static_cast<std::size_t>(s) * kappa + a) * n + i)]
                     .real();
        X(i, j * ell + s) = sgn(acc);
      }
  }
  KMeansResult km = kmeans(X, ell, 20, derive_seed(seed, 0x6b));
  Clustering out;
  out.labels = km.labels;
  out.kmeans_objective = km.objective;
  out.variance_explained = detail::variance_explained(X, km.objective);
  out.embedding_columns = static_cast<int>(X.cols());
  if (truth) out.ari = adjusted_rand_index(km.labels, *truth);
  return out;
}

enum class BphscInit { random, provided, known_params };

// Algorithm 2, alternating variant: iterate bphsc_step and keep the round
// with the lowest k-means objective. known_params mode skips estimation.
inline Clustering bphsc(const Hypergraph& H, int ell, std::size_t h, int rounds,
                        std::uint64_t seed, BphscInit init = BphscInit::random,
                        const LabelVector* z0 = nullptr, const LabelVector* truth = nullptr,
                        const GroupMatrixSet* known = nullptr, EigOptions eig_opts = {}) {
  if (rounds < 1) throw std::invalid_argument("bphsc: rounds < 1");
  if (init == BphscInit::known_params && !known)
    throw std::invalid_argument("bphsc: known_params init requires G");
  LabelVector z;
  if (init == BphscInit::provided) {
    if (!z0) throw std::invalid_argument("bphsc: provided init requires z0");
    z = *z0;
  } else {
    Rng rng(derive_seed(seed, 0x2a));
    z.resize(H.n());
    for (auto& v : z) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(ell)));
  }
  std::optional<Clustering> best;
  Clustering last;
  last.labels = z;
  last.degenerate = true;
  for (int r = 0; r < rounds; ++r) {
    Clustering step =
        bphsc_step(H, z, ell, h, derive_seed(seed, 0x57e9, static_cast<std::uint64_t>(r)),
                   init == BphscInit::known_params ? known : nullptr, truth, eig_opts);
    last = step;
    if (!step.degenerate) {
      z = step.labels;
      if (!best || step.kmeans_objective < best->kmeans_objective) best = step;
    }
  }
  return best ? *best : last;
}

}  // namespace hnb

#endif
