#ifndef HNB_EIGSOLVE_HPP
#define HNB_EIGSOLVE_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hnb/operators.hpp"
#include "hnb/rng.hpp"
#include "hnb/sparse.hpp"

namespace hnb {

struct EigenPair {
  std::complex<double> value;
  Eigen::VectorXcd vector;
  double residual = 0.0;
};

struct Spectrum {
  std::vector<EigenPair> pairs;  // descending |value|
  double bulk_radius = 0.0;      // sqrt(|lambda_1|)
  int restarts = 0;
  bool used_dense = false;
};

struct EigOptions {
  double tol = 1e-8;
  int max_restarts = 400;
  std::uint64_t seed = 0x5eedULL;
  Eigen::Index dense_limit = 600;
  Eigen::Index dense_fallback_limit = 4000;  // dense retry on non-convergence
  int subspace = 0;                          // 0 = auto: max(2h+10, 30)
};

namespace detail {

inline bool eig_order(const std::complex<double>& a, const std::complex<double>& b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

inline void canonicalize(Eigen::VectorXcd& v) {
  v.normalize();
  Eigen::Index best = 0;
  double mag = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > mag) {
      mag = std::abs(v[i]);
      best = i;
    }
  if (mag > 0.0) v *= std::conj(v[best]) / mag;
}

inline bool conjugates(const std::complex<double>& a, const std::complex<double>& b) {
  return std::abs(a - std::conj(b)) <= 1e-9 * std::max(1.0, std::abs(a)) &&
         std::abs(a.imag()) > 1e-12 * std::max(1.0, std::abs(a));
}

// keep whole conjugate pairs together when cutting a sorted eigenvalue list
inline std::size_t extend_cut(const std::vector<std::complex<double>>& vals, std::size_t h) {
  if (h >= vals.size()) return vals.size();
  if (h > 0 && conjugates(vals[h - 1], vals[h])) return h + 1;
  return h;
}

// computed conjugate partners can differ in |.| by an ulp, so the value sort
// alone does not fix their relative order; put the +imag member first
inline void fix_conjugate_order(std::vector<EigenPair>& pairs) {
  for (std::size_t i = 0; i + 1 < pairs.size();) {
    if (conjugates(pairs[i].value, pairs[i + 1].value)) {
      if (pairs[i].value.imag() < pairs[i + 1].value.imag()) std::swap(pairs[i], pairs[i + 1]);
      i += 2;
    } else {
      ++i;
    }
  }
}

inline Spectrum dense_eigenpairs(const SparseLinearOperator& M, std::size_t h, double tol) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M.dense());
  if (es.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
  const Eigen::Index dim = M.rows();
  std::vector<Eigen::Index> order(dim);
  for (Eigen::Index i = 0; i < dim; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return eig_order(es.eigenvalues()[a], es.eigenvalues()[b]);
  });
  std::vector<std::complex<double>> sorted;
  sorted.reserve(dim);
  for (Eigen::Index i : order) sorted.push_back(es.eigenvalues()[i]);
  const std::size_t keep = extend_cut(sorted, std::min<std::size_t>(h, sorted.size()));
  Spectrum S;
  S.used_dense = true;
  for (std::size_t i = 0; i < keep; ++i) {
    EigenPair p;
    p.value = sorted[i];
    p.vector = es.eigenvectors().col(order[i]);
    canonicalize(p.vector);
    p.residual = (M.apply(p.vector) - p.value * p.vector).norm();
    S.pairs.push_back(std::move(p));
  }
  (void)tol;
  fix_conjugate_order(S.pairs);
  if (!S.pairs.empty()) S.bulk_radius = std::sqrt(std::abs(S.pairs[0].value));
  return S;
}

}  // namespace detail

// Leading eigenpairs by modulus of a real sparse operator. Arnoldi iteration
// with thick restarts (Ritz-vector compression); complex basis so restarts can
// carry complex Ritz directions. Falls back to a dense solve for small or
// stubborn problems. Deterministic given opts.seed.
inline Spectrum leading_eigenpairs(const SparseLinearOperator& M, std::size_t h,
                                   const EigOptions& opts = {}) {
  if (M.rows() != M.cols()) throw std::invalid_argument("leading_eigenpairs: not square");
  const Eigen::Index dim = M.rows();
  if (h < 1 || static_cast<Eigen::Index>(h) > dim)
    throw std::invalid_argument("leading_eigenpairs: bad h");
  if (dim <= opts.dense_limit || static_cast<Eigen::Index>(h) >= dim)
    return detail::dense_eigenpairs(M, h, opts.tol);

  const int m = std::min<Eigen::Index>(
      dim - 1, opts.subspace > 0 ? opts.subspace : std::max<int>(2 * static_cast<int>(h) + 10, 30));
  if (static_cast<int>(h) > m - 2)
    throw std::invalid_argument("leading_eigenpairs: h too large for subspace");

  using Cplx = std::complex<double>;
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(dim, m + 1);
  Eigen::MatrixXcd Hm = Eigen::MatrixXcd::Zero(m + 1, m);
  Rng rng(opts.seed);
  {
    Eigen::VectorXd v0(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v0[i] = rng.normal();
    v0.normalize();
    V.col(0) = v0.cast<Cplx>();
  }

  double opnorm_est = 1.0;
  int p = 0;  // compressed subspace size carried across restarts
  Spectrum S;
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    for (int j = p; j < m; ++j) {
      Eigen::VectorXcd w = M.apply(Eigen::VectorXcd(V.col(j)));
      // classical Gram-Schmidt, twice
      Eigen::VectorXcd h1 = V.leftCols(j + 1).adjoint() * w;
      w.noalias() -= V.leftCols(j + 1) * h1;
      Eigen::VectorXcd h2 = V.leftCols(j + 1).adjoint() * w;
      w.noalias() -= V.leftCols(j + 1) * h2;
      Hm.col(j).head(j + 1) = h1 + h2;
      const double nrm = w.norm();
      opnorm_est = std::max(opnorm_est, Hm.col(j).head(j + 1).norm() + nrm);
      if (nrm <= 1e-13 * opnorm_est) {
        // invariant subspace hit: deflate and continue with a fresh direction
        Hm(j + 1, j) = 0.0;
        Eigen::VectorXd f(dim);
        for (Eigen::Index i = 0; i < dim; ++i) f[i] = rng.normal();
        Eigen::VectorXcd fc = f.cast<Cplx>();
        fc -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * fc);
        fc -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * fc);
        V.col(j + 1) = fc.normalized();
      } else {
        Hm(j + 1, j) = nrm;
        V.col(j + 1) = w / nrm;
      }
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(Hm.topLeftCorner(m, m));
    if (ces.info() != Eigen::Success) throw NumericError("subspace eigensolver failed");
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return detail::eig_order(ces.eigenvalues()[a], ces.eigenvalues()[b]);
    });
    std::vector<Cplx> sorted;
    sorted.reserve(m);
    for (int i : order) sorted.push_back(ces.eigenvalues()[i]);
    const Cplx coupling = Hm(m, m - 1);

    const std::size_t want = detail::extend_cut(sorted, h);
    bool est_ok = true;
    for (std::size_t i = 0; i < want; ++i) {
      const double est =
          std::abs(coupling) * std::abs(ces.eigenvectors().col(order[i])[m - 1]);
      if (est > opts.tol * std::max(1.0, std::abs(sorted[i]))) est_ok = false;
    }

    if (est_ok || restart == opts.max_restarts) {
      S.pairs.clear();
      double worst = 0.0;
      for (std::size_t i = 0; i < want; ++i) {
        EigenPair pr;
        pr.value = sorted[i];
        pr.vector = V.leftCols(m) * ces.eigenvectors().col(order[i]);
        detail::canonicalize(pr.vector);
        pr.residual = (M.apply(pr.vector) - pr.value * pr.vector).norm();
        worst = std::max(worst, pr.residual / std::max(1.0, std::abs(pr.value)));
        S.pairs.push_back(std::move(pr));
      }
      S.restarts = restart;
      if (worst <= opts.tol) {
        detail::fix_conjugate_order(S.pairs);
        S.bulk_radius = std::sqrt(std::abs(S.pairs[0].value));
        return S;
      }
      if (restart == opts.max_restarts) {
        if (dim <= opts.dense_fallback_limit) return detail::dense_eigenpairs(M, h, opts.tol);
        throw NumericError("leading_eigenpairs: no convergence after " +
                           std::to_string(opts.max_restarts) +
                           " restarts (worst relative residual " + std::to_string(worst) + ")");
      }
    }

    // thick restart: compress onto the leading Ritz vectors
    std::size_t keep = detail::extend_cut(
        sorted, std::min<std::size_t>(m - 2, h + std::max<std::size_t>(5, h / 2)));
    Eigen::MatrixXcd Y(m, keep);
    for (std::size_t i = 0; i < keep; ++i) Y.col(i) = ces.eigenvectors().col(order[i]);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Y);
    Eigen::MatrixXcd Q =
        qr.householderQ() * Eigen::MatrixXcd::Identity(m, static_cast<Eigen::Index>(keep));
    Eigen::MatrixXcd Vp = V.leftCols(m) * Q;
    Eigen::MatrixXcd Hp = Q.adjoint() * Hm.topLeftCorner(m, m) * Q;
    Eigen::RowVectorXcd brow = coupling * Q.row(m - 1);
    Eigen::VectorXcd vnext = V.col(m);
    V.setZero();
    Hm.setZero();
    p = static_cast<int>(keep);
    V.leftCols(p) = Vp;
    V.col(p) = vnext;
    Hm.topLeftCorner(p, p) = Hp;
    Hm.row(p).head(p) = brow;
  }
  throw NumericError("leading_eigenpairs: unreachable");
}

inline Spectrum leading_eigenpairs(const SparseLinearOperator& M, std::size_t h, double tol,
                                   int max_restarts) {
  EigOptions o;
  o.tol = tol;
  o.max_restarts = max_restarts;
  return leading_eigenpairs(M, h, o);
}

// Keep near-real eigenpairs above a magnitude floor, truncated to h by
// descending modulus; imaginary parts below the gate are dropped.
inline Spectrum select_real_eigenpairs(const Spectrum& S, std::size_t h, double imag_tol = 1e-6,
                                       double magnitude_floor = 1.0) {
  Spectrum out;
  out.bulk_radius = S.bulk_radius;
  out.used_dense = S.used_dense;
  out.restarts = S.restarts;
  for (const auto& p : S.pairs) {
    if (out.pairs.size() >= h) break;
    if (std::abs(p.value.imag()) > imag_tol * std::max(1.0, std::abs(p.value))) continue;
    if (std::abs(p.value) < magnitude_floor) continue;
    EigenPair q;
    q.value = p.value.real();
    q.vector = p.vector.real().cast<std::complex<double>>();
    q.residual = p.residual;
    out.pairs.push_back(std::move(q));
  }
  return out;
}

}  // namespace hnb

#endif
