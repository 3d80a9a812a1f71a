#ifndef HNB_OPERATORS_HPP
#define HNB_OPERATORS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "hnb/hypergraph.hpp"
#include "hnb/sparse.hpp"

namespace hnb {

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::vector<EdgeId>> incidence(const Hypergraph& H) {
  std::vector<std::vector<EdgeId>> inc(H.n());
  for (int k : H.sizes()) {
    const auto& list = H.edges(k);
    for (std::size_t e = 0; e < list.size(); ++e)
      for (Node i : list[e]) inc[i].push_back({k, e});
  }
  return inc;
}

inline bool same_edge(const EdgeId& a, const EdgeId& b) {
  return a.size == b.size && a.index == b.index;
}

}  // namespace detail

// Nonbacktracking operator on pointed edges, b_{iQ,jR} = 1 iff j in Q\i and
// Q != R (edge instances distinct). col_size restricts target edges R to one
// size (0 = all), giving B_k with B = sum_k B_k.
inline SparseLinearOperator build_B(const Hypergraph& H, int col_size = 0) {
  const auto inc = detail::incidence(H);
  const Index dim = static_cast<Index>(H.pointed_count());
  std::vector<Triplet> ts;
  for (Node j = 0; j < H.n(); ++j) {
    for (const EdgeId& Q : inc[j]) {
      for (const EdgeId& R : inc[j]) {
        if (detail::same_edge(Q, R)) continue;
        if (col_size != 0 && R.size != col_size) continue;
        const Index col = static_cast<Index>(H.pointed_index({j, R}));
        for (Node i : H.edge(Q)) {
          if (i == j) continue;
          ts.push_back({static_cast<Index>(H.pointed_index({i, Q})), col, 1.0});
        }
      }
    }
  }
  return SparseLinearOperator(dim, dim, std::move(ts), col_size ? OpTag::Bk : OpTag::B);
}

inline SparseLinearOperator build_Bk(const Hypergraph& H, int k) { return build_B(H, k); }

// Message orientation (transpose of build_B): b_{iQ,jR} = 1 iff i in R\j and
// Q != R. This is the operator the eigenvector-aggregation lemma and the BP
// Jacobian reduction are stated for; it shares its spectrum with build_B.
inline SparseLinearOperator build_B_msg(const Hypergraph& H, int col_size = 0) {
  const auto inc = detail::incidence(H);
  const Index dim = static_cast<Index>(H.pointed_count());
  std::vector<Triplet> ts;
  for (Node i = 0; i < H.n(); ++i) {
    for (const EdgeId& R : inc[i]) {
      if (col_size != 0 && R.size != col_size) continue;
      for (const EdgeId& Q : inc[i]) {
        if (detail::same_edge(Q, R)) continue;
        const Index row = static_cast<Index>(H.pointed_index({i, Q}));
        for (Node j : H.edge(R)) {
          if (j == i) continue;
          ts.push_back({row, static_cast<Index>(H.pointed_index({j, R})), 1.0});
        }
      }
    }
  }
  return SparseLinearOperator(dim, dim, std::move(ts), col_size ? OpTag::Bk : OpTag::B);
}

// Reduced operator B' of dimension 2*kappa*n. Basis: (block in {1,2}, size k
// ascending, node i); index = block*kappa*n + size_slot*n + i. Entries follow
// the reduced eigenvector relations:
//   beta x1_{k,i} = d_{k;i} sum_{k'} x2_{k',i} - x2_{k,i}
//   beta x2_{k,i} = sum_j a_{k;i,j} sum_{k'} x2_{k',j} - (k-2) x2_{k,i} - (k-1) x1_{k,i}
inline SparseLinearOperator build_Bprime(const Hypergraph& H) {
  const auto& K = H.sizes();
  const std::size_t kappa = K.size();
  const std::size_t n = H.n();
  const Index dim = static_cast<Index>(2 * kappa * n);
  auto idx = [&](int block, std::size_t a, Node i) {
    return static_cast<Index>((static_cast<std::size_t>(block) * kappa + a) * n + i);
  };
  std::vector<Triplet> ts;
  for (std::size_t a = 0; a < kappa; ++a) {
    const int k = K[a];
    const SparseLinearOperator Dk = degree_operator(H, k);
    const SparseLinearOperator Ak = adjacency_operator(H, k);
    for (Node i = 0; i < n; ++i) {
      const double d = Dk.coeff(static_cast<Index>(i), static_cast<Index>(i));
      for (std::size_t ap = 0; ap < kappa; ++ap) {
        const double v = d - (ap == a ? 1.0 : 0.0);
        if (v != 0.0) ts.push_back({idx(0, a, i), idx(1, ap, i), v});
      }
      ts.push_back({idx(1, a, i), idx(0, a, i), 1.0 - k});
      if (k != 2) ts.push_back({idx(1, a, i), idx(1, a, i), 2.0 - k});
    }
    const auto& rp = Ak.row_ptr();
    const auto& ci = Ak.col_indices();
    const auto& av = Ak.values();
    for (Node i = 0; i < n; ++i)
      for (std::size_t p = rp[i]; p < rp[i + 1]; ++p)
        for (std::size_t ap = 0; ap < kappa; ++ap)
          ts.push_back({idx(1, a, i), idx(1, ap, static_cast<Node>(ci[p])), av[p]});
  }
  return SparseLinearOperator(dim, dim, std::move(ts), OpTag::Bprime);
}

// Both sides of the Ihara-Bass identity, compared after cross-multiplying the
// (1-mu) and (1+mu(k-1)) factors with negative exponents to the other side.
inline double ihara_bass_residual(const Hypergraph& H, std::complex<double> mu,
                                  std::size_t dense_limit = 16) {
  if (H.n() > dense_limit) throw NumericError("ihara_bass_residual: dense limit exceeded");
  const double margin = 1e-3;
  if (std::abs(mu - 1.0) < margin) throw NumericError("mu too close to pole 1");
  for (int k : H.sizes())
    if (std::abs(mu + 1.0 / (k - 1.0)) < margin)
      throw NumericError("mu too close to pole -1/(k-1)");

  using Cplx = std::complex<double>;
  using MatC = Eigen::MatrixXcd;
  const auto n = static_cast<Eigen::Index>(H.n());
  const auto kappa = static_cast<Eigen::Index>(H.kappa());

  const Index mc = static_cast<Index>(H.pointed_count());
  MatC IB = MatC::Identity(mc, mc) - mu * build_B(H).dense().cast<Cplx>();
  Cplx lhs = IB.partialPivLu().determinant();

  // M(mu) with row-indexed block stacks of A_k, D_k: block (a,b) carries the
  // size of block-row a
  MatC M = MatC::Identity(kappa * n, kappa * n);
  for (Eigen::Index a = 0; a < kappa; ++a) {
    const int k = H.sizes()[static_cast<std::size_t>(a)];
    Eigen::MatrixXd Ak = adjacency_operator(H, k).dense();
    Eigen::MatrixXd Dk = degree_operator(H, k).dense();
    for (Eigen::Index b = 0; b < kappa; ++b) {
      Eigen::MatrixXd DmI = Dk;
      if (a == b) DmI -= Eigen::MatrixXd::Identity(n, n);
      M.block(a * n, b * n, n, n) +=
          mu * (-Ak.cast<Cplx>()) + mu * mu * (k - 1.0) * DmI.cast<Cplx>();
      if (a == b) M.block(a * n, b * n, n, n) += mu * (k - 2.0) * MatC::Identity(n, n);
    }
  }
  Cplx rhs = M.partialPivLu().determinant();

  for (int k : H.sizes()) {
    const double mk = static_cast<double>(H.edge_count(k));
    const double e1 = mk * (k - 1.0) - static_cast<double>(H.n());
    const double e2 = mk - static_cast<double>(H.n());
    const Cplx f1 = 1.0 - mu;
    const Cplx f2 = 1.0 + mu * (k - 1.0);
    if (e1 >= 0)
      rhs *= std::pow(f1, e1);
    else
      lhs *= std::pow(f1, -e1);
    if (e2 >= 0)
      rhs *= std::pow(f2, e2);
    else
      lhs *= std::pow(f2, -e2);
  }
  return std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs));
}

struct GroupMatrixSet {
  int ell = 0;
  std::map<int, Eigen::MatrixXd> G;  // per edge size k, an ell x ell matrix
};

// g_{k;s,t} = q_s (c_k(s,t) / ((k-1) c_k(s)) - 1) with (k-1) c_k(s) =
// sum_t q_t c_k(s,t). Rows with zero expected degree are zeroed when
// allow_zero_rows (estimation path) and rejected otherwise.
inline GroupMatrixSet build_G_from_rates(int ell, const std::vector<double>& q,
                                         const std::map<int, Eigen::MatrixXd>& c_st,
                                         bool allow_zero_rows = false) {
  if (static_cast<int>(q.size()) != ell) throw std::invalid_argument("build_G: |q| != ell");
  GroupMatrixSet out;
  out.ell = ell;
  for (const auto& [k, C] : c_st) {
    if (C.rows() != ell || C.cols() != ell) throw std::invalid_argument("build_G: bad C_k shape");
    Eigen::MatrixXd Gk(ell, ell);
    for (int s = 0; s < ell; ++s) {
      double denom = 0.0;
      for (int t = 0; t < ell; ++t) denom += q[t] * C(s, t);
      if (denom <= 0.0) {
        if (!allow_zero_rows)
          throw NumericError("build_G: zero expected degree for k=" + std::to_string(k) +
                             ", s=" + std::to_string(s));
        Gk.row(s).setZero();
        continue;
      }
      for (int t = 0; t < ell; ++t) Gk(s, t) = q[s] * (C(s, t) / denom - 1.0);
    }
    out.G[k] = Gk;
  }
  return out;
}

// J = sum_k G_k kron B_k, basis (group s outer, pointed edge inner).
// msg = true uses the message orientation of B_k (the BP Jacobian direction).
inline SparseLinearOperator build_J(const Hypergraph& H, const GroupMatrixSet& G,
                                    bool msg = false) {
  const Index mc = static_cast<Index>(H.pointed_count());
  const int ell = G.ell;
  std::vector<Triplet> ts;
  for (int k : H.sizes()) {
    auto it = G.G.find(k);
    if (it == G.G.end()) continue;
    const Eigen::MatrixXd& Gk = it->second;
    if (Gk.isZero(0.0)) continue;
    SparseLinearOperator Bk = msg ? build_B_msg(H, k) : build_B(H, k);
    const auto& rp = Bk.row_ptr();
    const auto& ci = Bk.col_indices();
    const auto& bv = Bk.values();
    for (Index r = 0; r < mc; ++r)
      for (std::size_t p = rp[r]; p < rp[r + 1]; ++p)
        for (int s = 0; s < ell; ++s)
          for (int t = 0; t < ell; ++t)
            if (Gk(s, t) != 0.0)
              ts.push_back({s * mc + r, t * mc + ci[p], Gk(s, t) * bv[p]});
  }
  return SparseLinearOperator(ell * mc, ell * mc, std::move(ts), OpTag::J);
}

// Reduced BP Jacobian J' of dimension 2*ell*kappa*n. Basis: (block in {1,2},
// group s, size k ascending, node i). Entries follow the reduced relations:
//   xi x1_{s,k,i} = d_{k;i} sum_{k',t} g_{k';s,t} x2_{t,k',i} - sum_t g_{k;s,t} x2_{t,k,i}
//   xi x2_{s,k,i} = sum_{k',t} g_{k';s,t} sum_j a_{k;i,j} x2_{t,k',j}
//                   - sum_t g_{k;s,t} ((k-1) x1_{t,k,i} + (k-2) x2_{t,k,i})
inline SparseLinearOperator build_Jprime(const Hypergraph& H, const GroupMatrixSet& G) {
  const auto& K = H.sizes();
  const std::size_t kappa = K.size();
  const std::size_t n = H.n();
  const int ell = G.ell;
  const Index dim = static_cast<Index>(2 * static_cast<std::size_t>(ell) * kappa * n);
  auto idx = [&](int block, int s, std::size_t a, Node i) {
    return static_cast<Index>(
        ((static_cast<std::size_t>(block) * ell + static_cast<std::size_t>(s)) * kappa + a) * n +
        i);
  };
  auto gk = [&](int k, int s, int t) -> double {
    auto it = G.G.find(k);
    return it == G.G.end() ? 0.0 : it->second(s, t);
  };
  std::vector<Triplet> ts;
  for (std::size_t a = 0; a < kappa; ++a) {
    const int k = K[a];
    const SparseLinearOperator Dk = degree_operator(H, k);
    const SparseLinearOperator Ak = adjacency_operator(H, k);
    const auto& rp = Ak.row_ptr();
    const auto& ci = Ak.col_indices();
    const auto& av = Ak.values();
    for (int s = 0; s < ell; ++s) {
      for (int t = 0; t < ell; ++t) {
        const double g_row = gk(k, s, t);
        for (Node i = 0; i < n; ++i) {
          const double d = Dk.coeff(static_cast<Index>(i), static_cast<Index>(i));
          for (std::size_t ap = 0; ap < kappa; ++ap) {
            const double g_col = gk(K[ap], s, t);
            double v = d * g_col - (ap == a ? g_row : 0.0);
            if (v != 0.0) ts.push_back({idx(0, s, a, i), idx(1, t, ap, i), v});
          }
          if (g_row != 0.0) {
            ts.push_back({idx(1, s, a, i), idx(0, t, a, i), -(k - 1.0) * g_row});
            if (k != 2) ts.push_back({idx(1, s, a, i), idx(1, t, a, i), -(k - 2.0) * g_row});
          }
        }
        for (Node i = 0; i < n; ++i)
          for (std::size_t p = rp[i]; p < rp[i + 1]; ++p)
            for (std::size_t ap = 0; ap < kappa; ++ap) {
              const double g_col = gk(K[ap], s, t);
              if (g_col != 0.0)
                ts.push_back(
                    {idx(1, s, a, i), idx(1, t, ap, static_cast<Node>(ci[p])), g_col * av[p]});
            }
      }
    }
  }
  return SparseLinearOperator(dim, dim, std::move(ts), OpTag::Jprime);
}

// Aggregation operator L: (x1, x2) node-size sums of a pointed-edge vector.
// Maps the m-caron pointed basis to the 2*kappa*n basis of B'.
inline SparseLinearOperator build_L(const Hypergraph& H) {
  const auto& K = H.sizes();
  const std::size_t kappa = K.size();
  const std::size_t n = H.n();
  std::vector<Triplet> ts;
  for (std::size_t a = 0; a < kappa; ++a) {
    const int k = K[a];
    const auto& list = H.edges(k);
    for (std::size_t e = 0; e < list.size(); ++e)
      for (Node i : list[e]) {
        const Index col = static_cast<Index>(H.pointed_index({i, {k, e}}));
        ts.push_back({static_cast<Index>(a * n + i), col, 1.0});
        for (Node j : list[e])
          if (j != i)
            ts.push_back({static_cast<Index>((kappa + a) * n + j), col, 1.0});
      }
  }
  return SparseLinearOperator(static_cast<Index>(2 * kappa * n),
                              static_cast<Index>(H.pointed_count()), std::move(ts));
}

// Group-blocked L: block-diagonal over groups, mapping the ell*m-caron basis
// of J to the 2*ell*kappa*n basis of J' (note the block order swap: J' basis
// is (block, group, size, node) while L itself is (block, size, node)).
inline SparseLinearOperator build_L_group(const Hypergraph& H, int ell) {
  const SparseLinearOperator L = build_L(H);
  const std::size_t kn = H.kappa() * H.n();
  const Index mc = static_cast<Index>(H.pointed_count());
  std::vector<Triplet> ts;
  const auto& rp = L.row_ptr();
  const auto& ci = L.col_indices();
  const auto& lv = L.values();
  for (Index r = 0; r < L.rows(); ++r) {
    const int block = static_cast<int>(static_cast<std::size_t>(r) / kn);
    const Index within = r - static_cast<Index>(static_cast<std::size_t>(block) * kn);
    for (std::size_t p = rp[r]; p < rp[r + 1]; ++p)
      for (int s = 0; s < ell; ++s)
        ts.push_back({static_cast<Index>((static_cast<std::size_t>(block) * ell + s) * kn) + within,
                      s * mc + ci[p], lv[p]});
  }
  return SparseLinearOperator(static_cast<Index>(2 * ell * kn), ell * mc, std::move(ts));
}

// M: sums a pointed-edge vector over the points of each edge; basis (group s
// outer, edge (k, index) inner).
inline SparseLinearOperator build_M(const Hypergraph& H, int ell) {
  const Index mc = static_cast<Index>(H.pointed_count());
  const Index m = static_cast<Index>(H.edge_count());
  std::vector<Triplet> ts;
  Index eidx = 0;
  for (int k : H.sizes()) {
    const auto& list = H.edges(k);
    for (std::size_t e = 0; e < list.size(); ++e, ++eidx)
      for (Node i : list[e])
        for (int s = 0; s < ell; ++s)
          ts.push_back({s * m + eidx,
                        s * mc + static_cast<Index>(H.pointed_index({i, {k, e}})), 1.0});
  }
  return SparseLinearOperator(ell * m, ell * mc, std::move(ts));
}

// N: block-diagonal per edge, t_Q^(s) -> (1-|Q|) sum_t g_{|Q|;s,t} t_Q^(t).
inline SparseLinearOperator build_N(const Hypergraph& H, const GroupMatrixSet& G) {
  const Index m = static_cast<Index>(H.edge_count());
  const int ell = G.ell;
  std::vector<Triplet> ts;
  Index eidx = 0;
  for (int k : H.sizes()) {
    auto it = G.G.find(k);
    for (std::size_t e = 0; e < H.edges(k).size(); ++e, ++eidx) {
      if (it == G.G.end()) continue;
      for (int s = 0; s < ell; ++s)
        for (int t = 0; t < ell; ++t) {
          const double v = (1.0 - k) * it->second(s, t);
          if (v != 0.0) ts.push_back({s * m + eidx, t * m + eidx, v});
        }
    }
  }
  return SparseLinearOperator(ell * m, ell * m, std::move(ts));
}

}  // namespace hnb

#endif
