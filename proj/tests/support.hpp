#ifndef HNB_TESTS_SUPPORT_HPP
#define HNB_TESTS_SUPPORT_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>
#include <vector>

#include "hnb/hsbm.hpp"
#include "hnb/hypergraph.hpp"
#include "hnb/operators.hpp"
#include "hnb/rng.hpp"

namespace hnb::test {

// random hypergraph: n nodes, sizes drawn from `sizes`, up to max_mk edges per
// size; parallel edges possible by construction
inline Hypergraph random_hypergraph(std::uint64_t seed, std::size_t n = 10,
                                    std::vector<int> sizes = {2, 3, 4},
                                    std::size_t max_mk = 8) {
  Rng rng(seed);
  std::vector<std::vector<Node>> edges;
  for (int k : sizes) {
    if (n < static_cast<std::size_t>(k)) continue;
    const std::size_t mk = 1 + rng.below(max_mk);
    for (std::size_t e = 0; e < mk; ++e) {
      auto pick = rng.sample_distinct(n, static_cast<std::size_t>(k));
      edges.emplace_back(pick.begin(), pick.end());
    }
  }
  return Hypergraph(n, std::move(edges));
}

inline GroupMatrixSet random_G(std::uint64_t seed, int ell, const std::vector<int>& sizes) {
  Rng rng(seed);
  std::vector<double> q(ell);
  double qs = 0.0;
  for (auto& v : q) {
    v = 0.2 + rng.uniform();
    qs += v;
  }
  for (auto& v : q) v /= qs;
  std::map<int, Eigen::MatrixXd> c_st;
  for (int k : sizes) {
    Eigen::MatrixXd C(ell, ell);
    for (int s = 0; s < ell; ++s)
      for (int t = s; t < ell; ++t) C(s, t) = C(t, s) = 0.5 + 5.0 * rng.uniform();
    c_st[k] = C;
  }
  return build_G_from_rates(ell, q, c_st);
}

// all eigenvalues of a dense matrix, sorted descending by (|.|, Re, Im)
inline std::vector<std::complex<double>> dense_eigvals(const Eigen::MatrixXd& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  std::vector<std::complex<double>> out(es.eigenvalues().data(),
                                        es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), [](auto a, auto b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

// remove up to `count` elements nearest to target (must be within tol)
inline void remove_near(std::vector<std::complex<double>>& vals, std::complex<double> target,
                        std::size_t count, double tol = 1e-6) {
  for (std::size_t c = 0; c < count; ++c) {
    auto it = std::min_element(vals.begin(), vals.end(), [&](auto a, auto b) {
      return std::abs(a - target) < std::abs(b - target);
    });
    if (it == vals.end() || std::abs(*it - target) > tol) return;
    vals.erase(it);
  }
}

// true iff every element of `sub` matches a distinct element of `super`
// within tol (greedy nearest matching)
inline bool multiset_contained(std::vector<std::complex<double>> sub,
                               std::vector<std::complex<double>> super, double tol) {
  for (const auto& a : sub) {
    auto it = std::min_element(super.begin(), super.end(), [&](auto x, auto y) {
      return std::abs(x - a) < std::abs(y - a);
    });
    if (it == super.end() || std::abs(*it - a) > tol) return false;
    super.erase(it);
  }
  return true;
}

// Corollary-style spectrum check between B and B': strip the guaranteed
// trivial eigenvalues (1 and 1-k surpluses) from eig(B), then require the
// remaining nonzero values to appear in eig(B') within `tol`. Zero eigenvalue
// clusters are defective in both operators and smear to ~eps^(1/m) under any
// dense solver, so they are compared by count at a coarse threshold instead.
inline bool spectrum_containment(const Hypergraph& H, double tol = 1e-6,
                                 double zero_threshold = 5e-2) {
  auto eb = dense_eigvals(build_B(H).dense());
  auto ebp = dense_eigvals(build_Bprime(H).dense());
  long surplus1 = -static_cast<long>(H.kappa() * H.n());
  for (int k : H.sizes()) surplus1 += static_cast<long>(H.edge_count(k)) * (k - 1);
  if (surplus1 > 0) remove_near(eb, 1.0, static_cast<std::size_t>(surplus1), zero_threshold);
  for (int k : H.sizes()) {
    long s = static_cast<long>(H.edge_count(k)) - static_cast<long>(H.n());
    if (s > 0)
      remove_near(eb, std::complex<double>(1.0 - k, 0.0), static_cast<std::size_t>(s),
                  zero_threshold);
  }
  auto split = [&](const std::vector<std::complex<double>>& v) {
    std::pair<std::vector<std::complex<double>>, std::size_t> out;
    for (const auto& x : v)
      if (std::abs(x) > zero_threshold)
        out.first.push_back(x);
      else
        ++out.second;
    return out;
  };
  auto [eb_nz, eb_zeros] = split(eb);
  auto [ebp_nz, ebp_zeros] = split(ebp);
  if (ebp_zeros < eb_zeros) return false;
  return multiset_contained(eb_nz, ebp_nz, tol);
}

}  // namespace hnb::test

#endif
