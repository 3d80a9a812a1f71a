#ifndef HNB_HSBM_HPP
#define HNB_HSBM_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hnb/hypergraph.hpp"
#include "hnb/operators.hpp"
#include "hnb/rng.hpp"

namespace hnb {

struct SizeParams {
  double c = 0.0;  // expected mean k-degree
  double p = 0.0;  // within-cluster fraction
};

struct BlockmodelParams {
  std::size_t n = 0;
  int ell = 2;
  std::vector<double> q;  // empty = balanced
  std::map<int, SizeParams> sizes;
  std::uint64_t seed = 0;

  std::vector<double> proportions() const {
    if (q.empty()) return std::vector<double>(ell, 1.0 / ell);
    return q;
  }

  void validate() const {
    if (n == 0 || ell < 1) throw DataError("blockmodel: need n > 0, ell >= 1");
    const auto qq = proportions();
    if (static_cast<int>(qq.size()) != ell) throw DataError("blockmodel: |q| != ell");
    double s = 0.0;
    for (double v : qq) {
      if (v < 0.0) throw DataError("blockmodel: negative proportion");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-12) throw DataError("blockmodel: proportions must sum to 1");
    for (const auto& [k, sp] : sizes) {
      if (k < 2) throw DataError("blockmodel: edge size < 2");
      if (sp.c < 0.0) throw DataError("blockmodel: c_k < 0");
      if (sp.p < 0.0 || sp.p > 1.0) throw DataError("blockmodel: p_k outside [0,1]");
    }
  }
};

inline double r_coeff(int k) {
  const double t = std::pow(2.0, 2.0 - k);
  return (1.0 - t) / (2.0 - t);
}

// (c_k^in, c_k^out) for the balanced two-group ball-dropping model
inline std::pair<double, double> ckin_ckout(int k, double c_k, double p_k) {
  if (k < 2) throw std::invalid_argument("ckin_ckout: k < 2");
  const double r = r_coeff(k);
  const double cin = 2.0 * (k - 1) * c_k * (p_k + (1.0 - p_k) * r);
  return {cin, 2.0 * (k - 1) * c_k - cin};
}

inline LabelVector sample_labels(std::size_t n, const std::vector<double>& q,
                                 std::uint64_t seed) {
  Rng rng(seed);
  LabelVector z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = static_cast<int>(rng.categorical(q));
  return z;
}

namespace detail {

inline double log_choose(double n, int k) {
  if (n < k) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(n - k + 1.0);
}

}  // namespace detail

// Ball-dropping sampler: per size k, M_k ~ Poisson(n c_k / k) edges (or
// deterministically round(n c_k / k) with fixed_count); each edge is
// monochromatic w.p. p_k (group weighted by its count of k-subsets) and
// uniform over non-monochromatic k-subsets otherwise. Collisions are kept as
// parallel edges.
inline Hypergraph sample_hypergraph(const BlockmodelParams& params, const LabelVector& z,
                                    bool fixed_count = false) {
  params.validate();
  if (z.size() != params.n) throw DataError("sample_hypergraph: label length != n");
  std::vector<std::vector<Node>> groups(params.ell);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] < 0 || z[i] >= params.ell) throw DataError("sample_hypergraph: label out of range");
    groups[z[i]].push_back(i);
  }
  Rng rng(params.seed);
  std::vector<std::vector<Node>> edges;
  for (const auto& [k, sp] : params.sizes) {
    if (sp.c <= 0.0) continue;
    if (params.n < static_cast<std::size_t>(k))
      throw DataError("sample_hypergraph: n < edge size");
    if (sp.p > 0.0)
      for (const auto& g : groups)
        if (g.size() < static_cast<std::size_t>(k))
          throw DataError("sample_hypergraph: group smaller than edge size " +
                          std::to_string(k));
    const double lam = static_cast<double>(params.n) * sp.c / k;
    const std::uint64_t Mk = fixed_count ? static_cast<std::uint64_t>(std::llround(lam))
                                         : rng.poisson(lam);
    std::vector<double> gw(params.ell, 0.0);
    for (int s = 0; s < params.ell; ++s)
      gw[s] = std::exp(detail::log_choose(static_cast<double>(groups[s].size()), k));
    for (std::uint64_t e = 0; e < Mk; ++e) {
      std::vector<Node> edge;
      if (rng.uniform() < sp.p) {
        const int s = static_cast<int>(rng.categorical(gw));
        const auto pick = rng.sample_distinct(groups[s].size(), k);
        for (std::size_t t : pick) edge.push_back(groups[s][t]);
      } else {
        for (;;) {
          auto pick = rng.sample_distinct(params.n, k);
          bool mono = true;
          for (std::size_t t = 1; t < pick.size(); ++t)
            if (z[pick[t]] != z[pick[0]]) {
              mono = false;
              break;
            }
          if (!mono) {
            edge.assign(pick.begin(), pick.end());
            break;
          }
        }
      }
      edges.push_back(std::move(edge));
    }
  }
  return Hypergraph(params.n, std::move(edges));
}

struct SizeTheory {
  int k = 0;
  double r_k = 0, c_in = 0, c_out = 0;
  double alpha_k = 0, beta_k = 0, gamma_k = 0;
  double x_k = 0, a_k = 0;  // detectability ellipse center and radius
};

struct TheoryReport {
  std::vector<SizeTheory> sizes;
  double alpha = 0, beta = 0, lambda = 0, nu = 0;
  bool detect_vanilla = false, detect_bp = false;
};

// Closed-form predictions for the balanced two-group model. The ellipse
// radius a_k = 1/((2-2r_k) sqrt((k-1)c_k)) is the lambda = 1 level set of
// lambda = sum_k (k-1)c_k (2-2r_k)^2 (p_k - x_k)^2.
inline TheoryReport theory_report(const BlockmodelParams& params) {
  params.validate();
  const auto q = params.proportions();
  if (params.ell != 2 || std::abs(q[0] - 0.5) > 1e-9)
    throw DataError("theory_report: requires two balanced groups");
  TheoryReport rep;
  for (const auto& [k, sp] : params.sizes) {
    if (sp.c <= 0.0) continue;
    SizeTheory st;
    st.k = k;
    st.r_k = r_coeff(k);
    std::tie(st.c_in, st.c_out) = ckin_ckout(k, sp.c, sp.p);
    st.alpha_k = (k - 1) * sp.c;
    st.beta_k = 0.5 * (st.c_in - st.c_out);
    const double beta_param =
        (k - 1) * sp.c * (2.0 * (1.0 - st.r_k) * sp.p + 2.0 * st.r_k - 1.0);
    if (std::abs(beta_param - st.beta_k) > 1e-12 * std::max(1.0, std::abs(st.beta_k)))
      throw NumericError("theory_report: beta parameterization mismatch");
    st.gamma_k = st.c_in / ((k - 1) * sp.c) - 1.0;
    st.x_k = (1.0 - 2.0 * st.r_k) / (2.0 - 2.0 * st.r_k);
    st.a_k = 1.0 / ((2.0 - 2.0 * st.r_k) * std::sqrt((k - 1) * sp.c));
    rep.alpha += st.alpha_k;
    rep.beta += st.beta_k;
    rep.lambda += st.gamma_k * st.beta_k;
    rep.nu += st.gamma_k * st.alpha_k;
    rep.sizes.push_back(st);
  }
  rep.detect_vanilla = rep.beta * rep.beta > rep.alpha;
  rep.detect_bp = std::abs(rep.lambda) > 1.0;
  return rep;
}

// Theory-derived G_k for the balanced two-group model (known-parameters mode)
inline GroupMatrixSet build_G(const BlockmodelParams& params) {
  params.validate();
  const auto q = params.proportions();
  if (params.ell != 2 || std::abs(q[0] - 0.5) > 1e-9)
    throw DataError("build_G(params): requires two balanced groups");
  std::map<int, Eigen::MatrixXd> c_st;
  for (const auto& [k, sp] : params.sizes) {
    if (sp.c <= 0.0) continue;
    auto [cin, cout] = ckin_ckout(k, sp.c, sp.p);
    Eigen::MatrixXd C(2, 2);
    C << cin, cout, cout, cin;
    c_st[k] = C;
  }
  return build_G_from_rates(2, q, c_st);
}

struct Estimate {
  std::vector<double> q_hat;
  std::map<int, Eigen::MatrixXd> c_st;
  GroupMatrixSet G;
};

// Appendix-style estimator: q with +1 pseudocounts, pair counts with
// multiplicity (an edge with label counts (c_s) contributes c_s c_t to
// m_k(s,t) for s != t and c_s(c_s - 1) to m_k(s,s)).
inline Estimate estimate_parameters(const Hypergraph& H, const LabelVector& z, int ell) {
  if (z.size() != H.n()) throw DataError("estimate_parameters: label length != n");
  for (int v : z)
    if (v < 0 || v >= ell) throw DataError("estimate_parameters: label out of range");
  Estimate est;
  const double n = static_cast<double>(H.n());
  std::vector<double> counts(ell, 0.0);
  for (int v : z) counts[v] += 1.0;
  est.q_hat.resize(ell);
  for (int s = 0; s < ell; ++s) est.q_hat[s] = (counts[s] + 1.0) / (n + ell);

  std::vector<int> label_count(ell);
  for (int k : H.sizes()) {
    Eigen::MatrixXd m_hat = Eigen::MatrixXd::Zero(ell, ell);
    for (const auto& e : H.edges(k)) {
      std::fill(label_count.begin(), label_count.end(), 0);
      for (Node i : e) ++label_count[z[i]];
      for (int s = 0; s < ell; ++s) {
        if (!label_count[s]) continue;
        m_hat(s, s) += static_cast<double>(label_count[s]) * (label_count[s] - 1);
        for (int t = s + 1; t < ell; ++t) {
          const double v = static_cast<double>(label_count[s]) * label_count[t];
          m_hat(s, t) += v;
          m_hat(t, s) += v;
        }
      }
    }
    Eigen::MatrixXd C(ell, ell);
    for (int s = 0; s < ell; ++s)
      for (int t = 0; t < ell; ++t)
        C(s, t) = m_hat(s, t) / (est.q_hat[s] * est.q_hat[t] * n);
    est.c_st[k] = C;
  }
  est.G = build_G_from_rates(ell, est.q_hat, est.c_st, /*allow_zero_rows=*/true);
  return est;
}

// ĉ_k(s) via the degree identity, against the smoothed group size q̂_s n
inline double estimated_mean_degree(const Estimate& est, int k, int s) {
  const auto& C = est.c_st.at(k);
  double acc = 0.0;
  for (int t = 0; t < static_cast<int>(est.q_hat.size()); ++t) acc += est.q_hat[t] * C(s, t);
  return acc / (k - 1.0);
}

// Signed per-entry means of (B_k u - alpha_k u) and (B_k v - beta_k v) for
// the in-expectation eigenvectors u_{iQ} = |Q|-1, v_{iQ} = sum_{j in Q\i}
// sigma_j. Individual samples do not vanish; ensemble means do.
inline std::pair<double, double> expectation_eigvec_residual(const Hypergraph& H,
                                                             const LabelVector& z,
                                                             const BlockmodelParams& params,
                                                             int k) {
  if (params.ell != 2) throw DataError("expectation_eigvec_residual: two groups required");
  if (z.size() != H.n()) throw DataError("expectation_eigvec_residual: label length != n");
  auto it = params.sizes.find(k);
  if (it == params.sizes.end()) throw DataError("expectation_eigvec_residual: size k missing");
  auto [cin, cout] = ckin_ckout(k, it->second.c, it->second.p);
  const double alpha_k = (k - 1) * it->second.c;
  const double beta_k = 0.5 * (cin - cout);

  const std::size_t mc = H.pointed_count();
  Eigen::VectorXd u(mc), v(mc);
  for (int ks : H.sizes()) {
    const auto& list = H.edges(ks);
    for (std::size_t e = 0; e < list.size(); ++e) {
      double sig_sum = 0.0;
      for (Node j : list[e]) sig_sum += z[j] == 0 ? 1.0 : -1.0;
      for (Node i : list[e]) {
        const std::size_t idx = H.pointed_index({i, {ks, e}});
        u[idx] = ks - 1.0;
        v[idx] = sig_sum - (z[i] == 0 ? 1.0 : -1.0);
      }
    }
  }
  const SparseLinearOperator Bk = build_B(H, k);
  const double ru = (Bk.apply(u) - alpha_k * u).sum() / static_cast<double>(mc);
  const double rv = (Bk.apply(v) - beta_k * v).sum() / static_cast<double>(mc);
  return {ru, rv};
}

}  // namespace hnb

#endif
