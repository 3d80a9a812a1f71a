// Acceptance harness: one criterion per invocation (argv[1] in 1..10), one
// pass/fail line per criterion on stdout, exit 0 iff the criterion holds.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "hnb/clustering.hpp"
#include "hnb/eigsolve.hpp"
#include "hnb/hsbm.hpp"
#include "hnb/hypergraph.hpp"
#include "hnb/operators.hpp"
#include "support.hpp"

using namespace hnb;

namespace {

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int report(int crit, bool pass, const std::string& detail, double secs) {
  std::printf("criterion %d: %s (%s; %.1f s)\n", crit, pass ? "PASS" : "FAIL", detail.c_str(),
              secs);
  return pass ? 0 : 1;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int pool_size() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// run f(i) for i in [0, total) on a small thread pool
template <typename F>
void parallel_for(std::size_t total, F&& f) {
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      f(i);
    }
  };
  const int nw = std::min<int>(pool_size(), static_cast<int>(total));
  std::vector<std::thread> pool;
  for (int w = 0; w < nw; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
}

Hypergraph instance(std::uint64_t seed) {
  return test::random_hypergraph(seed, 6 + seed % 7, {2, 3, 4}, 8);
}

// ---------------------------------------------------------------------------
// 1: Ihara-Bass determinant identity, 50 instances x 5 random mu
int criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(0xacc1);
  int bad = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Hypergraph H = instance(seed);
    for (int t = 0; t < 5; ++t) {
      std::complex<double> mu;
      do {
        mu = {rng.uniform(-0.8, 0.8), rng.uniform(-0.5, 0.5)};
      } while (std::abs(mu - 1.0) < 2e-3 || std::abs(mu + 1.0) < 2e-3 ||
               std::abs(mu + 0.5) < 2e-3 || std::abs(mu + 1.0 / 3.0) < 2e-3);
      const double r = ihara_bass_residual(H, mu);
      worst = std::max(worst, r);
      if (r > 1e-8) ++bad;
    }
  }
  const double secs = elapsed_s(t0);
  const bool pass = bad == 0 && secs < 10.0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "worst residual %.2e over 250 checks", worst);
  return report(1, pass, buf, secs);
}

// 2: eig(B) vs eig(B') multiset statement on the same 50 instances
int criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  int bad = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    if (!test::spectrum_containment(instance(seed), 1e-6)) ++bad;
  const double secs = elapsed_s(t0);
  const bool pass = bad == 0 && secs < 30.0;
  return report(2, pass, std::to_string(50 - bad) + "/50 instances contained", secs);
}

// 3: eigenvector correspondences (aggregation lemma and the two-alternative)
int criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  int bad_aggregation = 0, bad_alternative = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Hypergraph H = test::random_hypergraph(seed, 8, {2, 3}, 5);
    {
      Eigen::MatrixXd Bm = build_B_msg(H).dense();
      Eigen::MatrixXd Bp = build_Bprime(H).dense();
      Eigen::MatrixXd L = build_L(H).dense();
      Eigen::EigenSolver<Eigen::MatrixXd> es(Bm);
      for (Eigen::Index j = 0; j < Bm.rows(); ++j) {
        const std::complex<double> beta = es.eigenvalues()[j];
        Eigen::VectorXcd x = L.cast<std::complex<double>>() * es.eigenvectors().col(j);
        if (x.norm() <= 1e-9) continue;
        if ((Bp.cast<std::complex<double>>() * x - beta * x).norm() > 1e-6 * x.norm())
          ++bad_aggregation;
      }
    }
    const int ell = 2 + static_cast<int>(seed % 2);
    GroupMatrixSet G = test::random_G(seed + 1000, ell, H.sizes());
    Eigen::MatrixXd Jm = build_J(H, G, /*msg=*/true).dense();
    Eigen::MatrixXcd Jp = build_Jprime(H, G).dense().cast<std::complex<double>>();
    Eigen::MatrixXcd Lg = build_L_group(H, ell).dense().cast<std::complex<double>>();
    Eigen::MatrixXcd Mop = build_M(H, ell).dense().cast<std::complex<double>>();
    Eigen::MatrixXcd Nop = build_N(H, G).dense().cast<std::complex<double>>();
    Eigen::EigenSolver<Eigen::MatrixXd> es(Jm);
    for (Eigen::Index j = 0; j < Jm.rows(); ++j) {
      const std::complex<double> xi = es.eigenvalues()[j];
      Eigen::VectorXcd u = es.eigenvectors().col(j);
      Eigen::VectorXcd y = Lg * u;
      Eigen::VectorXcd t = Mop * u;
      const bool alt1 = y.norm() > 1e-9 && (Jp * y - xi * y).norm() <= 1e-6 * y.norm();
      const bool alt2 = t.norm() > 1e-9 && (Nop * t - xi * t).norm() <= 1e-6 * t.norm();
      const bool degenerate = y.norm() <= 1e-9 && t.norm() <= 1e-9;
      if (!(alt1 || alt2 || degenerate)) ++bad_alternative;
    }
  }
  const double secs = elapsed_s(t0);
  const bool pass = bad_aggregation == 0 && bad_alternative == 0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d aggregation / %d two-alternative failures",
                bad_aggregation, bad_alternative);
  return report(3, pass, buf, secs);
}

// 4: leading eigenvalue near alpha, second real eigenvalue near beta
int criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  BlockmodelParams params;
  params.n = 300;
  params.ell = 2;
  params.sizes = {{2, {5.0, 0.9}}, {3, {5.0, 0.9}}};
  const TheoryReport rep = theory_report(params);  // alpha = 15, beta = 38/3
  std::vector<double> lam1(20), lam2(20);
  parallel_for(20, [&](std::size_t s) {
    BlockmodelParams p = params;
    p.seed = derive_seed(0xc4, s);
    const LabelVector z = sample_labels(p.n, p.proportions(), derive_seed(0xc4a, s));
    Hypergraph H = sample_hypergraph(p, z);
    Spectrum S = leading_eigenpairs(build_Bprime(H), 6);
    Spectrum real = select_real_eigenpairs(S, 6, 1e-6, 0.0);
    lam1[s] = real.pairs.empty() ? 0.0 : real.pairs[0].value.real();
    lam2[s] = real.pairs.size() > 1 ? real.pairs[1].value.real() : 0.0;
  });
  const double m1 = median(lam1), m2 = median(lam2);
  const double secs = elapsed_s(t0);
  const bool pass = std::abs(m1 - rep.alpha) <= 0.10 * rep.alpha &&
                    std::abs(m2 - rep.beta) <= 0.15 * std::abs(rep.beta) &&
                    secs < 120.0 * 8.0 / pool_size();
  char buf[160];
  std::snprintf(buf, sizeof buf, "median lambda1 %.3f vs alpha %.3f, median real2 %.3f vs beta %.3f",
                m1, rep.alpha, m2, rep.beta);
  return report(4, pass, buf, secs);
}

// shared sweep runner for criteria 5 and 6
struct CellStat {
  double p2 = 0, p3 = 0, mean_ari = 0;
};

std::vector<CellStat> run_grid(const std::string& algo, std::size_t n, int trials,
                               std::uint64_t master) {
  const int steps = 11;
  std::vector<CellStat> cells(steps * steps);
  const std::size_t total = cells.size() * static_cast<std::size_t>(trials);
  std::vector<double> ari(total, 0.0);
  parallel_for(total, [&](std::size_t t) {
    const std::size_t cell = t / trials;
    const std::size_t trial = t % trials;
    const double p2 = static_cast<double>(cell / steps) / (steps - 1);
    const double p3 = static_cast<double>(cell % steps) / (steps - 1);
    BlockmodelParams params;
    params.n = n;
    params.ell = 2;
    params.sizes = {{2, {5.0, p2}}, {3, {5.0, p3}}};
    const std::uint64_t ts = derive_seed(master, cell, trial);
    params.seed = derive_seed(ts, 0x4859);
    const LabelVector z = sample_labels(n, params.proportions(), derive_seed(ts, 0x1ab5));
    Hypergraph H = sample_hypergraph(params, z);
    Clustering cl;
    if (algo == "nbhsc") {
      cl = nbhsc(H, 2, 2, ts, &z);
    } else {
      GroupMatrixSet G = build_G(params);
      cl = bphsc(H, 2, 2, 1, ts, BphscInit::known_params, nullptr, &z, &G);
    }
    ari[t] = cl.ari.value_or(0.0);
  });
  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    cells[cell].p2 = static_cast<double>(cell / steps) / (steps - 1);
    cells[cell].p3 = static_cast<double>(cell % steps) / (steps - 1);
    double m = 0.0;
    for (int t = 0; t < trials; ++t) m += ari[cell * trials + t];
    cells[cell].mean_ari = m / trials;
  }
  return cells;
}

// 5: NBHSC phase diagram vs the beta^2 = alpha hyperplane band
int criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cells = run_grid("nbhsc", 200, 20, 0xc5);
  const double alpha = 15.0, norm1 = 70.0 / 3.0;  // L1 norm of grad beta
  int out_total = 0, out_ok = 0, in_total = 0, in_ok = 0;
  for (const auto& cl : cells) {
    const double beta = 10.0 * cl.p2 + (40.0 / 3.0) * cl.p3 - 25.0 / 3.0;
    const double dist = (std::abs(beta) - std::sqrt(alpha)) / norm1;  // signed Linf distance
    if (dist >= 0.15) {
      ++out_total;
      if (cl.mean_ari > 0.1) ++out_ok;
    } else if (dist <= -0.1) {
      ++in_total;
      if (cl.mean_ari < 0.05) ++in_ok;
    }
  }
  const double secs = elapsed_s(t0);
  const bool pass = out_ok == out_total && in_ok == in_total && out_total > 0 &&
                    in_total > 0 && secs < 1800.0 * 8.0 / pool_size();
  char buf[128];
  std::snprintf(buf, sizeof buf, "outside %d/%d above 0.1, inside %d/%d below 0.05", out_ok,
                out_total, in_ok, in_total);
  return report(5, pass, buf, secs);
}

// 6: BPHSC-known-params phase diagram vs the |lambda| = 1 ellipse
int criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cells = run_grid("bphsc_known", 200, 20, 0xc6);
  // lambda(p) = 5(2p2-1)^2 + (160/9)(p3-1/4)^2; boundary sampled densely
  const double a2 = 1.0 / (2.0 * std::sqrt(5.0)), a3 = 3.0 / (4.0 * std::sqrt(10.0));
  std::vector<std::pair<double, double>> boundary;
  for (int i = 0; i < 4096; ++i) {
    const double th = 2.0 * M_PI * i / 4096.0;
    boundary.emplace_back(0.5 + a2 * std::cos(th), 0.25 + a3 * std::sin(th));
  }
  int out_total = 0, out_ok = 0, in_total = 0, in_ok = 0;
  for (const auto& cl : cells) {
    const double lam =
        5.0 * std::pow(2.0 * cl.p2 - 1.0, 2) + (160.0 / 9.0) * std::pow(cl.p3 - 0.25, 2);
    double dist = 1e9;
    for (const auto& [b2, b3] : boundary)
      dist = std::min(dist, std::max(std::abs(cl.p2 - b2), std::abs(cl.p3 - b3)));
    if (lam > 1.0 && dist >= 0.15) {
      ++out_total;
      if (cl.mean_ari > 0.1) ++out_ok;
    } else if (lam < 1.0 && dist >= 0.1) {
      ++in_total;
      if (cl.mean_ari < 0.05) ++in_ok;
    }
  }
  const double secs = elapsed_s(t0);
  const bool pass = out_ok == out_total && in_ok == in_total && out_total > 0 &&
                    in_total > 0 && secs < 1800.0 * 8.0 / pool_size();
  char buf[128];
  std::snprintf(buf, sizeof buf, "outside %d/%d above 0.1, inside %d/%d below 0.05", out_ok,
                out_total, in_ok, in_total);
  return report(6, pass, buf, secs);
}

// 7: three-cluster pipeline: real unit-passing eigenvalue count and BPHSC ARI
int criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = 150;
  const int ell = 3;
  std::vector<double> aris(20);
  std::vector<int> counts(20);
  parallel_for(20, [&](std::size_t s) {
    BlockmodelParams params;
    params.n = n;
    params.ell = ell;
    params.sizes = {{2, {5.0, 0.9}}, {3, {5.0, 0.1}}};
    params.seed = derive_seed(0xc7, s);
    const LabelVector z = sample_labels(n, params.proportions(), derive_seed(0xc7a, s));
    Hypergraph H = sample_hypergraph(params, z);
    // eigenvalue count with G estimated at the true labels
    GroupMatrixSet G = estimate_parameters(H, z, ell).G;
    Spectrum S = leading_eigenpairs(build_Jprime(H, G), 30);
    int count = 0;
    for (const auto& p : S.pairs)
      if (std::abs(p.value.imag()) <= 1e-6 * std::max(1.0, std::abs(p.value)) &&
          std::abs(p.value) > 1.0)
        ++count;
    counts[s] = count;
    Clustering cl = bphsc(H, ell, 8, 5, derive_seed(0xc7b, s), BphscInit::random, nullptr, &z);
    aris[s] = cl.ari.value_or(0.0);
  });
  int enough = 0;
  for (int c : counts) enough += c >= ell - 1;
  const double med_ari = median(aris);
  const double secs = elapsed_s(t0);
  const bool pass = enough >= 16 && med_ari > 0.5;
  char buf[128];
  std::snprintf(buf, sizeof buf, ">= %d real eigenvalues past unity in %d/20 seeds, median ARI %.3f",
                ell - 1, enough, med_ari);
  return report(7, pass, buf, secs);
}

// 8: estimator consistency and the 5-edge multiplicity fixture
int criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  BlockmodelParams params;
  params.n = 1000;
  params.ell = 2;
  params.sizes = {{3, {10.0, 0.8}}};
  const double cin_theory = ckin_ckout(3, 10.0, 0.8).first;
  std::vector<double> cin_hat(20);
  parallel_for(20, [&](std::size_t s) {
    BlockmodelParams p = params;
    p.seed = derive_seed(0xc8, s);
    const LabelVector z = sample_labels(p.n, p.proportions(), derive_seed(0xc8a, s));
    Hypergraph H = sample_hypergraph(p, z);
    const Eigen::MatrixXd C = estimate_parameters(H, z, 2).c_st.at(3);
    cin_hat[s] = 0.5 * (C(0, 0) + C(1, 1));
  });
  const double med = median(cin_hat);
  bool fixture_ok = true;
  {
    Hypergraph H(5, {{0, 1, 2, 3, 4}});
    const LabelVector z{0, 0, 1, 1, 2};
    const Estimate est = estimate_parameters(H, z, 3);
    const auto& C = est.c_st.at(5);
    auto m_hat = [&](int s, int t) { return C(s, t) * est.q_hat[s] * est.q_hat[t] * 5.0; };
    auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
    fixture_ok = near(m_hat(0, 1), 4) && near(m_hat(0, 2), 2) && near(m_hat(1, 2), 2) &&
                 near(m_hat(0, 0), 2) && near(m_hat(1, 1), 2) && near(m_hat(2, 2), 0);
  }
  const double secs = elapsed_s(t0);
  const bool pass = std::abs(med - cin_theory) <= 0.15 * cin_theory && fixture_ok;
  char buf[128];
  std::snprintf(buf, sizeof buf, "median c3_in %.3f vs theory %.3f, fixture %s", med,
                cin_theory, fixture_ok ? "exact" : "WRONG");
  return report(8, pass, buf, secs);
}

// 9: closed-form spot checks
int criterion9() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = std::abs(r_coeff(2)) <= 1e-15 && std::abs(r_coeff(3) - 1.0 / 3.0) <= 1e-15 &&
            std::abs(r_coeff(4) - 3.0 / 7.0) <= 1e-15;
  auto center = [](int k) {
    const double r = r_coeff(k);
    return (1.0 - 2.0 * r) / (2.0 - 2.0 * r);
  };
  ok = ok && std::abs(center(2) - 0.5) <= 1e-15 && std::abs(center(3) - 0.25) <= 1e-15;
  Rng rng(0xc9);
  int bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const int k = 2 + static_cast<int>(rng.below(5));
    const double c = 0.1 + 10.0 * rng.uniform();
    const double p = rng.uniform();
    auto [cin, cout] = ckin_ckout(k, c, p);
    const double via_split = 0.5 * (cin - cout);
    const double r = r_coeff(k);
    const double via_formula = (k - 1) * c * (2.0 * (1.0 - r) * p + 2.0 * r - 1.0);
    if (std::abs(via_split - via_formula) > 1e-12 * std::max(1.0, std::abs(via_split))) ++bad;
  }
  ok = ok && bad == 0;
  return report(9, ok, std::to_string(bad) + "/1000 beta cross-check failures", elapsed_s(t0));
}

// 10: optional real-data comparison; skipped when the dataset is absent
int criterion10() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string edges = "data/contact-primary-school.edges";
  const std::string labels = "data/contact-primary-school.labels";
  if (!std::filesystem::exists(edges) || !std::filesystem::exists(labels))
    return report(10, true, "SKIPPED: dataset files not present under data/", elapsed_s(t0));
  Hypergraph H = load_hypergraph_file(edges);
  const LabelVector z = load_labels(labels, H.n(), 11);
  std::vector<double> hsc(5), proj(5);
  for (std::size_t r = 0; r < 5; ++r) {
    hsc[r] = bphsc(H, 11, 30, 10, derive_seed(0xca, r), BphscInit::random, nullptr, &z)
                 .ari.value_or(0.0);
    proj[r] = bphsc(clique_projection(H), 11, 30, 10, derive_seed(0xcb, r),
                    BphscInit::random, nullptr, &z)
                  .ari.value_or(0.0);
  }
  const double mh = median(hsc), mp = median(proj);
  char buf[128];
  std::snprintf(buf, sizeof buf, "median ARI hypergraph %.3f vs projection %.3f", mh, mp);
  return report(10, mh > mp, buf, elapsed_s(t0));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..10>\n");
    return 2;
  }
  const int crit = std::atoi(argv[1]);
  switch (crit) {
    case 1: return criterion1();
    case 2: return criterion2();
    case 3: return criterion3();
    case 4: return criterion4();
    case 5: return criterion5();
    case 6: return criterion6();
    case 7: return criterion7();
    case 8: return criterion8();
    case 9: return criterion9();
    case 10: return criterion10();
    default:
      std::fprintf(stderr, "usage: acceptance <criterion 1..10>\n");
      return 2;
  }
}
