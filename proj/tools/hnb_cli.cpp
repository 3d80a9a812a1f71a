// hnb: sampling, spectra, clustering, sweeps, and parameter estimation for
// nonbacktracking hypergraph spectral clustering experiments. All outputs are
// CSV; plotting stays external.
#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hnb/clustering.hpp"
#include "hnb/eigsolve.hpp"
#include "hnb/hsbm.hpp"
#include "hnb/hypergraph.hpp"
#include "hnb/operators.hpp"

namespace {

using namespace hnb;

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  bool reproducible = false;
  int threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "master RNG seed");
  cmd->add_option("--out", c.out, "output path (default: stdout)");
  cmd->add_flag("--reproducible", c.reproducible, "suppress the timestamp header");
  cmd->add_option("--threads", c.threads, "worker threads (0 = hardware)");
}

int worker_count(const Common& c) {
  if (c.threads > 0) return c.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// output stream that is either a file or stdout
struct Out {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Out(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw DataError("cannot open output file: " + path);
      os = &file;
    }
  }
  std::ostream& operator*() { return *os; }
};

void header(std::ostream& os, const Common& c, const std::string& what) {
  os << "# hnb " << what << "\n";
  if (!c.reproducible) {
    std::time_t t = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", std::gmtime(&t));
    os << "# generated " << buf << "Z\n";
  }
}

// per-size flag grammar: "2=5,3=0.9"
std::map<int, double> parse_size_map(const std::string& text, const std::string& flag) {
  std::map<int, double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError(flag, "expected k=value pairs");
    try {
      const int k = std::stoi(item.substr(0, eq));
      out[k] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw CLI::ValidationError(flag, "no pairs given");
  return out;
}

struct GridAxis {
  double lo = 0.0, hi = 1.0;
  int steps = 1;
};

// grid grammar: "2=0:1:11,3=0:1:11" meaning lo:hi:steps per size
std::map<int, GridAxis> parse_grid(const std::string& text) {
  std::map<int, GridAxis> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--grid", "expected k=lo:hi:steps");
    GridAxis ax;
    try {
      const int k = std::stoi(item.substr(0, eq));
      std::istringstream spec(item.substr(eq + 1));
      std::string part;
      std::getline(spec, part, ':');
      ax.lo = std::stod(part);
      std::getline(spec, part, ':');
      ax.hi = std::stod(part);
      std::getline(spec, part, ':');
      ax.steps = std::stoi(part);
      out[k] = ax;
    } catch (const std::exception&) {
      throw CLI::ValidationError("--grid", "cannot parse '" + item + "'");
    }
    if (ax.steps < 1) throw CLI::ValidationError("--grid", "steps must be >= 1");
  }
  if (out.empty()) throw CLI::ValidationError("--grid", "no axes given");
  return out;
}

BlockmodelParams make_params(std::size_t n, int ell, const std::map<int, double>& c,
                             const std::map<int, double>& p, const std::vector<double>& q) {
  BlockmodelParams params;
  params.n = n;
  params.ell = ell;
  params.q = q;
  for (const auto& [k, ck] : c) {
    SizeParams sp;
    sp.c = ck;
    auto it = p.find(k);
    sp.p = it == p.end() ? 0.0 : it->second;
    params.sizes[k] = sp;
  }
  params.validate();
  return params;
}

void write_theory_csv(std::ostream& os, const TheoryReport& rep) {
  os << "k,r_k,c_in,c_out,alpha_k,beta_k,gamma_k,x_k,a_k\n";
  for (const auto& st : rep.sizes)
    os << st.k << ',' << st.r_k << ',' << st.c_in << ',' << st.c_out << ',' << st.alpha_k
       << ',' << st.beta_k << ',' << st.gamma_k << ',' << st.x_k << ',' << st.a_k << "\n";
  os << "alpha,beta,lambda,nu,detect_vanilla,detect_bp\n";
  os << rep.alpha << ',' << rep.beta << ',' << rep.lambda << ',' << rep.nu << ','
     << (rep.detect_vanilla ? 1 : 0) << ',' << (rep.detect_bp ? 1 : 0) << "\n";
}

// ---------------------------------------------------------------- sample ----

struct SampleArgs {
  Common common;
  std::size_t n = 0;
  int groups = 2;
  std::string c_text, p_text;
  std::vector<double> q;
  bool fixed_count = false;
  std::string labels_out;
};

int cmd_sample(const SampleArgs& a) {
  const auto c = parse_size_map(a.c_text, "--c");
  const auto p = a.p_text.empty() ? std::map<int, double>{} : parse_size_map(a.p_text, "--p");
  BlockmodelParams params = make_params(a.n, a.groups, c, p, a.q);
  params.seed = derive_seed(a.common.seed, 0x5a17);
  const LabelVector z =
      sample_labels(a.n, params.proportions(), derive_seed(a.common.seed, 0x1ab5));
  Hypergraph H = sample_hypergraph(params, z, a.fixed_count);

  Out out(a.common.out);
  save_hypergraph(H, *out);
  const std::string lpath =
      !a.labels_out.empty() ? a.labels_out
                            : (a.common.out.empty() ? std::string() : a.common.out + ".labels");
  if (!lpath.empty()) {
    std::ofstream lf(lpath);
    if (!lf) throw DataError("cannot open labels file: " + lpath);
    save_labels(z, lf);
  }

  header(std::cout, a.common, "sample theory report");
  if (a.groups == 2 && std::abs(params.proportions()[0] - 0.5) <= 1e-9) {
    write_theory_csv(std::cout, theory_report(params));
  } else {
    std::cout << "# theory report requires two balanced groups; skipped\n";
  }
  return 0;
}

// -------------------------------------------------------------- spectrum ----

struct SpectrumArgs {
  Common common;
  std::string input;
  std::string op = "Bprime";
  std::size_t h = 10;
  std::string labels;
  int groups = 2;
  std::string c_text, p_text;
  bool dedup = false;
  std::size_t n_override = 0;
};

int cmd_spectrum(const SpectrumArgs& a) {
  Hypergraph H = load_hypergraph_file(
      a.input, a.n_override ? std::optional<std::size_t>(a.n_override) : std::nullopt, a.dedup);
  std::unique_ptr<SparseLinearOperator> M;
  if (a.op == "B") {
    M = std::make_unique<SparseLinearOperator>(build_B(H));
  } else if (a.op == "Bprime") {
    M = std::make_unique<SparseLinearOperator>(build_Bprime(H));
  } else if (a.op == "Jprime") {
    GroupMatrixSet G;
    if (!a.labels.empty()) {
      const LabelVector z = load_labels(a.labels, H.n(), a.groups);
      G = estimate_parameters(H, z, a.groups).G;
    } else if (!a.c_text.empty()) {
      const auto c = parse_size_map(a.c_text, "--c");
      const auto p = a.p_text.empty() ? std::map<int, double>{} : parse_size_map(a.p_text, "--p");
      G = build_G(make_params(H.n(), a.groups, c, p, {}));
    } else {
      throw CLI::ValidationError("--operator", "Jprime needs --labels or --c/--p");
    }
    M = std::make_unique<SparseLinearOperator>(build_Jprime(H, G));
  } else {
    throw CLI::ValidationError("--operator", "choose B, Bprime, or Jprime");
  }

  EigOptions eopts;
  eopts.seed = derive_seed(a.common.seed, 0x3b);
  const std::size_t h = std::min<std::size_t>(a.h, static_cast<std::size_t>(M->rows()) - 2);
  Spectrum S = leading_eigenpairs(*M, std::max<std::size_t>(h, 1), eopts);

  Out out(a.common.out);
  header(*out, a.common, "spectrum " + a.op);
  *out << "index,re,im,residual\n";
  (*out).precision(12);
  for (std::size_t i = 0; i < S.pairs.size(); ++i)
    *out << i << ',' << S.pairs[i].value.real() << ',' << S.pairs[i].value.imag() << ','
         << S.pairs[i].residual << "\n";
  *out << "bulk_radius," << S.bulk_radius << "\n";
  return 0;
}

// --------------------------------------------------------------- cluster ----

struct ClusterArgs {
  Common common;
  std::string input;
  std::string algo = "nbhsc";
  int groups = 2;
  std::size_t h = 8;
  int rounds = 10;
  std::string truth;
  bool project = false;
  std::string c_text, p_text;
  bool dedup = false;
  std::size_t n_override = 0;
};

Clustering run_algo(const Hypergraph& H, const std::string& algo, int ell, std::size_t h,
                    int rounds, std::uint64_t seed, const LabelVector* truth,
                    const GroupMatrixSet* known) {
  if (algo == "nbhsc") return nbhsc(H, ell, h, seed, truth);
  if (algo == "bphsc")
    return bphsc(H, ell, h, rounds, seed, BphscInit::random, nullptr, truth);
  if (algo == "bphsc_known") {
    if (!known) throw CLI::ValidationError("--algo", "bphsc_known needs --c (and --p)");
    return bphsc(H, ell, h, rounds, seed, BphscInit::known_params, nullptr, truth, known);
  }
  if (algo == "bpgsc")
    return bphsc(clique_projection(H), ell, h, rounds, seed, BphscInit::random, nullptr, truth);
  throw CLI::ValidationError("--algo", "choose nbhsc, bphsc, bphsc_known, or bpgsc");
}

int cmd_cluster(const ClusterArgs& a) {
  Hypergraph H = load_hypergraph_file(
      a.input, a.n_override ? std::optional<std::size_t>(a.n_override) : std::nullopt, a.dedup);
  if (a.project && a.algo != "bpgsc") H = clique_projection(H);

  std::optional<LabelVector> truth;
  if (!a.truth.empty()) truth = load_labels(a.truth, H.n(), a.groups);

  std::optional<GroupMatrixSet> known;
  if (!a.c_text.empty()) {
    const auto c = parse_size_map(a.c_text, "--c");
    const auto p = a.p_text.empty() ? std::map<int, double>{} : parse_size_map(a.p_text, "--p");
    known = build_G(make_params(H.n(), a.groups, c, p, {}));
  }

  Clustering cl = run_algo(H, a.algo, a.groups, a.h, a.rounds, a.common.seed,
                           truth ? &*truth : nullptr, known ? &*known : nullptr);

  if (!a.common.out.empty()) {
    std::ofstream lf(a.common.out);
    if (!lf) throw DataError("cannot open output file: " + a.common.out);
    save_labels(cl.labels, lf);
  }
  header(std::cout, a.common, "cluster " + a.algo);
  std::cout << "seed,ell,h,rounds,objective,variance_explained,embedding_columns,degenerate,ari\n";
  std::cout << a.common.seed << ',' << a.groups << ',' << a.h << ',' << a.rounds << ','
            << cl.kmeans_objective << ',' << cl.variance_explained << ','
            << cl.embedding_columns << ',' << (cl.degenerate ? 1 : 0) << ',';
  if (cl.ari)
    std::cout << *cl.ari;
  std::cout << "\n";
  if (a.common.out.empty()) {
    std::cout << "labels";
    for (int v : cl.labels) std::cout << ',' << v;
    std::cout << "\n";
  }
  return 0;
}

// ----------------------------------------------------------------- sweep ----

struct SweepArgs {
  Common common;
  std::size_t n = 0;
  int groups = 2;
  std::string c_text, p_text, grid_text;
  int trials = 20;
  std::string algo = "nbhsc";
  std::size_t h = 4;
  int rounds = 5;
  std::string boundary_out;
};

void write_boundary_csv(std::ostream& os, const BlockmodelParams& base, int ka, int kb) {
  os << "curve,p_" << ka << ",p_" << kb << "\n";
  auto with = [&](double pa, double pb) {
    BlockmodelParams p = base;
    p.sizes[ka].p = pa;
    p.sizes[kb].p = pb;
    return theory_report(p);
  };
  const TheoryReport r00 = with(0.0, 0.0);
  double alpha = r00.alpha;
  double ra = 0, rb = 0, aa = 0, ab = 0, xa = 0, xb = 0;
  for (const auto& st : r00.sizes) {
    if (st.k == ka) {
      ra = st.r_k;
      aa = st.alpha_k;
      xa = st.x_k;
    }
    if (st.k == kb) {
      rb = st.r_k;
      ab = st.alpha_k;
      xb = st.x_k;
    }
  }
  // beta is affine in each p_k: beta_k(p) = alpha_k ((2-2r_k) p + 2r_k - 1)
  const double slope_a = aa * (2.0 - 2.0 * ra), slope_b = ab * (2.0 - 2.0 * rb);
  const double beta0 = r00.beta;
  const int N = 200;
  for (double sgn : {1.0, -1.0}) {
    const double target = sgn * std::sqrt(alpha);
    for (int t = 0; t <= N; ++t) {
      const double pa = static_cast<double>(t) / N;
      const double pb = (target - beta0 - slope_a * pa) / slope_b;
      if (pb >= 0.0 && pb <= 1.0)
        os << (sgn > 0 ? "hyperplane_plus" : "hyperplane_minus") << ',' << pa << ',' << pb
           << "\n";
    }
  }
  // |lambda| = 1 ellipse: sum over active sizes of alpha_k (2-2r_k)^2 (p-x_k)^2
  double lam_fixed = 0.0;
  for (const auto& st : r00.sizes)
    if (st.k != ka && st.k != kb) lam_fixed += st.gamma_k * st.beta_k;
  const double rem = 1.0 - lam_fixed;
  if (rem > 0.0) {
    const double ea = std::sqrt(rem / aa) / (2.0 - 2.0 * ra);
    const double eb = std::sqrt(rem / ab) / (2.0 - 2.0 * rb);
    for (int t = 0; t <= 2 * N; ++t) {
      const double th = M_PI * t / N;
      const double pa = xa + ea * std::cos(th), pb = xb + eb * std::sin(th);
      if (pa >= 0.0 && pa <= 1.0 && pb >= 0.0 && pb <= 1.0)
        os << "ellipse," << pa << ',' << pb << "\n";
    }
  }
  // lambda = nu contour, numeric scan
  const int M = 400;
  for (int i = 0; i <= M; ++i) {
    const double pa = static_cast<double>(i) / M;
    double prev = 0.0;
    for (int j = 0; j <= M; ++j) {
      const double pb = static_cast<double>(j) / M;
      const TheoryReport r = with(pa, pb);
      const double f = r.lambda - r.nu;
      if (j > 0 && ((prev < 0.0) != (f < 0.0)) && prev != 0.0) {
        const double frac = prev / (prev - f);
        os << "lambda_eq_nu," << pa << ',' << (pb - 1.0 / M + frac / M) << "\n";
      }
      prev = f;
    }
  }
}

int cmd_sweep(const SweepArgs& a) {
  const auto c = parse_size_map(a.c_text, "--c");
  const auto p_fixed =
      a.p_text.empty() ? std::map<int, double>{} : parse_size_map(a.p_text, "--p");
  const auto grid = parse_grid(a.grid_text);
  for (const auto& [k, ax] : grid)
    if (!c.count(k)) throw CLI::ValidationError("--grid", "grid size missing from --c");

  std::vector<int> axes;
  for (const auto& [k, ax] : grid) axes.push_back(k);
  std::vector<int> steps;
  std::size_t cells = 1;
  for (int k : axes) {
    steps.push_back(grid.at(k).steps);
    cells *= static_cast<std::size_t>(grid.at(k).steps);
  }

  auto cell_p = [&](std::size_t cell) {
    std::map<int, double> p = p_fixed;
    std::size_t rest = cell;
    for (std::size_t d = 0; d < axes.size(); ++d) {
      const auto& ax = grid.at(axes[d]);
      const std::size_t idx = rest % static_cast<std::size_t>(ax.steps);
      rest /= static_cast<std::size_t>(ax.steps);
      p[axes[d]] =
          ax.steps == 1 ? ax.lo : ax.lo + (ax.hi - ax.lo) * static_cast<double>(idx) /
                                             (ax.steps - 1);
    }
    return p;
  };

  std::vector<double> ari(cells * static_cast<std::size_t>(a.trials), 0.0);
  std::atomic<std::size_t> next{0};
  const std::size_t total = cells * static_cast<std::size_t>(a.trials);
  std::vector<std::string> errors;
  std::mutex err_mu;
  auto work = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= total) return;
      const std::size_t cell = t / a.trials;
      const std::size_t trial = t % a.trials;
      try {
        BlockmodelParams params = make_params(a.n, a.groups, c, cell_p(cell), {});
        const std::uint64_t ts = derive_seed(a.common.seed, cell, trial);
        params.seed = derive_seed(ts, 0x4859);
        const LabelVector z = sample_labels(a.n, params.proportions(), derive_seed(ts, 0x1ab5));
        Hypergraph H = sample_hypergraph(params, z);
        std::optional<GroupMatrixSet> known;
        if (a.algo == "bphsc_known") known = build_G(params);
        Clustering cl = run_algo(H, a.algo, a.groups, a.h, a.rounds, ts, &z,
                                 known ? &*known : nullptr);
        ari[t] = cl.ari.value_or(0.0);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mu);
        errors.push_back(e.what());
        return;
      }
    }
  };
  const int nw = std::min<int>(worker_count(a.common), static_cast<int>(total));
  std::vector<std::thread> pool;
  for (int w = 0; w < nw; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (!errors.empty()) throw NumericError("sweep worker failed: " + errors.front());

  Out out(a.common.out);
  header(*out, a.common, "sweep " + a.algo);
  for (int k : axes) *out << "p_" << k << ',';
  *out << "mean_ari,std_ari,trials\n";
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const auto p = cell_p(cell);
    double mean = 0.0;
    for (int t = 0; t < a.trials; ++t) mean += ari[cell * a.trials + t];
    mean /= a.trials;
    double var = 0.0;
    for (int t = 0; t < a.trials; ++t) {
      const double d = ari[cell * a.trials + t] - mean;
      var += d * d;
    }
    const double sd = a.trials > 1 ? std::sqrt(var / (a.trials - 1)) : 0.0;
    for (int k : axes) *out << p.at(k) << ',';
    *out << mean << ',' << sd << ',' << a.trials << "\n";
  }

  if (!a.boundary_out.empty()) {
    if (axes.size() != 2)
      throw CLI::ValidationError("--boundary-out", "needs exactly two grid axes");
    std::ofstream bf(a.boundary_out);
    if (!bf) throw DataError("cannot open boundary file: " + a.boundary_out);
    header(bf, a.common, "sweep boundaries");
    write_boundary_csv(bf, make_params(a.n, a.groups, c, p_fixed, {}), axes[0], axes[1]);
  }
  return 0;
}

// -------------------------------------------------------------- estimate ----

struct EstimateArgs {
  Common common;
  std::string input;
  std::string labels;
  int groups = 2;
  bool dedup = false;
  std::size_t n_override = 0;
};

int cmd_estimate(const EstimateArgs& a) {
  Hypergraph H = load_hypergraph_file(
      a.input, a.n_override ? std::optional<std::size_t>(a.n_override) : std::nullopt, a.dedup);
  const LabelVector z = load_labels(a.labels, H.n(), a.groups);
  Estimate est = estimate_parameters(H, z, a.groups);
  Out out(a.common.out);
  header(*out, a.common, "estimate");
  (*out).precision(12);
  *out << "kind,k,s,t,value\n";
  for (int s = 0; s < a.groups; ++s) *out << "q,,," << s << ',' << est.q_hat[s] << "\n";
  for (const auto& [k, C] : est.c_st)
    for (int s = 0; s < a.groups; ++s)
      for (int t = 0; t < a.groups; ++t)
        *out << "c," << k << ',' << s << ',' << t << ',' << C(s, t) << "\n";
  for (const auto& [k, Gk] : est.G.G)
    for (int s = 0; s < a.groups; ++s)
      for (int t = 0; t < a.groups; ++t)
        *out << "G," << k << ',' << s << ',' << t << ',' << Gk(s, t) << "\n";
  for (const auto& [k, C] : est.c_st)
    for (int s = 0; s < a.groups; ++s) *out << "c_diag," << k << ',' << s << ",," << C(s, s)
                                            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonbacktracking hypergraph spectral clustering toolkit"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help and exit");

  SampleArgs sa;
  CLI::App* sample = app.add_subcommand("sample", "draw a blockmodel hypergraph");
  sample->set_help_flag("--help", "print help and exit");
  add_common(sample, sa.common);
  sample->add_option("--n", sa.n, "number of nodes")->required();
  sample->add_option("--groups", sa.groups, "number of groups");
  sample->add_option("--c", sa.c_text, "mean degrees, e.g. 2=5,3=5")->required();
  sample->add_option("--p", sa.p_text, "within-cluster fractions, e.g. 2=0.9,3=0.1");
  sample->add_option("--q", sa.q, "group proportions (default balanced)");
  sample->add_flag("--fixed-count", sa.fixed_count, "deterministic edge counts");
  sample->add_option("--labels-out", sa.labels_out, "labels output path");

  SpectrumArgs spa;
  CLI::App* spectrum = app.add_subcommand("spectrum", "leading eigenvalues of an operator");
  spectrum->set_help_flag("--help", "print help and exit");
  add_common(spectrum, spa.common);
  spectrum->add_option("--input", spa.input, "hyperedge-list file")->required();
  spectrum->add_option("--operator", spa.op, "B | Bprime | Jprime");
  spectrum->add_option("--h", spa.h, "number of eigenpairs");
  spectrum->add_option("--labels", spa.labels, "labels file (Jprime via estimation)");
  spectrum->add_option("--groups", spa.groups, "number of groups");
  spectrum->add_option("--c", spa.c_text, "mean degrees (Jprime via theory)");
  spectrum->add_option("--p", spa.p_text, "within-cluster fractions");
  spectrum->add_flag("--dedup", spa.dedup, "collapse parallel edges");
  spectrum->add_option("--n", spa.n_override, "node count override");

  ClusterArgs ca;
  CLI::App* cluster = app.add_subcommand("cluster", "cluster a hypergraph");
  cluster->set_help_flag("--help", "print help and exit");
  add_common(cluster, ca.common);
  cluster->add_option("--input", ca.input, "hyperedge-list file")->required();
  cluster->add_option("--algo", ca.algo, "nbhsc | bphsc | bphsc_known | bpgsc");
  cluster->add_option("--groups", ca.groups, "number of groups");
  cluster->add_option("--h", ca.h, "eigenvectors to use");
  cluster->add_option("--rounds", ca.rounds, "BPHSC rounds");
  cluster->add_option("--truth", ca.truth, "reference labels for ARI");
  cluster->add_flag("--project", ca.project, "run on the clique projection");
  cluster->add_option("--c", ca.c_text, "mean degrees (bphsc_known)");
  cluster->add_option("--p", ca.p_text, "within-cluster fractions (bphsc_known)");
  cluster->add_flag("--dedup", ca.dedup, "collapse parallel edges");
  cluster->add_option("--n", ca.n_override, "node count override");

  SweepArgs swa;
  CLI::App* sweep = app.add_subcommand("sweep", "phase-diagram grid of planted models");
  sweep->set_help_flag("--help", "print help and exit");
  add_common(sweep, swa.common);
  sweep->add_option("--n", swa.n, "number of nodes")->required();
  sweep->add_option("--groups", swa.groups, "number of groups");
  sweep->add_option("--c", swa.c_text, "mean degrees")->required();
  sweep->add_option("--p", swa.p_text, "fixed within-cluster fractions");
  sweep->add_option("--grid", swa.grid_text, "axes, e.g. 2=0:1:11,3=0:1:11")->required();
  sweep->add_option("--trials", swa.trials, "trials per cell");
  sweep->add_option("--algo", swa.algo, "nbhsc | bphsc | bphsc_known | bpgsc");
  sweep->add_option("--h", swa.h, "eigenvectors to use");
  sweep->add_option("--rounds", swa.rounds, "BPHSC rounds");
  sweep->add_option("--boundary-out", swa.boundary_out, "theory boundary CSV path");

  EstimateArgs ea;
  CLI::App* estimate = app.add_subcommand("estimate", "estimate blockmodel parameters");
  estimate->set_help_flag("--help", "print help and exit");
  add_common(estimate, ea.common);
  estimate->add_option("--input", ea.input, "hyperedge-list file")->required();
  estimate->add_option("--labels", ea.labels, "labels file")->required();
  estimate->add_option("--groups", ea.groups, "number of groups")->required();
  estimate->add_flag("--dedup", ea.dedup, "collapse parallel edges");
  estimate->add_option("--n", ea.n_override, "node count override");

  try {
    app.parse(argc, argv);
    if (*sample) return cmd_sample(sa);
    if (*spectrum) return cmd_spectrum(spa);
    if (*cluster) return cmd_cluster(ca);
    if (*sweep) return cmd_sweep(swa);
    if (*estimate) return cmd_estimate(ea);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const hnb::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const hnb::NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
