#ifndef HNB_RNG_HPP
#define HNB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace hnb {

// splitmix64 step; used to derive independent stream seeds from (master, salt...).
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return mix64(mix64(master ^ mix64(a)) ^ mix64(b));
}

// mt19937_64 with hand-rolled conversions so that seeded output is identical
// across standard libraries (std::uniform_*_distribution is not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // uniform in [0,1) with 53 random bits
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // uniform integer in [0, n), multiply-shift (bias < 2^-64, deterministic)
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    return static_cast<std::uint64_t>(
        (static_cast<__uint128_t>(gen_()) * static_cast<__uint128_t>(n)) >> 64);
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t poisson(double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("poisson: lambda < 0");
    if (lambda == 0.0) return 0;
    if (lambda < 30.0) {
      const double l = std::exp(-lambda);
      std::uint64_t k = 0;
      double p = 1.0;
      do {
        ++k;
        p *= uniform();
      } while (p > l);
      return k - 1;
    }
    // split recursively: Poisson(a+b) = Poisson(a) + Poisson(b)
    const double half = std::floor(lambda / 2.0);
    return poisson(half) + poisson(lambda - half);
  }

  std::size_t categorical(std::span<const double> w) {
    double total = 0.0;
    for (double x : w) total += x;
    double u = uniform() * total;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      u -= w[i];
      if (u < 0.0) return i;
    }
    return w.empty() ? 0 : w.size() - 1;
  }

  // k distinct values from [0, n), ascending (Floyd's algorithm + sort-free merge)
  std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k) {
    if (k > n) throw std::invalid_argument("sample_distinct: k > n");
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t j = n - k; j < n; ++j) {
      std::size_t t = below(j + 1);
      bool dup = false;
      for (std::size_t v : out)
        if (v == t) {
          dup = true;
          break;
        }
      std::size_t v = dup ? j : t;
      auto it = out.begin();
      while (it != out.end() && *it < v) ++it;
      out.insert(it, v);
    }
    return out;
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hnb

#endif
