#pragma once

// Hand-rolled generators for property tests. Streams are fixed by the seed.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace testgen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed * 0x2545F4914F6CDD1DULL + 1) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // [lo, hi]
  int range(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool chance(double p) { return uniform() < p; }
  double gaussian() {
    const double u = std::max(uniform(), 1e-300);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * uniform());
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[next() % i]);
  }

 private:
  std::uint64_t s_;
};

inline std::vector<std::string> tokens(Rng& rng, int max_len, int alphabet) {
  static const char* kWords[] = {"x", "y", "=", "+", "(", ")", ";", "if", "return", "1", "z", "for"};
  std::vector<std::string> out(static_cast<std::size_t>(rng.range(0, max_len)));
  for (auto& t : out) t = kWords[rng.range(0, std::min(alphabet, 12) - 1)];
  return out;
}

inline std::vector<double> unit_vector(Rng& rng, int dim) {
  for (;;) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    double n = 0.0;
    for (auto& x : v) {
      x = rng.gaussian();
      n += x * x;
    }
    n = std::sqrt(n);
    if (n < 1e-6) continue;
    for (auto& x : v) x /= n;
    return v;
  }
}

}  // namespace testgen
