#pragma once

// Reproducible random streams.
//
// Every draw is defined in terms of the 64-bit outputs of std::mt19937_64
// (whose output sequence is fixed by the C++ standard), so another
// implementation can replay a trajectory from the same seed:
//
//   uniform()  = (u64 >> 11) * 2^-53                      in [0, 1)
//   index(n)   = Lemire multiply-shift with rejection     in [0, n)
//   normal()   = Box-Muller, sqrt(-2 ln(1 - U1)) cos(2 pi U2), no caching
//   sample_without_replacement(n, k) = Floyd's algorithm, insertion order
//
// Independent per-run streams come from derive_seed(master, index), a
// splitmix64 mix of the two words.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace scent {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index));
}

class Rng {
  __extension__ using u128 = unsigned __int128;

 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  std::size_t index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::index: empty range");
    const std::uint64_t range = n;
    u128 m = static_cast<u128>(next_u64()) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
      const std::uint64_t threshold = (0 - range) % range;
      while (low < threshold) {
        m = static_cast<u128>(next_u64()) * range;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::size_t>(m >> 64);
  }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // k distinct indices from [0, n).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<std::size_t> out;
    out.reserve(k);
    if (k <= 64) {
      for (std::size_t j = n - k; j < n; ++j) {
        const std::size_t t = index(j + 1);
        bool seen = false;
        for (std::size_t v : out) {
          if (v == t) {
            seen = true;
            break;
          }
        }
        out.push_back(seen ? j : t);
      }
      return out;
    }
    std::vector<char> taken(n, 0);
    for (std::size_t j = n - k; j < n; ++j) {
      const std::size_t t = index(j + 1);
      const std::size_t pick = taken[t] ? j : t;
      taken[pick] = 1;
      out.push_back(pick);
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace scent
