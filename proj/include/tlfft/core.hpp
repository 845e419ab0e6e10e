#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tlfft {

/// Argument outside the mathematical domain of an operation (e.g. |x| >= 1/2).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A construction would exceed its configured size cap.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Lattice search ran out of candidates.
struct SearchExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Caller-supplied data is malformed (non-finite samples, dimension mismatch).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DetectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Named sub-seed of a master seed. Every randomized path draws from its own
/// stream so that adding draws in one place never shifts another.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return detail::splitmix64(master ^ detail::splitmix64(h));
}

/// Uniform integer in [0, n). The std distributions are implementation
/// defined, so results would differ between standard libraries.
inline std::uint64_t uniform_below(Rng& gen, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = gen();
  } while (v >= limit);
  return v % n;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace tlfft
