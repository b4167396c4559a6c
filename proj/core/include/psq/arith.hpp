#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace psq::arith {

// ---- prime generation -------------------------------------------------------

// All primes <= n (includes 2).  Plain sieve; n is a 32-bit bound because the
// base primes only ever need to reach sqrt of the largest window offset.
std::vector<std::uint32_t> primes_upto(std::uint32_t n);

// Smallest-prime-factor table for 0..n (spf[0] = spf[1] = 0).
std::vector<std::uint32_t> spf_table(std::uint32_t n);

// Cached base primes for factoring / segmented sieving.  Grows monotonically;
// returned snapshot is immutable and safe to read concurrently.
std::shared_ptr<const std::vector<std::uint32_t>> base_primes(std::uint32_t limit);

// Deterministic Miller-Rabin over the full u64 range.
bool is_prime(std::uint64_t n);

// Largest window length sieve_range accepts by default (~60 MB odd bitmap).
inline constexpr std::uint64_t default_window_budget = 1'000'000'000ull;

// Primality over the half-open-from-below window (lo, hi].  lo >= 2, so the
// window never contains 2 and the bitmap stores odd integers only.
struct PrimeWindow {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::vector<std::uint64_t> bits;  // bit per odd m in (lo, hi]

  bool contains(std::uint64_t m) const { return m > lo && m <= hi; }
  bool is_prime(std::uint64_t m) const {
    if (!contains(m) || (m & 1) == 0) return false;
    std::uint64_t idx = (m - first_odd()) / 2;
    return (bits[idx >> 6] >> (idx & 63)) & 1;
  }
  std::uint64_t count() const;
  std::vector<std::uint64_t> to_vector() const;
  std::uint64_t first_odd() const { return lo + 1 + ((lo + 1) & 1 ? 0 : 1); }
};

PrimeWindow sieve_range(std::uint64_t lo, std::uint64_t hi,
                        std::uint64_t budget = default_window_budget);

// ---- elementary arithmetic functions ---------------------------------------

struct Factorization {
  std::uint64_t n = 1;
  std::vector<std::pair<std::uint64_t, int>> factors;  // (prime, exponent), increasing
};

Factorization factorize(std::uint64_t n);

int mobius(std::uint64_t q);
std::uint64_t euler_phi(std::uint64_t q);

// Quadratic character of n modulo an odd prime p, in {-1, 0, 1}.
int legendre_symbol(std::int64_t n, std::uint64_t p);

// Indicator that every prime factor of m is >= z (m = 1 counts).
int rough_indicator(std::uint64_t m, double z);
// Indicator that every prime factor of m is <= z.
int smooth_indicator(std::uint64_t m, double z);

// #{m <= x : every prime factor of m is <= z}, by enumeration of products.
std::uint64_t smooth_count(std::uint64_t x, double z);

// ---- admissible congruence classes ------------------------------------------
// h2: targets of p + p^2 (even, not 1 mod 3).
// h3: targets of p^2 + p^2 + p^2 (3 mod 24, not divisible by 5).
// h4: inputs of the reduction n - q^2 with q a prime; 4 mod 24.

inline bool in_class_h2(std::uint64_t n) { return n % 2 == 0 && n % 3 != 1; }
inline bool in_class_h3(std::uint64_t n) { return n % 24 == 3 && n % 5 != 0; }
inline bool in_class_h4(std::uint64_t n) { return n % 24 == 4; }

// Modular helpers used across modules.
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

}  // namespace psq::arith
