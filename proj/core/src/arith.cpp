#include "psq/arith.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace psq::arith {

std::vector<std::uint32_t> primes_upto(std::uint32_t n) {
  std::vector<std::uint32_t> primes;
  if (n < 2) return primes;
  std::vector<bool> comp(static_cast<std::size_t>(n) + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= n; j += i) comp[j] = true;
  }
  return primes;
}

std::vector<std::uint32_t> spf_table(std::uint32_t n) {
  std::vector<std::uint32_t> spf(static_cast<std::size_t>(n) + 1, 0);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (spf[i] != 0) continue;
    for (std::uint64_t j = i; j <= n; j += i)
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
  }
  return spf;
}

namespace {
std::mutex base_mutex;
std::shared_ptr<const std::vector<std::uint32_t>> base_cache;
std::uint32_t base_limit = 0;
}  // namespace

std::shared_ptr<const std::vector<std::uint32_t>> base_primes(std::uint32_t limit) {
  std::lock_guard<std::mutex> lock(base_mutex);
  if (limit > base_limit || !base_cache) {
    // Round up so repeated slightly-larger requests don't re-sieve.
    std::uint32_t target = std::max<std::uint32_t>(limit, 1u << 16);
    if (target < base_limit * 2 && base_limit > 0)
      target = std::max(target, base_limit * 2);
    base_cache = std::make_shared<const std::vector<std::uint32_t>>(primes_upto(target));
    base_limit = target;
  }
  return base_cache;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  // Deterministic witness set for the full 64-bit range.
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t PrimeWindow::count() const {
  std::uint64_t c = 0;
  for (std::uint64_t w : bits) c += static_cast<std::uint64_t>(__builtin_popcountll(w));
  return c;
}

std::vector<std::uint64_t> PrimeWindow::to_vector() const {
  std::vector<std::uint64_t> out;
  out.reserve(count());
  std::uint64_t fo = first_odd();
  for (std::uint64_t m = fo; m <= hi; m += 2)
    if (is_prime(m)) out.push_back(m);
  return out;
}

PrimeWindow sieve_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t budget) {
  if (lo < 2) throw std::invalid_argument("sieve_range: lo must be >= 2");
  if (hi <= lo) throw std::invalid_argument("sieve_range: hi must exceed lo");
  if (hi - lo > budget)
    throw std::length_error("sieve_range: window exceeds memory budget");

  PrimeWindow win;
  win.lo = lo;
  win.hi = hi;
  std::uint64_t fo = win.first_odd();
  std::uint64_t n_odd = fo > hi ? 0 : (hi - fo) / 2 + 1;
  win.bits.assign((n_odd + 63) / 64, ~0ull);
  if (n_odd == 0) return win;
  // Clear slack bits past the end so popcounts stay exact.
  if (n_odd % 64) win.bits.back() = (~0ull) >> (64 - n_odd % 64);

  std::uint32_t root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(hi))) + 2;
  auto base = base_primes(root);
  for (std::uint32_t p : *base) {
    if (p == 2) continue;
    std::uint64_t pp = p;
    if (pp * pp > hi) break;
    // First odd multiple k*p in the window with k >= p (keeps p itself prime).
    std::uint64_t k = (lo / pp) + 1;
    if (k < pp) k = pp;
    if ((k & 1) == 0) ++k;
    for (std::uint64_t m = k * pp; m <= hi; m += 2 * pp) {
      std::uint64_t idx = (m - fo) / 2;
      win.bits[idx >> 6] &= ~(1ull << (idx & 63));
    }
  }
  return win;
}

Factorization factorize(std::uint64_t n) {
  Factorization f;
  f.n = n;
  if (n <= 1) return f;
  std::uint64_t rem = n;
  std::uint32_t root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(n))) + 2;
  auto base = base_primes(root);
  for (std::uint32_t p : *base) {
    std::uint64_t pp = p;
    if (pp * pp > rem) break;
    if (rem % pp == 0) {
      int e = 0;
      while (rem % pp == 0) { rem /= pp; ++e; }
      f.factors.emplace_back(pp, e);
    }
  }
  if (rem > 1) f.factors.emplace_back(rem, 1);
  return f;
}

int mobius(std::uint64_t q) {
  if (q == 0) throw std::invalid_argument("mobius: q must be >= 1");
  auto f = factorize(q);
  for (const auto& pe : f.factors)
    if (pe.second >= 2) return 0;
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

std::uint64_t euler_phi(std::uint64_t q) {
  if (q == 0) throw std::invalid_argument("euler_phi: q must be >= 1");
  std::uint64_t r = q;
  for (const auto& pe : factorize(q).factors) r -= r / pe.first;
  return r;
}

int legendre_symbol(std::int64_t n, std::uint64_t p) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw std::invalid_argument("legendre_symbol: p must be an odd prime");
  std::int64_t r = n % static_cast<std::int64_t>(p);
  if (r < 0) r += static_cast<std::int64_t>(p);
  if (r == 0) return 0;
  std::uint64_t e = powmod(static_cast<std::uint64_t>(r), (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

int rough_indicator(std::uint64_t m, double z) {
  if (m == 0) throw std::invalid_argument("rough_indicator: m must be >= 1");
  if (m == 1) return 1;
  for (const auto& pe : factorize(m).factors)
    if (static_cast<double>(pe.first) < z) return 0;
  return 1;
}

int smooth_indicator(std::uint64_t m, double z) {
  if (m == 0) throw std::invalid_argument("smooth_indicator: m must be >= 1");
  if (m == 1) return 1;
  auto f = factorize(m);
  // Largest prime factor decides.
  return static_cast<double>(f.factors.back().first) <= z ? 1 : 0;
}

namespace {
std::uint64_t smooth_count_rec(std::uint64_t limit,
                               const std::vector<std::uint32_t>& primes,
                               std::size_t i) {
  // Primes are increasing, so once primes[i] > limit only the empty product fits.
  if (i == primes.size() || primes[i] > limit) return 1;
  std::uint64_t total = 0;
  std::uint64_t pw = 1;
  for (;;) {
    total += smooth_count_rec(limit / pw, primes, i + 1);
    if (pw > limit / primes[i]) break;
    pw *= primes[i];
  }
  return total;
}
}  // namespace

std::uint64_t smooth_count(std::uint64_t x, double z) {
  if (x < 2 || z < 2 || z > static_cast<double>(x))
    throw std::invalid_argument("smooth_count: need 2 <= z <= x");
  // Every m <= x is x-smooth, so cutoffs at or above x need no enumeration.
  if (z >= static_cast<double>(x)) return x;
  auto primes = primes_upto(static_cast<std::uint32_t>(z));
  return smooth_count_rec(x, primes, 0);
}

}  // namespace psq::arith
