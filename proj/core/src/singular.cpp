#include "psq/singular.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "psq/arith.hpp"
#include "psq/common.hpp"

namespace psq::singular {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

// FFTW's planner is not thread-safe; creation/destruction serialize here.
// Execution on distinct buffers is safe concurrently.
std::mutex fftw_mutex;

void check_j(int j) {
  if (j != 2 && j != 3)
    throw std::invalid_argument("singular: j must be 2 or 3");
}

// Direct character sums for all residue classes at once:
//   T[r]    = #{x reduced mod q : x^2 = r (q)}
//   S[a]    = sum_r T[r] e(+ar/q)            (backward FFT)
//   B[a]    = prefactor * S[a]^e  on reduced a, else 0
//   A[n]    = sum_a B[a] e(-an/q)            (forward FFT)
// This is an exact reorganization of the defining double sum.
std::vector<std::complex<double>> row_complex(int j, std::uint64_t q) {
  check_j(j);
  if (q == 0) throw std::invalid_argument("local_factor_row: q must be >= 1");
  if (q > 100'000'000ull)
    throw std::length_error("local_factor_row: q beyond supported range");
  if (q == 1) return {std::complex<double>(1.0, 0.0)};

  auto f = arith::factorize(q);
  int mu = 1;
  std::uint64_t phi = 1;
  for (const auto& [p, k] : f.factors) {
    mu = k >= 2 ? 0 : -mu;
    phi *= (p - 1);
    for (int i = 1; i < k; ++i) phi *= p;
  }
  // j = 2 carries mu(q): nonsquarefree q contribute exactly zero.
  if (j == 2 && mu == 0)
    return std::vector<std::complex<double>>(q, {0.0, 0.0});

  const std::size_t n = static_cast<std::size_t>(q);
  std::vector<std::complex<double>> buf(n, {0.0, 0.0});

  fftw_plan plan_b, plan_f;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    auto* raw = reinterpret_cast<fftw_complex*>(buf.data());
    plan_b = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_BACKWARD,
                              FFTW_ESTIMATE);
    plan_f = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_FORWARD,
                              FFTW_ESTIMATE);
  }

  for (std::uint64_t x = 0; x < q; ++x)
    if (std::gcd(x, q) == 1) buf[arith::mulmod(x, x, q)] += 1.0;
  fftw_execute(plan_b);  // buf[a] = S(q,a) for every a

  const double phid = static_cast<double>(phi);
  const double pref2 = static_cast<double>(mu) / (phid * phid);
  const double pref3 = 1.0 / (phid * phid * phid);
  for (std::uint64_t a = 0; a < q; ++a) {
    if (std::gcd(a, q) != 1) {
      buf[a] = 0.0;
      continue;
    }
    std::complex<double> s = buf[a];
    buf[a] = j == 2 ? pref2 * s : pref3 * (s * s * s);
  }
  fftw_execute(plan_f);  // buf[r] = A_j(n,q) for n = r mod q

  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fftw_destroy_plan(plan_b);
    fftw_destroy_plan(plan_f);
  }
  return buf;
}

double real_checked(std::complex<double> v, std::uint64_t q) {
  if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v.real())))
    throw ConsistencyError("local factor has non-real value at q=" +
                           std::to_string(q) + ": imag=" +
                           std::to_string(v.imag()));
  return v.real();
}

}  // namespace

std::complex<double> gauss_sum(std::uint64_t q, std::int64_t a) {
  if (q == 0) throw std::invalid_argument("gauss_sum: q must be >= 1");
  std::int64_t qi = static_cast<std::int64_t>(q);
  std::uint64_t ar = static_cast<std::uint64_t>(((a % qi) + qi) % qi);
  if (std::gcd(ar, q) != 1 && q > 1)
    throw std::domain_error("gauss_sum: a and q must be coprime");
  if (q == 1) return {1.0, 0.0};
  std::complex<double> s = 0.0;
  for (std::uint64_t x = 1; x <= q; ++x) {
    if (std::gcd(x, q) != 1) continue;
    std::uint64_t r = arith::mulmod(ar, arith::mulmod(x, x, q), q);
    s += std::polar(1.0, two_pi * static_cast<double>(r) / static_cast<double>(q));
  }
  return s;
}

std::vector<double> local_factor_row(int j, std::uint64_t q) {
  auto c = row_complex(j, q);
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = real_checked(c[i], q);
  return out;
}

double local_prime_power(int j, std::uint64_t n, std::uint64_t p, int k) {
  check_j(j);
  if (k < 1 || p < 2 || (p > 2 && !arith::is_prime(p)))
    throw std::invalid_argument("local_prime_power: need prime p, k >= 1");
  const double pd = static_cast<double>(p);
  if (j == 2) {
    if (k >= 2) return 0.0;  // mu(p^k) = 0
    if (p == 2) return n % 2 == 0 ? 1.0 : -1.0;
    if (n % p == 0) return 1.0 / (pd - 1.0);
    int chi = arith::legendre_symbol(static_cast<std::int64_t>(n % p), p);
    // chi = -1 collapses to 1/(p-1); chi = +1 to -(p+1)/(p-1)^2
    return -(chi * pd + 1.0) / ((pd - 1.0) * (pd - 1.0));
  }
  // j == 3
  if (p == 2) {
    switch (k) {
      case 1: return n % 2 == 1 ? 1.0 : -1.0;
      case 2: return n % 4 == 1 ? -2.0 : (n % 4 == 3 ? 2.0 : 0.0);
      case 3: return n % 8 == 3 ? 4.0 : (n % 8 == 7 ? -4.0 : 0.0);
      default: return 0.0;  // reduced square sum vanishes for 2^k, k >= 4
    }
  }
  if (k >= 2) return 0.0;  // reduced square sum vanishes for odd p, k >= 2
  const double kappa = p % 4 == 1 ? 1.0 : -1.0;
  const double pm1 = pd - 1.0;
  if (n % p == 0) return -(3.0 * kappa * pd + 1.0) / (pm1 * pm1);
  int chi_neg = arith::legendre_symbol(-static_cast<std::int64_t>(n % p), p);
  return (chi_neg * pd * (pd + 3.0 * kappa) + 3.0 * kappa * pd + 1.0) /
         (pm1 * pm1 * pm1);
}

double local_factor_value(int j, std::uint64_t n, std::uint64_t q) {
  check_j(j);
  if (q == 0) throw std::invalid_argument("local_factor_value: q must be >= 1");
  if (q == 1) return 1.0;
  double v = 1.0;
  for (const auto& [p, k] : arith::factorize(q).factors) {
    v *= local_prime_power(j, n, p, k);
    if (v == 0.0) return 0.0;
  }
  return v;
}

LocalFactor local_factor(int j, std::uint64_t n, std::uint64_t q) {
  check_j(j);
  if (q == 0) throw std::invalid_argument("local_factor: q must be >= 1");
  auto row = row_complex(j, q);
  std::complex<double> direct = row[n % q];
  double direct_re = real_checked(direct, q);

  double mult = 1.0;
  for (const auto& [p, k] : arith::factorize(q).factors) {
    std::uint64_t pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    mult *= local_factor_row(j, pk)[n % pk];
  }
  if (std::abs(direct_re - mult) > 1e-9 * (1.0 + std::abs(direct_re)))
    throw ConsistencyError(
        "local factor routes disagree at q=" + std::to_string(q) +
        ", n=" + std::to_string(n) + ": direct=" + format_double(direct_re) +
        " multiplicative=" + format_double(mult));
  return LocalFactor{j, n, q, direct, Method::direct};
}

SeriesValue singular_series(int j, std::uint64_t n, double P) {
  check_j(j);
  SeriesValue sv{j, n, P, 0.0, SeriesMode::truncated_series};
  if (P < 1.0) return sv;  // empty truncation
  std::uint64_t qmax = static_cast<std::uint64_t>(P);
  double total = 0.0;
  for (std::uint64_t q = 1; q <= qmax; ++q)
    total += local_factor_value(j, n, q);
  sv.value = total;
  return sv;
}

SeriesValue singular_product(int j, std::uint64_t n, double Q) {
  check_j(j);
  SeriesValue sv{j, n, Q, 1.0, SeriesMode::euler_product};
  if (Q < 2.0) return sv;  // empty product
  double total = 1.0;
  for (std::uint32_t p : arith::primes_upto(static_cast<std::uint32_t>(Q))) {
    double factor = 1.0 + local_prime_power(j, n, p, 1);
    if (j == 3 && p == 2)
      factor += local_prime_power(3, n, 2, 2) + local_prime_power(3, n, 2, 3);
    total *= factor;
  }
  sv.value = total;
  return sv;
}

double discrepancy_statistic(int j, std::uint64_t x, std::uint64_t y, double P,
                             double Q) {
  check_j(j);
  if (y == 0) return 0.0;
  double sum = 0.0;
  for (std::uint64_t n = x + 1; n <= x + y; ++n) {
    bool in_class = j == 2 ? arith::in_class_h2(n) : arith::in_class_h3(n);
    if (!in_class) continue;
    double s = singular_series(j, n, P).value;
    double p = singular_product(j, n, Q).value;
    sum += (s - p) * (s - p);
  }
  return sum / static_cast<double>(y);
}

}  // namespace psq::singular
