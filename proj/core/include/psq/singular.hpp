#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace psq::singular {

// S(q,a) = sum over reduced residues x mod q of e(a x^2 / q).
// Literal evaluation; gcd(a,q) must be 1.
std::complex<double> gauss_sum(std::uint64_t q, std::int64_t a);

enum class Method { direct, multiplicative };
enum class SeriesMode { truncated_series, euler_product };

// One local coefficient A_j(n,q) of the quadratic singular series:
//   A_2(n,q) = mu(q)/phi(q)^2 * sum_{(a,q)=1} S(q,a)   e(-an/q)
//   A_3(n,q) = phi(q)^{-3}    * sum_{(a,q)=1} S(q,a)^3 e(-an/q)
struct LocalFactor {
  int j = 2;
  std::uint64_t n = 0;
  std::uint64_t q = 1;
  std::complex<double> value;  // direct-route value; imaginary part ~ 0
  Method method = Method::direct;
};

// Dual-route evaluation: the direct character sum and the product over prime
// powers must agree within tolerance, else ConsistencyError.  Returns direct.
LocalFactor local_factor(int j, std::uint64_t n, std::uint64_t q);

// Fast closed-form route (real arithmetic, multiplicative over prime powers).
double local_factor_value(int j, std::uint64_t n, std::uint64_t q);

// Closed form for A_j(n, p^k).
double local_prime_power(int j, std::uint64_t n, std::uint64_t p, int k);

// Direct character sum batched over all residues: row[r] = A_j(n,q) for any
// n congruent to r mod q.  FFT-based exact reorganization of the double sum.
std::vector<double> local_factor_row(int j, std::uint64_t q);

struct SeriesValue {
  int j = 2;
  std::uint64_t n = 0;
  double cutoff = 1.0;
  double value = 1.0;
  SeriesMode mode = SeriesMode::truncated_series;
};

// Truncated series: sum_{q <= P} A_j(n,q).
SeriesValue singular_series(int j, std::uint64_t n, double P);

// Finite Euler product over p <= Q of (1 + A_j(n,p) + A_j(n,p^2) + ...),
// with the inner sum truncated where the coefficients provably vanish.
// Q < 2 yields the empty product 1.0.
SeriesValue singular_product(int j, std::uint64_t n, double Q);

// Mean squared gap between truncated series and Euler product over the
// admissible n in (x, x+y], normalized by y.  y = 0 gives 0.
double discrepancy_statistic(int j, std::uint64_t x, std::uint64_t y, double P,
                             double Q);

}  // namespace psq::singular
