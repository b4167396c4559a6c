#pragma once

#include <cstdint>
#include <string>

// Numerical sieve constants: the bracketing densities sigma2_minus/plus as
// Buchstab-weighted region integrals, and the three-term vector-sieve
// combination they feed.
namespace psq::constants {

enum class Kind { sigma2_minus, sigma2_plus, combined };
const char* kind_name(Kind k);

enum class Method { grid, monte_carlo };
const char* method_name(Method m);
Method parse_method(const std::string& s);  // "grid" | "monte_carlo"

// Imported reference bounds for the outer-variable sieve constants, valid
// for theta1 >= 0.55; they come from the companion long-interval sieve
// evaluation and are not recomputed here.
inline constexpr double sigma1_plus_ref = 1.01;
inline constexpr double sigma1_minus_ref = 0.99;

struct SieveConstant {
  Kind kind = Kind::sigma2_minus;
  double theta2 = 0.0;
  double eps = 0.0;    // recorded only; O(eps) endpoint slack is dropped
  Method method = Method::grid;
  std::uint64_t resolution = 0;  // grid: cells per axis; mc: total samples
  std::uint64_t seed = 0;        // mc streams only
  double value = 0.0;
  double error = 0.0;    // grid: |value - half-resolution value|; mc: 3x se
  double one_dim = 0.0;  // sigma2_plus only: the 1-D integral term
  double multi_dim = 0.0;  // 2-D (minus) / 3-D (plus) region integral
};

// sigma2_minus(theta2) = 1 - integral over {2*theta2-1 < u2 < u1 < 1/2,
// u1 + 2*u2 < 1, u1 + u2 < 2 - 2*theta2} of w((1-u1-u2)/u2) / (u1 u2^2).
//
// sigma2_plus(theta2) = 1 + integral over (1/4, 1/2) of w((1-u)/u) / u^2
// + integral over {2*theta2-1 < u3 < u2 < u1 < 1/4} of
// w((1-u1-u2-u3)/u3) / (u1 u2 u3^2).
//
// theta2 must lie in (1/2, 1), which bounds every 1/u factor by
// 1/(2*theta2-1); that bound is asserted at runtime.  Grid method: midpoint
// rule over the bounding box, masked by the region, with exact fractional
// weights on cells straddling the ordering diagonals; the 3-D axis count is
// round(resolution^(2/3)) so total work matches the 2-D rule.  Monte Carlo
// method: `resolution` samples rounded up to 64 equal blocks, one splitmix64
// stream per block, batch-means standard error, error = 3 * se; the 1-D term
// stays deterministic.  Identical arguments give identical results for any
// worker count.
SieveConstant sigma2_minus(double theta2, double eps, Method method,
                           std::uint64_t resolution, std::uint64_t seed = 0,
                           int workers = 0);
SieveConstant sigma2_plus(double theta2, double eps, Method method,
                          std::uint64_t resolution, std::uint64_t seed = 0,
                          int workers = 0);

// s1p*s2m + s1m*s2p - s1p*s2p: the main-term coefficient induced by the
// three-term bracket.  Throws std::invalid_argument when a bracket is
// inverted (s1m > s1p or s2m > s2p).
double vector_sieve_bound(double s1_plus, double s1_minus, double s2_plus,
                          double s2_minus);

// vector_sieve_bound at the imported sigma1 references and freshly computed
// sigma2 values; error propagates linearly through the bilinear formula.
SieveConstant combined_bound(double theta2, Method method,
                             std::uint64_t resolution, std::uint64_t seed = 0,
                             int workers = 0);

}  // namespace psq::constants
