#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "psq/arith.hpp"
#include "psq/decomp.hpp"

// Representation counting over the configured windows (n = p1 + p2^2 and
// n = p1^2 + p2^2 + p3^2), the exceptional-set scanner, and the reduction
// of class-4 inputs to class-3 targets by subtracting a prime square.
namespace psq::reps {

enum class ClassId { h2, h3, h4 };
const char* class_name(ClassId c);
ClassId parse_class(const std::string& s);  // "h2" | "h3" | "h4"
bool in_class(ClassId c, std::uint64_t n);

enum class CountMode { intervals, unrestricted };
const char* mode_name(CountMode m);
CountMode parse_mode(const std::string& s);

// Sieved prime windows for a fixed configuration; build once, reuse per n.
struct RepContext {
  decomp::IntervalConfig cfg;
  arith::PrimeWindow outer;                  // primality over [m1_first, m1_last]
  std::vector<std::uint64_t> inner_primes;   // primes in [m2_first, m2_last]
};
RepContext make_context(const decomp::IntervalConfig& cfg);

// Integer weight attached to one window variable.
using WeightFn = std::function<std::int64_t(std::uint64_t)>;

WeightFn outer_prime_weight(const RepContext& ctx);
WeightFn inner_prime_weight(const RepContext& ctx);
// Dense-table weight; the table must cover the same I2 as the context.
WeightFn table_weight(const decomp::WeightTable& table);

// sum over m2 in I2 with m1 = n - m2^2 in I1 of outer(m1) * inner(m2)
std::int64_t count_weighted(std::uint64_t n, const RepContext& ctx,
                            const WeightFn& outer, const WeightFn& inner);

// primes p1 in I1, p2 in I2 with p1 + p2^2 = n
std::int64_t count_r2(std::uint64_t n, const RepContext& ctx);
// all primes p2 with p2^2 < n and n - p2^2 prime
std::int64_t count_r2_unrestricted(std::uint64_t n);

// sum over integer solutions m1 + m2^2 = n, m_i in I_i, of
// 1 / (log(m1) log(m2)) — the density weight behind the predicted main term
double weight_r2(std::uint64_t n, const RepContext& ctx);

// prime triples p1 + (p2 p3)^2 = n with p1 in I1, z0 <= p2 <= Y^(1/4),
// p2 <= p3, p2 p3 in I2: the composite-rough remainder split off from
// count_weighted(n, prime, lambda0)
std::int64_t count_r0(std::uint64_t n, const RepContext& ctx);

// ordered prime triples p1^2 + p2^2 + p3^2 = n with p1^2 + p2^2 in I1 and
// p3 in I2 (unrestricted variant drops the window constraints)
std::int64_t count_r3(std::uint64_t n, const RepContext& ctx);
std::int64_t count_r3_unrestricted(std::uint64_t n);

// Reduction of n ≡ 4 (mod 24) to a class-3 target n - q^2: q is the largest
// prime q ≡ residue (mod 5) in (sqrt(X) - k*X^0.2625, sqrt(X) - X^0.2625/2],
// trying window factors k = 1, 2, 4 in turn.  residue = 2 when n ≡ 1 (mod 5)
// and 1 otherwise, which guarantees 5 does not divide the target.
struct ReduceResult {
  std::uint64_t n = 0;
  std::uint64_t q = 0;
  int residue = 0;       // q mod 5
  std::uint64_t target = 0;  // n - q^2
  bool class_ok = false;     // target lands in class h3
  int widen_factor = 0;      // window factor that produced q
};
ReduceResult h4_reduce(std::uint64_t n, std::uint64_t x);

struct ScanRequest {
  std::uint64_t x = 0;
  std::uint64_t h = 0;
  ClassId cls = ClassId::h2;
  CountMode mode = CountMode::unrestricted;
  double theta1 = 0.95;
  double theta2 = 0.6;
  double eps = 0.0;
  double b_exp = 1.0;
  double p_override = 0.0;
  int workers = 0;  // 0 = resolve from environment
};

struct ScanRecord {
  std::uint64_t n = 0;
  std::int64_t count = 0;
  double predicted = 0.0;  // r2 * truncated series (h2 intervals mode); else NaN
  double ratio = 0.0;      // count / predicted; NaN when predicted is NaN or 0
};

struct ExceptionReport {
  ScanRequest request;
  std::vector<ScanRecord> records;        // ascending in n
  std::vector<std::uint64_t> exceptional; // n with count == 0, ascending
  std::uint64_t scanned = 0;
  std::uint64_t exceptions = 0;
  double median_ratio = 0.0;   // over finite ratios; NaN if none
  double series_cutoff = 0.0;  // series truncation used for predictions (0 if none)
};

// For each n in the class inside (X, X+H]: count representations (r2 for h2,
// r3 for h3, h4 reduces then counts r3 on the target), attach the predicted
// main term where defined, and collect the n with no representation.
// Sharded across workers; the report does not depend on the worker count.
ExceptionReport scan_exceptions(const ScanRequest& req);

}  // namespace psq::reps
