#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "psq/decomp.hpp"
#include "psq/reps.hpp"

namespace dc = psq::decomp;
namespace rp = psq::reps;
using psq::decomp::IntervalConfig;
using u64 = std::uint64_t;
using i64 = std::int64_t;

namespace {

// Independent primality by trial division.
bool slow_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

u64 slow_isqrt(u64 n) {
  u64 r = 0;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Brute-force pair count over the configured windows.
i64 oracle_r2_window(u64 n, const IntervalConfig& cfg) {
  i64 total = 0;
  for (u64 m2 = cfg.m2_first; m2 <= cfg.m2_last; ++m2) {
    if (!slow_prime(m2) || m2 * m2 >= n) continue;
    const u64 m1 = n - m2 * m2;
    if (m1 >= cfg.m1_first && m1 <= cfg.m1_last && slow_prime(m1)) ++total;
  }
  return total;
}

i64 oracle_r2_unrestricted(u64 n) {
  i64 total = 0;
  for (u64 m2 = 2; m2 * m2 < n; ++m2)
    if (slow_prime(m2) && slow_prime(n - m2 * m2)) ++total;
  return total;
}

// m1-major accumulation of the density weight (the library loops m2-major).
double oracle_weight(u64 n, const IntervalConfig& cfg) {
  double total = 0.0;
  for (u64 m1 = cfg.m1_first; m1 <= cfg.m1_last; ++m1) {
    if (m1 >= n) break;
    const u64 d = n - m1;
    const u64 m2 = slow_isqrt(d);
    if (m2 * m2 != d) continue;
    if (m2 < cfg.m2_first || m2 > cfg.m2_last || m2 < 2 || m1 < 2) continue;
    total += 1.0 / (std::log(static_cast<double>(m1)) *
                    std::log(static_cast<double>(m2)));
  }
  return total;
}

// Semiprime-remainder count by direct enumeration of (p2, p3, m1).
i64 oracle_r0(u64 n, const IntervalConfig& cfg) {
  const double y14 = std::pow(cfg.y, 0.25);
  i64 total = 0;
  for (u64 p2 = 2; static_cast<double>(p2) <= y14; ++p2) {
    if (static_cast<double>(p2) < cfg.z0 || !slow_prime(p2)) continue;
    for (u64 p3 = p2; p2 * p3 <= cfg.m2_last; ++p3) {
      if (!slow_prime(p3)) continue;
      const u64 m2 = p2 * p3;
      if (m2 < cfg.m2_first || m2 * m2 >= n) continue;
      const u64 m1 = n - m2 * m2;
      if (m1 >= cfg.m1_first && m1 <= cfg.m1_last && slow_prime(m1)) ++total;
    }
  }
  return total;
}

// Unordered enumeration a <= b <= c, expanded by permutation multiplicity;
// the library counts ordered triples directly, so agreement is meaningful.
i64 oracle_r3_unrestricted(u64 n) {
  i64 total = 0;
  for (u64 a = 2; a * a * 3 <= n; ++a) {
    if (!slow_prime(a)) continue;
    for (u64 b = a; a * a + 2 * b * b <= n; ++b) {
      if (!slow_prime(b)) continue;
      const u64 rem = n - a * a - b * b;
      const u64 c = slow_isqrt(rem);
      if (c * c != rem || c < b || !slow_prime(c)) continue;
      if (a == b && b == c) total += 1;
      else if (a == b || b == c) total += 3;
      else total += 6;
    }
  }
  return total;
}

i64 oracle_r3_window(u64 n, const IntervalConfig& cfg) {
  i64 total = 0;
  for (u64 p3 = cfg.m2_first; p3 <= cfg.m2_last; ++p3) {
    if (!slow_prime(p3) || p3 * p3 >= n) continue;
    const u64 s = n - p3 * p3;
    if (s < cfg.m1_first || s > cfg.m1_last) continue;
    for (u64 a = 2; 2 * a * a <= s; ++a) {  // a <= b, then weight by order
      if (!slow_prime(a)) continue;
      const u64 rem = s - a * a;
      const u64 b = slow_isqrt(rem);
      if (b * b != rem || b < a || !slow_prime(b)) continue;
      total += a == b ? 1 : 2;
    }
  }
  return total;
}

// Desk-size configuration: I2 = [40, 79], I1 = [3691, 9999].
IntervalConfig cfg_10k() { return dc::derive_config(10000, 0.95, 0.6, 0.0, 1.0); }

// Remainder-identity configuration: z0^3 clears the top of I2, so the only
// z0-rough composites in I2 are semiprimes with both factors above z0.
IntervalConfig cfg_identity() {
  return dc::derive_config(1000000, 0.95, 0.6, 0.0, 0.0, 1.5);
}

bool same_double(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

}  // namespace

TEST_SUITE("reps") {

TEST_CASE("class predicates and name round trips") {
  CHECK(rp::parse_class("h2") == rp::ClassId::h2);
  CHECK(rp::parse_class("h3") == rp::ClassId::h3);
  CHECK(rp::parse_class("h4") == rp::ClassId::h4);
  CHECK_THROWS_AS(rp::parse_class("h5"), std::invalid_argument);
  for (auto c : {rp::ClassId::h2, rp::ClassId::h3, rp::ClassId::h4})
    CHECK(rp::parse_class(rp::class_name(c)) == c);

  CHECK(rp::parse_mode("intervals") == rp::CountMode::intervals);
  CHECK(rp::parse_mode("unrestricted") == rp::CountMode::unrestricted);
  CHECK_THROWS_AS(rp::parse_mode("both"), std::invalid_argument);
  for (auto m : {rp::CountMode::intervals, rp::CountMode::unrestricted})
    CHECK(rp::parse_mode(rp::mode_name(m)) == m);

  for (u64 n = 0; n < 600; ++n) {
    CHECK(rp::in_class(rp::ClassId::h2, n) == (n % 2 == 0 && n % 3 != 1));
    CHECK(rp::in_class(rp::ClassId::h3, n) == (n % 24 == 3 && n % 5 != 0));
    CHECK(rp::in_class(rp::ClassId::h4, n) == (n % 24 == 4));
  }
}

TEST_CASE("context windows match a trial-division oracle") {
  const auto cfg = cfg_10k();
  const auto ctx = rp::make_context(cfg);

  std::vector<u64> expected;
  for (u64 m = cfg.m2_first; m <= cfg.m2_last; ++m)
    if (slow_prime(m)) expected.push_back(m);
  CHECK(ctx.inner_primes == expected);
  CHECK(ctx.inner_primes.front() == 41);
  CHECK(ctx.inner_primes.back() == 79);
  CHECK(ctx.inner_primes.size() == 10);

  for (u64 m = cfg.m1_first; m < cfg.m1_first + 500; ++m)
    CHECK(ctx.outer.is_prime(m) == slow_prime(m));
  CHECK(ctx.outer.is_prime(9973));  // largest prime below m1_last
  CHECK(!ctx.outer.is_prime(cfg.m1_last));
  CHECK(!ctx.outer.is_prime(cfg.m1_first - 2));  // outside the window
}

TEST_CASE("pair counts match the brute-force oracle") {
  CHECK(rp::count_r2_unrestricted(4) == 0);
  CHECK(rp::count_r2_unrestricted(6) == 1);    // 2 + 2^2
  CHECK(rp::count_r2_unrestricted(11) == 2);   // 7 + 2^2, 2 + 3^2
  CHECK(rp::count_r2_unrestricted(20) == 1);   // 11 + 3^2
  for (u64 n = 2; n <= 2000; ++n)
    CHECK(rp::count_r2_unrestricted(n) == oracle_r2_unrestricted(n));

  const auto cfg = cfg_10k();
  const auto ctx = rp::make_context(cfg);
  const auto outer = rp::outer_prime_weight(ctx);
  const auto inner = rp::inner_prime_weight(ctx);
  for (u64 n = 10001; n <= 10240; ++n) {
    if (!rp::in_class(rp::ClassId::h2, n)) continue;
    const i64 direct = rp::count_r2(n, ctx);
    CHECK(direct == oracle_r2_window(n, cfg));
    CHECK(direct == rp::count_weighted(n, ctx, outer, inner));
    CHECK(direct <= rp::count_r2_unrestricted(n));
  }
}

TEST_CASE("weight factories behave on and off the window") {
  const auto cfg = cfg_10k();
  const auto ctx = rp::make_context(cfg);

  const auto inner = rp::inner_prime_weight(ctx);
  CHECK(inner(41) == 1);
  CHECK(inner(42) == 0);
  CHECK(inner(37) == 0);  // prime but below the window

  const auto outer = rp::outer_prime_weight(ctx);
  CHECK(outer(9973) == 1);
  CHECK(outer(9999) == 0);

  const auto table = dc::build_weight_table(cfg, dc::WeightKind::lambda0);
  const auto tw = rp::table_weight(table);
  CHECK(tw(cfg.m2_first - 1) == 0);
  CHECK(tw(cfg.m2_last + 1) == 0);
  for (u64 m = cfg.m2_first; m <= cfg.m2_last; ++m)
    CHECK(tw(m) == dc::lambda0(m, cfg));

  // weighted counter against a direct double-condition accumulation
  const u64 n = 10006;
  i64 expected = 0;
  for (u64 m2 = cfg.m2_first; m2 <= cfg.m2_last; ++m2) {
    if (m2 * m2 >= n) continue;
    const u64 m1 = n - m2 * m2;
    if (m1 >= cfg.m1_first && m1 <= cfg.m1_last && slow_prime(m1))
      expected += dc::lambda0(m2, cfg);
  }
  CHECK(rp::count_weighted(n, ctx, outer, tw) == expected);
}

TEST_CASE("density weight matches an independent accumulation") {
  const auto cfg = cfg_10k();
  const auto ctx = rp::make_context(cfg);
  for (u64 n : {u64{10002}, u64{10116}, u64{10230}}) {
    const double w = rp::weight_r2(n, ctx);
    CHECK(w > 0.0);
    CHECK(w == doctest::Approx(oracle_weight(n, cfg)).epsilon(1e-12));
  }
  CHECK(rp::weight_r2(10, ctx) == 0.0);  // below both windows
}

TEST_CASE("semiprime remainder splits the rough count") {
  const auto cfg = cfg_identity();
  REQUIRE(cfg.z0 * cfg.z0 * cfg.z0 >= static_cast<double>(cfg.m2_last));
  REQUIRE(std::pow(cfg.y, 0.25) >=
          std::sqrt(static_cast<double>(cfg.m2_last)));
  const auto ctx = rp::make_context(cfg);
  const auto outer = rp::outer_prime_weight(ctx);
  const auto table = dc::build_weight_table(cfg, dc::WeightKind::lambda0);
  const auto rough = rp::table_weight(table);

  i64 sum_r0 = 0;
  for (u64 n = 1000001; n <= 1000240; ++n) {
    if (!rp::in_class(rp::ClassId::h2, n)) continue;
    const i64 r0 = rp::count_r0(n, ctx);
    CHECK(r0 == oracle_r0(n, cfg));
    CHECK(rp::count_weighted(n, ctx, outer, rough) ==
          rp::count_r2(n, ctx) + r0);
    sum_r0 += r0;
  }
  CHECK(sum_r0 > 0);

  CHECK(rp::count_r0(10, ctx) == 0);  // every m1 falls below the window
}

TEST_CASE("triple counts match the brute-force oracle") {
  CHECK(rp::count_r3_unrestricted(12) == 1);  // (2,2,2)
  CHECK(rp::count_r3_unrestricted(17) == 3);  // orderings of (2,2,3)
  CHECK(rp::count_r3_unrestricted(27) == 1);  // (3,3,3)
  for (u64 n = 3; n <= 3000; ++n)
    CHECK(rp::count_r3_unrestricted(n) == oracle_r3_unrestricted(n));

  const auto cfg = cfg_10k();
  const auto ctx = rp::make_context(cfg);
  for (u64 n = 10001; n <= 10480; ++n) {
    if (!rp::in_class(rp::ClassId::h3, n)) continue;
    const i64 direct = rp::count_r3(n, ctx);
    CHECK(direct == oracle_r3_window(n, cfg));
    CHECK(direct <= rp::count_r3_unrestricted(n));
  }

  // scanning the same class reproduces the per-n counts
  rp::ScanRequest req;
  req.x = 10000;
  req.h = 240;
  req.cls = rp::ClassId::h3;
  req.mode = rp::CountMode::unrestricted;
  req.workers = 2;
  const auto rep = rp::scan_exceptions(req);
  CHECK(rep.scanned == rep.records.size());
  CHECK(rep.scanned == 8);  // 10 slots of 24 minus two multiples of 5
  for (const auto& rec : rep.records) {
    CHECK(rec.count == rp::count_r3_unrestricted(rec.n));
    CHECK(std::isnan(rec.predicted));
    CHECK(std::isnan(rec.ratio));
  }
}

TEST_CASE("reduction lands in the target class") {
  const auto r1 = rp::h4_reduce(1000012, 1000000);
  CHECK(r1.q == 971);
  CHECK(r1.residue == 1);
  CHECK(r1.target == 57171);
  CHECK(r1.widen_factor == 1);
  CHECK(r1.class_ok);

  const auto r2 = rp::h4_reduce(1000036, 1000000);  // n = 1 (mod 5)
  CHECK(r2.q == 977);
  CHECK(r2.residue == 2);
  CHECK(r2.target == 1000036 - 977 * 977);
  CHECK(r2.widen_factor == 1);
  CHECK(r2.class_ok);

  for (int k = 0; k < 100; ++k) {
    const u64 n = 1000012 + 24 * static_cast<u64>(k);
    const auto r = rp::h4_reduce(n, 1000000);
    CHECK(r.target % 24 == 3);
    CHECK(r.target % 5 != 0);
    CHECK(r.class_ok);
    CHECK(r.residue == (n % 5 == 1 ? 2 : 1));
    CHECK(r.q * r.q + r.target == n);
  }

  // at X = 1000 the two narrow windows hold no admissible prime
  const auto rw = rp::h4_reduce(1012, 1000);
  CHECK(rw.q == 11);
  CHECK(rw.widen_factor == 4);
  CHECK(rw.class_ok);

  CHECK_THROWS_AS(rp::h4_reduce(1000013, 1000000), std::invalid_argument);
  CHECK_THROWS_AS(rp::h4_reduce(1000012, 999), std::invalid_argument);
  CHECK_THROWS_AS(rp::h4_reduce(28, 1000000), std::invalid_argument);
}

TEST_CASE("bracketed pair counts bound the rough pair count") {
  const auto cfg = cfg_identity();
  REQUIRE(cfg.cap_safe);
  const auto ctx = rp::make_context(cfg);
  const auto t0 = dc::build_weight_table(cfg, dc::WeightKind::lambda0);
  const auto tm = dc::build_weight_table(cfg, dc::WeightKind::lambda2_minus);
  const auto tp = dc::build_weight_table(cfg, dc::WeightKind::lambda2_plus);
  const auto rough = rp::table_weight(t0);
  const auto low = rp::table_weight(tm);
  const auto high = rp::table_weight(tp);
  const auto prime = rp::outer_prime_weight(ctx);

  // synthetic outer brackets around the prime indicator
  const rp::WeightFn prime_hi = [&ctx](u64 m) -> i64 {
    return (ctx.outer.is_prime(m) ? 1 : 0) + (m % 7 == 1 ? 1 : 0);
  };
  const rp::WeightFn prime_lo = [&ctx](u64 m) -> i64 {
    return (ctx.outer.is_prime(m) ? 1 : 0) - (m % 3 == 0 ? 1 : 0);
  };

  for (u64 n = 1000001; n <= 1000240; ++n) {
    if (!rp::in_class(rp::ClassId::h2, n)) continue;
    const i64 base = rp::count_weighted(n, ctx, prime, rough);
    CHECK(rp::count_weighted(n, ctx, prime, low) <= base);
    CHECK(base <= rp::count_weighted(n, ctx, prime, high));

    const i64 cross = rp::count_weighted(n, ctx, prime_hi, low) +
                      rp::count_weighted(n, ctx, prime_lo, high) -
                      rp::count_weighted(n, ctx, prime_hi, high);
    CHECK(cross <= base);
  }
}

TEST_CASE("scans are deterministic and match per-record recounts") {
  rp::ScanRequest req;
  req.x = 10000;
  req.h = 100;
  req.cls = rp::ClassId::h2;
  req.mode = rp::CountMode::unrestricted;

  req.workers = 1;
  const auto a = rp::scan_exceptions(req);
  req.workers = 4;
  const auto b = rp::scan_exceptions(req);

  u64 expected_scanned = 0;
  for (u64 n = 10001; n <= 10100; ++n)
    if (n % 2 == 0 && n % 3 != 1) ++expected_scanned;
  CHECK(a.scanned == expected_scanned);
  CHECK(a.records.size() == expected_scanned);
  CHECK(a.exceptions == 0);  // every target here has a representation
  CHECK(a.exceptional.empty());
  CHECK(std::isnan(a.median_ratio));
  CHECK(a.series_cutoff == 0.0);

  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].n == b.records[i].n);
    CHECK(a.records[i].count == b.records[i].count);
    CHECK(same_double(a.records[i].predicted, b.records[i].predicted));
    CHECK(same_double(a.records[i].ratio, b.records[i].ratio));
    CHECK(a.records[i].count == oracle_r2_unrestricted(a.records[i].n));
  }
  CHECK(a.exceptional == b.exceptional);
  CHECK(same_double(a.median_ratio, b.median_ratio));
}

TEST_CASE("interval scan attaches finite predictions") {
  rp::ScanRequest req;
  req.x = 10000;
  req.h = 240;
  req.cls = rp::ClassId::h2;
  req.mode = rp::CountMode::intervals;
  req.workers = 3;
  const auto rep = rp::scan_exceptions(req);
  CHECK(rep.series_cutoff == 100.0);  // ln(10^4) stays under the floor

  const auto cfg = dc::derive_config(req.x, req.theta1, req.theta2, req.eps,
                                     req.b_exp, req.p_override);
  const auto ctx = rp::make_context(cfg);
  std::vector<double> ratios;
  std::vector<u64> zero_n;
  for (const auto& rec : rep.records) {
    CHECK(rec.count == rp::count_r2(rec.n, ctx));
    CHECK(rec.count <= rp::count_r2_unrestricted(rec.n));
    const double w = rp::weight_r2(rec.n, ctx);
    CHECK(w > 0.0);
    CHECK(std::isfinite(rec.predicted));
    if (rec.predicted != 0.0) {
      CHECK(rec.ratio ==
            doctest::Approx(rec.count / rec.predicted).epsilon(1e-15));
      ratios.push_back(rec.ratio);
    }
    if (rec.count == 0) zero_n.push_back(rec.n);
  }
  CHECK(rep.exceptional == zero_n);
  CHECK(rep.exceptions == zero_n.size());

  REQUIRE(!ratios.empty());
  std::sort(ratios.begin(), ratios.end());
  const std::size_t mid = ratios.size() / 2;
  const double med = ratios.size() % 2 == 1
                         ? ratios[mid]
                         : 0.5 * (ratios[mid - 1] + ratios[mid]);
  CHECK(rep.median_ratio == doctest::Approx(med).epsilon(1e-15));
  CHECK(rep.median_ratio > 0.0);
  CHECK(rep.median_ratio < 10.0);
}

TEST_CASE("class-4 scan counts the reduced targets") {
  rp::ScanRequest req;
  req.x = 1000000;
  req.h = 120;
  req.cls = rp::ClassId::h4;
  req.mode = rp::CountMode::unrestricted;
  req.workers = 1;
  const auto a = rp::scan_exceptions(req);
  CHECK(a.scanned == 5);
  for (const auto& rec : a.records) {
    const auto red = rp::h4_reduce(rec.n, req.x);
    CHECK(rec.count == rp::count_r3_unrestricted(red.target));
    CHECK(std::isnan(rec.predicted));
  }

  // the reduction path ignores the mode switch and the worker count
  req.mode = rp::CountMode::intervals;
  req.workers = 2;
  const auto b = rp::scan_exceptions(req);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].n == b.records[i].n);
    CHECK(a.records[i].count == b.records[i].count);
  }
}

TEST_CASE("scan handles empty classes and bad requests") {
  rp::ScanRequest req;
  req.x = 10000;
  req.h = 1;
  req.cls = rp::ClassId::h3;  // 10001 is not 3 mod 24
  const auto rep = rp::scan_exceptions(req);
  CHECK(rep.scanned == 0);
  CHECK(rep.records.empty());
  CHECK(rep.exceptions == 0);
  CHECK(std::isnan(rep.median_ratio));

  req.h = 0;
  CHECK_THROWS_AS(rp::scan_exceptions(req), std::invalid_argument);
  req.h = 100;
  req.x = 999;
  req.cls = rp::ClassId::h4;
  CHECK_THROWS_AS(rp::scan_exceptions(req), std::invalid_argument);
}

}  // TEST_SUITE
