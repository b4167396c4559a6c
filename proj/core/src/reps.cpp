#include "psq/reps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

#include "psq/common.hpp"
#include "psq/singular.hpp"

namespace psq::reps {

namespace {

constexpr double knan = std::numeric_limits<double>::quiet_NaN();

// Exact integer sqrt; division guards avoid overflow near the u64 ceiling.
std::uint64_t isqrt_u64(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while (r + 1 <= n / (r + 1)) ++r;
  return r;
}

// The odd bitmap cannot hold 2, so patch it in when I1 reaches that far down.
bool outer_is_prime(const RepContext& ctx, std::uint64_t m) {
  if (m == 2) return ctx.cfg.m1_first <= 2;
  return ctx.outer.is_prime(m);
}

// Ordered prime pairs (p1, p2) with p1^2 + p2^2 = s.
std::int64_t ordered_prime_pairs(std::uint64_t s) {
  const std::uint64_t root = isqrt_u64(s);
  if (root > 100'000'000ull)
    throw std::length_error("reps: sum of two prime squares out of desk range");
  auto bp = arith::base_primes(static_cast<std::uint32_t>(root) + 1);
  std::int64_t pairs = 0;
  for (std::uint32_t p1 : *bp) {
    const std::uint64_t sq1 = static_cast<std::uint64_t>(p1) * p1;
    if (sq1 >= s) break;
    const std::uint64_t rem = s - sq1;
    const std::uint64_t r = isqrt_u64(rem);
    if (r * r == rem && arith::is_prime(r)) ++pairs;
  }
  return pairs;
}

// Largest prime q in (lo, hi] with q = residue (mod 5); 0 if none.
std::uint64_t scan_down_for_prime(std::uint64_t lo, std::uint64_t hi,
                                  int residue) {
  for (std::uint64_t q = hi; q > lo && q >= 2; --q) {
    if (q % 5 != static_cast<std::uint64_t>(residue)) continue;
    if (arith::is_prime(q)) return q;
  }
  return 0;
}

// Reduction prime for the given residue class mod 5, plus the window factor
// k in {1, 2, 4} that produced it.  The window depends only on X, so one
// search serves every n of the scan.
std::pair<std::uint64_t, int> reduction_prime(std::uint64_t x, int residue) {
  const double sx = std::sqrt(static_cast<double>(x));
  const double step = std::pow(static_cast<double>(x), 0.2625);
  const double hi_real = sx - 0.5 * step;
  if (hi_real < 2.0) return {0, 0};
  const auto hi = static_cast<std::uint64_t>(std::floor(hi_real));
  for (int k : {1, 2, 4}) {
    const double lo_real = sx - k * step;
    const std::uint64_t lo =
        lo_real <= 1.0 ? 1 : static_cast<std::uint64_t>(std::floor(lo_real));
    const std::uint64_t q = scan_down_for_prime(lo, hi, residue);
    if (q != 0) return {q, k};
  }
  return {0, 0};
}

}  // namespace

const char* class_name(ClassId c) {
  switch (c) {
    case ClassId::h2: return "h2";
    case ClassId::h3: return "h3";
    case ClassId::h4: return "h4";
  }
  return "unknown";
}

ClassId parse_class(const std::string& s) {
  if (s == "h2") return ClassId::h2;
  if (s == "h3") return ClassId::h3;
  if (s == "h4") return ClassId::h4;
  throw std::invalid_argument("unknown class: " + s);
}

bool in_class(ClassId c, std::uint64_t n) {
  switch (c) {
    case ClassId::h2: return arith::in_class_h2(n);
    case ClassId::h3: return arith::in_class_h3(n);
    case ClassId::h4: return arith::in_class_h4(n);
  }
  return false;
}

const char* mode_name(CountMode m) {
  return m == CountMode::intervals ? "intervals" : "unrestricted";
}

CountMode parse_mode(const std::string& s) {
  if (s == "intervals") return CountMode::intervals;
  if (s == "unrestricted") return CountMode::unrestricted;
  throw std::invalid_argument("unknown mode: " + s);
}

RepContext make_context(const decomp::IntervalConfig& cfg) {
  RepContext ctx;
  ctx.cfg = cfg;
  const std::uint64_t lo = cfg.m1_first > 2 ? cfg.m1_first - 1 : 2;
  ctx.outer = arith::sieve_range(lo, cfg.m1_last);
  if (cfg.m2_last > std::numeric_limits<std::uint32_t>::max())
    throw std::length_error("make_context: inner window exceeds the sieve bound");
  auto small = arith::primes_upto(static_cast<std::uint32_t>(cfg.m2_last));
  for (std::uint32_t p : small)
    if (p >= cfg.m2_first) ctx.inner_primes.push_back(p);
  return ctx;
}

// The weight factories capture the context / table by pointer; callers keep
// them alive for the lifetime of the returned function.
WeightFn outer_prime_weight(const RepContext& ctx) {
  const RepContext* c = &ctx;
  return [c](std::uint64_t m) -> std::int64_t {
    return outer_is_prime(*c, m) ? 1 : 0;
  };
}

WeightFn inner_prime_weight(const RepContext& ctx) {
  const std::vector<std::uint64_t>* v = &ctx.inner_primes;
  return [v](std::uint64_t m) -> std::int64_t {
    return std::binary_search(v->begin(), v->end(), m) ? 1 : 0;
  };
}

WeightFn table_weight(const decomp::WeightTable& table) {
  const decomp::WeightTable* t = &table;
  return [t](std::uint64_t m) -> std::int64_t {
    if (m < t->m_first || m > t->m_last) return 0;
    return t->values[m - t->m_first];
  };
}

std::int64_t count_weighted(std::uint64_t n, const RepContext& ctx,
                            const WeightFn& outer, const WeightFn& inner) {
  const auto& cfg = ctx.cfg;
  std::int64_t total = 0;
  for (std::uint64_t m2 = cfg.m2_first; m2 <= cfg.m2_last; ++m2) {
    const std::uint64_t sq = m2 * m2;
    if (sq >= n) break;
    const std::uint64_t m1 = n - sq;
    if (m1 > cfg.m1_last) continue;  // m1 decreases as m2 grows
    if (m1 < cfg.m1_first) break;
    const std::int64_t wi = inner(m2);
    if (wi == 0) continue;
    const std::int64_t wo = outer(m1);
    if (wo != 0) total += wo * wi;
  }
  return total;
}

std::int64_t count_r2(std::uint64_t n, const RepContext& ctx) {
  const auto& cfg = ctx.cfg;
  std::int64_t total = 0;
  for (std::uint64_t p2 : ctx.inner_primes) {
    const std::uint64_t sq = p2 * p2;
    if (sq >= n) break;
    const std::uint64_t m1 = n - sq;
    if (m1 > cfg.m1_last) continue;
    if (m1 < cfg.m1_first) break;
    if (outer_is_prime(ctx, m1)) ++total;
  }
  return total;
}

std::int64_t count_r2_unrestricted(std::uint64_t n) {
  const std::uint64_t root = isqrt_u64(n);
  if (root > 100'000'000ull)
    throw std::length_error("count_r2_unrestricted: n out of desk range");
  auto bp = arith::base_primes(static_cast<std::uint32_t>(root) + 1);
  std::int64_t total = 0;
  for (std::uint32_t p2 : *bp) {
    const std::uint64_t sq = static_cast<std::uint64_t>(p2) * p2;
    if (sq >= n) break;
    if (arith::is_prime(n - sq)) ++total;
  }
  return total;
}

double weight_r2(std::uint64_t n, const RepContext& ctx) {
  const auto& cfg = ctx.cfg;
  double total = 0.0;
  for (std::uint64_t m2 = cfg.m2_first; m2 <= cfg.m2_last; ++m2) {
    const std::uint64_t sq = m2 * m2;
    if (sq >= n) break;
    const std::uint64_t m1 = n - sq;
    if (m1 > cfg.m1_last) continue;
    if (m1 < cfg.m1_first) break;
    if (m1 < 2 || m2 < 2) continue;  // log weight undefined below 2
    total += 1.0 / (std::log(static_cast<double>(m1)) *
                    std::log(static_cast<double>(m2)));
  }
  return total;
}

std::int64_t count_r0(std::uint64_t n, const RepContext& ctx) {
  const auto& cfg = ctx.cfg;
  const double y14 = std::pow(cfg.y, 0.25);
  if (y14 < cfg.z0) return 0;
  auto bp = arith::base_primes(static_cast<std::uint32_t>(y14) + 1);
  std::int64_t total = 0;
  for (std::uint32_t p2 : *bp) {
    if (static_cast<double>(p2) > y14) break;
    if (static_cast<double>(p2) < cfg.z0) continue;
    const std::uint64_t pmax = cfg.m2_last / p2;
    if (pmax < p2) continue;
    auto bp3 = arith::base_primes(static_cast<std::uint32_t>(pmax) + 1);
    for (std::uint32_t p3 : *bp3) {
      if (p3 < p2) continue;
      const std::uint64_t m2 = static_cast<std::uint64_t>(p2) * p3;
      if (m2 > cfg.m2_last) break;
      if (m2 < cfg.m2_first) continue;
      const std::uint64_t sq = m2 * m2;
      if (sq >= n) continue;
      const std::uint64_t m1 = n - sq;
      if (m1 < cfg.m1_first || m1 > cfg.m1_last) continue;
      if (outer_is_prime(ctx, m1)) ++total;
    }
  }
  return total;
}

std::int64_t count_r3(std::uint64_t n, const RepContext& ctx) {
  const auto& cfg = ctx.cfg;
  std::int64_t total = 0;
  for (std::uint64_t p3 : ctx.inner_primes) {
    const std::uint64_t sq = p3 * p3;
    if (sq >= n) break;
    const std::uint64_t s = n - sq;
    if (s > cfg.m1_last) continue;
    if (s < cfg.m1_first) break;
    total += ordered_prime_pairs(s);
  }
  return total;
}

std::int64_t count_r3_unrestricted(std::uint64_t n) {
  const std::uint64_t root = isqrt_u64(n);
  if (root > 100'000'000ull)
    throw std::length_error("count_r3_unrestricted: n out of desk range");
  auto bp = arith::base_primes(static_cast<std::uint32_t>(root) + 1);
  std::int64_t total = 0;
  for (std::uint32_t p1 : *bp) {
    const std::uint64_t sq1 = static_cast<std::uint64_t>(p1) * p1;
    if (sq1 >= n) break;
    const std::uint64_t rem1 = n - sq1;
    for (std::uint32_t p2 : *bp) {
      const std::uint64_t sq2 = static_cast<std::uint64_t>(p2) * p2;
      if (sq2 >= rem1) break;
      const std::uint64_t rem = rem1 - sq2;
      const std::uint64_t r = isqrt_u64(rem);
      if (r * r == rem && arith::is_prime(r)) ++total;
    }
  }
  return total;
}

ReduceResult h4_reduce(std::uint64_t n, std::uint64_t x) {
  if (n % 24 != 4)
    throw std::invalid_argument("h4_reduce: n must be 4 mod 24");
  if (x < 1000)
    throw std::invalid_argument("h4_reduce: X must be at least 1000");
  ReduceResult r;
  r.n = n;
  r.residue = n % 5 == 1 ? 2 : 1;
  const auto qk = reduction_prime(x, r.residue);
  if (qk.first == 0)
    throw std::invalid_argument(
        "h4_reduce: no reduction prime in the widened window");
  if (qk.first * qk.first >= n)
    throw std::invalid_argument("h4_reduce: reduction prime square reaches n");
  r.q = qk.first;
  r.target = n - r.q * r.q;
  r.class_ok = arith::in_class_h3(r.target);
  r.widen_factor = qk.second;
  return r;
}

ExceptionReport scan_exceptions(const ScanRequest& req) {
  if (req.h == 0)
    throw std::invalid_argument("scan: window length H must be positive");
  if (req.x + req.h < req.x)
    throw std::invalid_argument("scan: window end overflows");
  if (req.cls == ClassId::h4 && req.x < 1000)
    throw std::invalid_argument("scan: class-4 reduction needs X >= 1000");

  ExceptionReport rep;
  rep.request = req;
  rep.median_ratio = knan;

  std::vector<std::uint64_t> ns;
  for (std::uint64_t n = req.x + 1; n <= req.x + req.h; ++n)
    if (in_class(req.cls, n)) ns.push_back(n);
  rep.scanned = ns.size();
  if (ns.empty()) return rep;

  // Windowed counting and predictions share one context per scan.
  const bool windowed =
      req.mode == CountMode::intervals && req.cls != ClassId::h4;
  const bool predict =
      req.cls == ClassId::h2 && req.mode == CountMode::intervals;
  std::optional<RepContext> ctx;
  if (windowed)
    ctx.emplace(make_context(decomp::derive_config(
        req.x, req.theta1, req.theta2, req.eps, req.b_exp, req.p_override)));
  if (predict)
    rep.series_cutoff = std::max(std::pow(ctx->cfg.l, req.b_exp), 100.0);

  // Class 4 shares one reduction prime per residue; q^2 < X < n always, so
  // the target stays positive.
  std::uint64_t red_q[3] = {0, 0, 0};
  if (req.cls == ClassId::h4) {
    for (int residue : {1, 2}) {
      const auto qk = reduction_prime(req.x, residue);
      if (qk.first == 0)
        throw std::invalid_argument(
            "scan: no reduction prime in the widened window");
      red_q[residue] = qk.first;
    }
  }

  rep.records.resize(ns.size());
  const int workers = resolve_workers(req.workers);
  const auto blocks = std::min<std::int64_t>(
      static_cast<std::int64_t>(ns.size()), std::int64_t{4} * workers);
  parallel_for_blocks(blocks, workers, [&](std::int64_t b) {
    const std::size_t lo = ns.size() * static_cast<std::size_t>(b) / blocks;
    const std::size_t hi = ns.size() * static_cast<std::size_t>(b + 1) / blocks;
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint64_t n = ns[i];
      ScanRecord rec;
      rec.n = n;
      switch (req.cls) {
        case ClassId::h2:
          rec.count = windowed ? count_r2(n, *ctx) : count_r2_unrestricted(n);
          break;
        case ClassId::h3:
          rec.count = windowed ? count_r3(n, *ctx) : count_r3_unrestricted(n);
          break;
        case ClassId::h4: {
          const std::uint64_t q = red_q[n % 5 == 1 ? 2 : 1];
          rec.count = count_r3_unrestricted(n - q * q);
          break;
        }
      }
      rec.predicted = knan;
      rec.ratio = knan;
      if (predict) {
        rec.predicted = weight_r2(n, *ctx) *
                        singular::singular_series(2, n, rep.series_cutoff).value;
        if (std::isfinite(rec.predicted) && rec.predicted != 0.0)
          rec.ratio = static_cast<double>(rec.count) / rec.predicted;
      }
      rep.records[i] = rec;
    }
  });

  std::vector<double> ratios;
  for (const auto& rec : rep.records) {
    if (rec.count == 0) rep.exceptional.push_back(rec.n);
    if (std::isfinite(rec.ratio)) ratios.push_back(rec.ratio);
  }
  rep.exceptions = rep.exceptional.size();
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    const std::size_t mid = ratios.size() / 2;
    rep.median_ratio = ratios.size() % 2 == 1
                           ? ratios[mid]
                           : 0.5 * (ratios[mid - 1] + ratios[mid]);
  }
  return rep;
}

}  // namespace psq::reps
