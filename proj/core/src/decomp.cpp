#include "psq/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "psq/arith.hpp"

namespace psq::decomp {

namespace {

int phi_rough(std::uint64_t m, double z) { return arith::rough_indicator(m, z); }

void check_in_i2(std::uint64_t m, const IntervalConfig& cfg) {
  if (!cfg.in_i2(m))
    throw std::invalid_argument("decomp: m outside the inner window I2");
}

// Distinct prime divisors of m inside [lo, hi).
std::vector<std::uint64_t> primes_of_in(std::uint64_t m, double lo, double hi) {
  std::vector<std::uint64_t> out;
  for (const auto& pe : arith::factorize(m).factors) {
    double pd = static_cast<double>(pe.first);
    if (pd >= lo && pd < hi) out.push_back(pe.first);
  }
  return out;
}

}  // namespace

IntervalConfig derive_config(std::uint64_t x, double theta1, double theta2,
                             double eps, double b_exp, double p_override) {
  if (x < 1000) throw std::invalid_argument("derive_config: X must be >= 10^3");
  if (!(theta1 > 0 && theta1 < 1) || !(theta2 > 0 && theta2 < 1))
    throw std::invalid_argument("derive_config: exponents must lie in (0,1)");
  if (!(eps >= 0)) throw std::invalid_argument("derive_config: eps must be >= 0");
  if (!(b_exp >= 0)) throw std::invalid_argument("derive_config: B must be >= 0");
  if (p_override < 0 || (p_override > 0 && p_override < 1))
    throw std::invalid_argument("derive_config: P override must be >= 1");

  IntervalConfig c;
  c.x = x;
  c.theta1 = theta1;
  c.theta2 = theta2;
  c.eps = eps;
  c.b_exp = b_exp;
  c.p_override = p_override;

  const double xd = static_cast<double>(x);
  c.l = std::log(xd);
  c.y = std::pow(xd, theta1);
  c.h = std::pow(c.y, theta2);
  c.p = p_override > 0 ? p_override : std::pow(c.l, b_exp);
  c.z0 = std::pow(c.y, 0.25) / (c.p * c.p);
  c.u = std::pow(c.y, 0.5 * eps);
  c.v = c.h * std::pow(c.y, -0.5 - 0.5 * eps);
  c.w = std::sqrt(c.y) / c.v;
  c.z1_split = std::pow(c.y, 1.0 / 6.0 + 0.5 * eps);
  c.z1_bracket = std::max(c.v, std::sqrt(c.z0));

  const double sy = std::sqrt(c.y);
  c.m1_first = static_cast<std::uint64_t>(std::ceil(xd - c.y));
  c.m1_last = x - 1;
  c.m2_first = static_cast<std::uint64_t>(std::ceil(0.5 * sy));
  c.m2_last = static_cast<std::uint64_t>(std::ceil(sy)) - 1;
  c.i2_empty = c.m2_first > c.m2_last;

  c.z0_trivial = c.z0 < 2.0;
  c.degenerate = c.i2_empty || (theta2 < 0.75 && c.v >= c.z0);

  // cap_safe: the pair sum drops pairs with p1*p2^2 > sqrt(Y).  A dropped
  // pair changes the identity only when its inner factor is 1, i.e. when
  // m = p1*p2 itself lies in I2 (any larger rough cofactor pushes m past
  // sqrt(Y)).  So the identity is exact for every m iff no such semiprime
  // sits in the window.
  c.cap_safe = true;
  if (!c.i2_empty && c.z0 >= 2.0) {
    auto ps = arith::primes_upto(static_cast<std::uint32_t>(std::ceil(c.z0)));
    std::vector<std::uint64_t> in_range;
    for (std::uint64_t p : ps) {
      double pd = static_cast<double>(p);
      if (pd >= c.v && pd < c.z0) in_range.push_back(p);
    }
    for (std::size_t i = 0; i < in_range.size() && c.cap_safe; ++i)
      for (std::size_t k = i + 1; k < in_range.size() && c.cap_safe; ++k) {
        std::uint64_t p2 = in_range[i], p1 = in_range[k];
        double excess = static_cast<double>(p1) * static_cast<double>(p2) *
                        static_cast<double>(p2);
        std::uint64_t q = p1 * p2;
        if (excess > sy && q >= c.m2_first && q <= c.m2_last)
          c.cap_safe = false;
      }
  }

  // split_valid: the two-term split reproduces lambda0 for every m in I2.
  if (c.i2_empty) {
    c.split_valid = true;
  } else if (c.z1_split <= c.z0) {
    // pairs q < p (both >= z1_split, p < z0) inside one m must be impossible
    c.split_valid =
        c.z0 * c.z0 <= static_cast<double>(c.m2_first) &&
        static_cast<double>(c.m2_last) < c.z1_split * c.z1_split * c.z1_split;
  } else {
    // empty second sum; need no prime in [z0, z1_split)
    double lo = std::max(2.0, c.z0);
    c.split_valid = true;
    if (c.z1_split > lo) {
      auto ps =
          arith::primes_upto(static_cast<std::uint32_t>(std::ceil(c.z1_split)));
      for (std::uint64_t p : ps) {
        double pd = static_cast<double>(p);
        if (pd >= c.z0 && pd < c.z1_split) { c.split_valid = false; break; }
      }
    }
  }
  return c;
}

int lambda0(std::uint64_t m, const IntervalConfig& cfg) {
  check_in_i2(m, cfg);
  return phi_rough(m, cfg.z0);
}

GammaParts gamma_decomposition(std::uint64_t m, const IntervalConfig& cfg) {
  check_in_i2(m, cfg);
  GammaParts g;
  g.g1 = phi_rough(m, cfg.v);
  auto ps = primes_of_in(m, cfg.v, cfg.z0);
  for (std::uint64_t p : ps) g.g2 += phi_rough(m / p, cfg.v);
  const double sy = std::sqrt(cfg.y);
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t k = i + 1; k < ps.size(); ++k) {
      std::uint64_t p2 = ps[i], p1 = ps[k];
      double cap = static_cast<double>(p1) * static_cast<double>(p2) *
                   static_cast<double>(p2);
      if (cap > sy) continue;  // pair excluded by the cap
      int term = phi_rough(m / (p1 * p2), static_cast<double>(p2));
      g.g3 += term;
      if (static_cast<double>(p1 * p2) < cfg.w) g.g4 += term;
      else g.g5 += term;
    }
  return g;
}

BetaParts beta_decomposition(std::uint64_t m, const IntervalConfig& cfg) {
  check_in_i2(m, cfg);
  BetaParts b;
  b.b1 = phi_rough(m, cfg.v);
  auto low = primes_of_in(m, cfg.v, cfg.z1_bracket);
  auto high = primes_of_in(m, cfg.z1_bracket, cfg.z0);
  for (std::uint64_t p : low) {
    b.b2 += phi_rough(m / p, static_cast<double>(p));
    b.b4 += phi_rough(m / p, cfg.v);
  }
  for (std::uint64_t p : high) b.b3 += phi_rough(m / p, static_cast<double>(p));
  for (std::size_t i = 0; i < low.size(); ++i)
    for (std::size_t k = i + 1; k < low.size(); ++k)
      b.b5 += phi_rough(m / (low[i] * low[k]), cfg.v);
  for (std::size_t i = 0; i < low.size(); ++i)
    for (std::size_t k = i + 1; k < low.size(); ++k)
      for (std::size_t l = k + 1; l < low.size(); ++l)
        b.b6 += phi_rough(m / (low[i] * low[k] * low[l]),
                          static_cast<double>(low[i]));
  return b;
}

std::int64_t lambda2_minus(std::uint64_t m, const IntervalConfig& cfg) {
  auto g = gamma_decomposition(m, cfg);
  return g.g1 - g.g2 + g.g5;
}

std::int64_t lambda2_plus(std::uint64_t m, const IntervalConfig& cfg) {
  auto b = beta_decomposition(m, cfg);
  return b.b1 - b.b4 + b.b5;
}

SplitParts lambda0_split(std::uint64_t m, const IntervalConfig& cfg) {
  check_in_i2(m, cfg);
  SplitParts s;
  s.valid = cfg.split_valid;
  s.first = phi_rough(m, cfg.z1_split);
  for (std::uint64_t p : primes_of_in(m, cfg.z1_split, cfg.z0))
    s.second += phi_rough(m / p, cfg.z1_split);
  return s;
}

const char* weight_kind_name(WeightKind k) {
  switch (k) {
    case WeightKind::lambda0: return "lambda0";
    case WeightKind::gamma1: return "gamma1";
    case WeightKind::gamma2: return "gamma2";
    case WeightKind::gamma3: return "gamma3";
    case WeightKind::gamma4: return "gamma4";
    case WeightKind::gamma5: return "gamma5";
    case WeightKind::beta1: return "beta1";
    case WeightKind::beta2: return "beta2";
    case WeightKind::beta3: return "beta3";
    case WeightKind::beta4: return "beta4";
    case WeightKind::beta5: return "beta5";
    case WeightKind::beta6: return "beta6";
    case WeightKind::lambda2_minus: return "lambda2_minus";
    case WeightKind::lambda2_plus: return "lambda2_plus";
    case WeightKind::lambda0_first: return "lambda0_first";
    case WeightKind::lambda0_second: return "lambda0_second";
  }
  return "unknown";
}

WeightTable build_weight_table(const IntervalConfig& cfg, WeightKind kind) {
  WeightTable t;
  t.kind = kind;
  t.m_first = cfg.m2_first;
  t.m_last = cfg.m2_last;
  if (cfg.i2_empty) return t;
  t.values.reserve(cfg.m2_last - cfg.m2_first + 1);
  for (std::uint64_t m = cfg.m2_first; m <= cfg.m2_last; ++m) {
    std::int64_t v = 0;
    switch (kind) {
      case WeightKind::lambda0: v = lambda0(m, cfg); break;
      case WeightKind::gamma1: v = gamma_decomposition(m, cfg).g1; break;
      case WeightKind::gamma2: v = gamma_decomposition(m, cfg).g2; break;
      case WeightKind::gamma3: v = gamma_decomposition(m, cfg).g3; break;
      case WeightKind::gamma4: v = gamma_decomposition(m, cfg).g4; break;
      case WeightKind::gamma5: v = gamma_decomposition(m, cfg).g5; break;
      case WeightKind::beta1: v = beta_decomposition(m, cfg).b1; break;
      case WeightKind::beta2: v = beta_decomposition(m, cfg).b2; break;
      case WeightKind::beta3: v = beta_decomposition(m, cfg).b3; break;
      case WeightKind::beta4: v = beta_decomposition(m, cfg).b4; break;
      case WeightKind::beta5: v = beta_decomposition(m, cfg).b5; break;
      case WeightKind::beta6: v = beta_decomposition(m, cfg).b6; break;
      case WeightKind::lambda2_minus: v = lambda2_minus(m, cfg); break;
      case WeightKind::lambda2_plus: v = lambda2_plus(m, cfg); break;
      case WeightKind::lambda0_first: v = lambda0_split(m, cfg).first; break;
      case WeightKind::lambda0_second: v = lambda0_split(m, cfg).second; break;
    }
    t.values.push_back(static_cast<std::int32_t>(v));
  }
  return t;
}

std::int64_t WeightTable::sum() const {
  std::int64_t s = 0;
  for (std::int32_t v : values) s += v;
  return s;
}

std::int32_t WeightTable::min_value() const {
  std::int32_t m = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    m = i == 0 ? values[i] : std::min(m, values[i]);
  return m;
}

std::int32_t WeightTable::max_value() const {
  std::int32_t m = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    m = i == 0 ? values[i] : std::max(m, values[i]);
  return m;
}

std::uint64_t WeightTable::support_size() const {
  std::uint64_t c = 0;
  for (std::int32_t v : values) c += v != 0;
  return c;
}

}  // namespace psq::decomp
